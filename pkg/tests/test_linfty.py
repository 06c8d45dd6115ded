import random

import pytest

from linfty_hitchin.adjoint import ToyHiggsDgla, build_adjoint_morphism
from linfty_hitchin.hitchin import load_model
from linfty_hitchin.invariants import default_quotient
from linfty_hitchin.lie import builtin_algebra
from linfty_hitchin.linfty import (
    DglaError,
    GradedSpace,
    LinftyMorphism,
    SymWord,
    abelian_dgla,
    canonicalize,
    check_codifferential,
    check_linfty_morphism,
    coderivation_Qk_km1,
    coderivation_Qkk,
    cohomology,
    gauge_act,
    is_exact,
    koszul_sign,
    mc_pushforward,
    mc_set_check,
    unshuffles,
)
from linfty_hitchin.scalars import ArtinRing


@pytest.fixture(scope="module")
def sl2():
    return builtin_algebra("sl2")


@pytest.fixture(scope="module")
def toy(sl2):
    return ToyHiggsDgla(sl2, sl2.from_matrix([[1, 0], [0, -1]]))


def test_unshuffles_small():
    assert unshuffles(1, 2) == [(0, 1), (1, 0)]
    assert len(unshuffles(2, 4)) == 6
    assert unshuffles(1, 1) == [(0,)]
    assert unshuffles(0, 0) == [()]


def test_unshuffles_are_increasing_blocks():
    for perm in unshuffles(2, 5):
        assert list(perm[:2]) == sorted(perm[:2])
        assert list(perm[2:]) == sorted(perm[2:])


def test_koszul_sign_counts_odd_swaps():
    assert koszul_sign((1, 0), [1, 1]) == -1
    assert koszul_sign((1, 0), [0, 1]) == 1
    assert koszul_sign((2, 0, 1), [1, 1, 1]) == 1
    assert koszul_sign((2, 1, 0), [1, 1, 1]) == -1


def test_q_one_is_minus_d(toy):
    x = toy.basis(0)  # e in degree 0, shifted degree -1
    out = coderivation_Qkk(toy, SymWord((x,)))
    assert len(out) == 1 and out[0].factors[0] == -toy.d(x) and out[0].coefficient == 1


def test_q_kk_on_even_shifted_factors():
    # degree-1 factors have shifted degree 0: no Koszul signs
    ab = abelian_dgla("ab", ["x", "y", "z"], [1, 1, 2], differential=[{2: 1}, {2: 3}, {}])
    a, b = ab.basis(0), ab.basis(1)
    out = coderivation_Qkk(ab, SymWord((a, b)))
    assert [w.coefficient for w in out] == [1, 1]
    expected = [SymWord((-ab.d(a), b)), SymWord((-ab.d(b), a))]
    assert canonicalize(ab, out) == canonicalize(ab, expected) == {(0, 2): -3, (1, 2): -1}


def test_q_k_km1_length_two(toy):
    a, b = toy.basis(0), toy.basis(4)
    out = coderivation_Qk_km1(toy, SymWord((a, b)))
    assert len(out) == 1
    assert out[0].factors[0] == toy.bracket(a, b).scale((-1) ** a.degree())


def test_q_k_km1_abelian_is_zero():
    ab = abelian_dgla("ab", ["x", "y"], [0, 1])
    assert coderivation_Qk_km1(ab, SymWord((ab.basis(0), ab.basis(1)))) == []


def test_codifferential_abelian():
    ab = abelian_dgla("ab", ["x", "y", "z"], [0, 1, 1])
    assert check_codifferential(ab, 3).passed


def test_codifferential_toy_sl2(toy):
    report = check_codifferential(toy, 5, random.Random(0))
    assert report.passed and report.trials > 0


def test_codifferential_hitchin_model():
    model = load_model("curve_sl2")
    report = check_codifferential(model.dgla, 4, random.Random(0), trials=2)
    assert report.passed and report.trials > 0


def test_codifferential_flip_detected(toy):
    assert not check_codifferential(toy, 3, random.Random(0), flip_q2=True).passed


def test_zero_morphism(toy):
    target = abelian_dgla("B", ["c"], [1])
    h = LinftyMorphism(toy, target, {}, 3)
    assert check_linfty_morphism(h, 3, 2, random.Random(0)).passed


def test_adjoint_morphism_sl2(sl2):
    h = build_adjoint_morphism(default_quotient(sl2), sl2.from_matrix([[1, 0], [0, -1]]))
    assert check_linfty_morphism(h, 4, 5, random.Random(1)).passed


def test_scaled_h2_fails_at_k2(sl2):
    h = build_adjoint_morphism(default_quotient(sl2), sl2.from_matrix([[1, 0], [0, -1]]), "scale-h2")
    report = check_linfty_morphism(h, 2, 5, random.Random(1))
    failure = report.first_failure()
    assert failure is not None and failure.k == 2 and failure.first_counterexample["word"]


def test_mc_zero_and_toy_degree_one(toy, sl2):
    ring = ArtinRing(1, 3, names=("t",))
    t = ring.gen(0)
    assert mc_set_check(toy, ring, toy.zero())
    b = sl2.element([t, -2 * t, t * t])
    assert mc_set_check(toy, ring, toy.lift(b=b))


def test_mc_rejects_unit_coefficients(toy, sl2):
    ring = ArtinRing(1, 3, names=("t",))
    with pytest.raises(DglaError):
        mc_set_check(toy, ring, toy.lift(b=sl2.element([ring.one, 0, 0])))


def test_hitchin_non_commuting_is_not_mc():
    model = load_model("surface_sl2")
    dgla = model.dgla
    ring = ArtinRing(1, 3, names=("t",))
    e = dgla.algebra.basis(0).over(ring) * ring.gen(0)
    u = dgla.element_from_forms({0b10: e})  # t * xi2 (x) e, while theta uses h
    assert not mc_set_check(dgla, ring, u)


def test_gauge_identity(toy, sl2):
    ring = ArtinRing(1, 3, names=("t",))
    u = toy.lift(b=sl2.element([ring.gen(0), 0, 0]))
    assert gauge_act(toy, toy.zero(), u) == u


def test_gauge_rejects_odd_parameter(toy, sl2):
    ring = ArtinRing(1, 3, names=("t",))
    lam = toy.lift(b=sl2.element([ring.gen(0), 0, 0]))
    with pytest.raises(DglaError):
        gauge_act(toy, lam, toy.zero())


def test_pushforward_zero(sl2):
    h = build_adjoint_morphism(default_quotient(sl2), sl2.from_matrix([[1, 0], [0, -1]]))
    assert not mc_pushforward(h, h.source.zero())


def test_pushforward_example(sl2):
    h = build_adjoint_morphism(default_quotient(sl2), sl2.from_matrix([[1, 0], [0, -1]]))
    ring = ArtinRing(1, 3, names=("t",))
    t = ring.gen(0)
    b = sl2.from_matrix([[1, 0], [0, -1]]).over(ring) * t
    x = h.source.lift(b=b)
    push = mc_pushforward(h, x)
    assert push.coeffs == {0: -2 * t - t * t}
    h1 = h.h(1, [x])
    h2 = h.h(2, [x, x])
    assert push == h1 + h2.scale(ring.scalar(1) / 2)


def test_cohomology_zero_differential():
    ab = abelian_dgla("ab", ["x", "y", "z"], [0, 1, 1])
    assert len(cohomology(ab, 1)) == 2 and len(cohomology(ab, 0)) == 1


def test_cohomology_toy(toy):
    h0 = cohomology(toy, 0)
    assert len(h0) == 1 and set(h0[0].coeffs) == {2}  # the diagonal h
    assert len(cohomology(toy, 1)) == 1


def test_is_exact(toy):
    assert is_exact(toy, toy.d(toy.basis(0)))
    assert not is_exact(toy, toy.basis(5))  # h * eps is not hit


def test_axioms_of_bundled_dglas(toy):
    assert toy.check_axioms(random.Random(0)) == []
    assert load_model("surface_gl2").dgla.check_axioms(random.Random(0)) == []


def test_graded_space_shift():
    space = GradedSpace(["a", "b"], [0, 1])
    assert tuple(space.shift(1).degrees) == (-1, 0)
