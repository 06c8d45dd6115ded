"""Property tests for the structural invariants of each layer."""

import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from linfty_hitchin.adjoint import ToyHiggsDgla, build_adjoint_morphism, v_fixture
from linfty_hitchin.hitchin import FormAlgebra, build_hitchin_morphism, load_model, stratified_mc_sample
from linfty_hitchin.invariants import builtin_invariants, default_quotient, polarize
from linfty_hitchin.kuranishi import compute_hull, in_complement_tensor, normalize
from linfty_hitchin.lie import bch, bracket, builtin_algebra, exp_ad, random_element, random_ideal_element
from linfty_hitchin.linfty import SymWord, apply_Q, canonicalize, gauge_act, mc_defect, mc_pushforward, random_stratum_element
from linfty_hitchin.scalars import ArtinRing, as_rational, random_artin, small_extension_pair

ALGEBRAS = {name: builtin_algebra(name) for name in ("sl2", "gl2", "sl3", "gl3")}
POLYS = {name: builtin_invariants(alg) for name, alg in ALGEBRAS.items()}
MODELS = {name: load_model(name) for name in ("curve_sl2", "curve_gl2", "surface_sl2", "remark_gl2")}
MORPHISMS = {name: build_hitchin_morphism(m.dgla, m.quotient) for name, m in MODELS.items()}

seeds = st.integers(min_value=0, max_value=2**32)
rings = st.sampled_from([(1, 2), (1, 4), (2, 3), (3, 3)])
algebras = st.sampled_from(sorted(ALGEBRAS))
small_algebras = st.sampled_from(["sl2", "gl2"])
models = st.sampled_from(sorted(MODELS))


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rationals_in_lowest_terms(p, q):
    x = as_rational(f"{p}/{q}")
    assert x == Fraction(p, q) and x.denominator > 0


@given(rings, seeds)
def test_artin_ring_axioms(spec, seed):
    ring = ArtinRing(*spec)
    rng = random.Random(seed)
    a, b, c = (random_artin(ring, rng, ideal=False) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert all(v != 0 for v in a.coeffs.values())
    assert a.in_maximal_ideal() == (a.coefficient((0,) * spec[0]) == 0)


@given(rings, seeds)
def test_artin_nilpotency(spec, seed):
    ring = ArtinRing(*spec)
    a = random_artin(ring, random.Random(seed))
    assert not a ** ring.order


@given(st.integers(2, 5), seeds)
def test_small_extension_section(r, seed):
    big, small, proj = small_extension_pair(r)
    y = random_artin(small, random.Random(seed), ideal=False)
    assert proj(y.lift_to(big)) == y


@given(algebras, seeds)
def test_bracket_antisymmetry_and_jacobi(name, seed):
    alg = ALGEBRAS[name]
    rng = random.Random(seed)
    x, y, z = (random_element(alg, rng) for _ in range(3))
    assert bracket(x, y) == -bracket(y, x)
    assert (bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)).is_zero()


@given(small_algebras, rings, seeds)
def test_exp_ad_automorphism_and_inverse(name, spec, seed):
    alg = ALGEBRAS[name]
    ring = ArtinRing(*spec)
    rng = random.Random(seed)
    lam = random_ideal_element(alg, ring, rng)
    x, y = random_element(alg, rng).over(ring), random_element(alg, rng).over(ring)
    assert exp_ad(lam, bracket(x, y)) == bracket(exp_ad(lam, x), exp_ad(lam, y))
    assert exp_ad(-lam, exp_ad(lam, x)) == x


@given(small_algebras, seeds)
def test_bch_group_law(name, seed):
    alg = ALGEBRAS[name]
    ring = ArtinRing(2, 4, names=("t", "s"))
    rng = random.Random(seed)
    a, b = random_ideal_element(alg, ring, rng), random_ideal_element(alg, ring, rng)
    x = random_element(alg, rng).over(ring)
    assert exp_ad(bch(a, b), x) == exp_ad(a, exp_ad(b, x))


@given(algebras, seeds, st.data())
def test_polarize_symmetric_and_multilinear(name, seed, data):
    alg = ALGEBRAS[name]
    p = data.draw(st.sampled_from(POLYS[name]))
    k = data.draw(st.integers(1, p.degree))
    rng = random.Random(seed)
    args = [random_element(alg, rng) for _ in range(k)]
    v = random_element(alg, rng)
    base = polarize(p, k, args, v)
    perm = data.draw(st.permutations(range(k)))
    assert polarize(p, k, [args[i] for i in perm], v) == base
    a, b = data.draw(st.integers(-4, 4)), data.draw(st.integers(-4, 4))
    x2 = random_element(alg, rng)
    lhs = polarize(p, k, [args[0].scale(a) + x2.scale(b)] + args[1:], v)
    assert lhs == a * base + b * polarize(p, k, [x2] + args[1:], v)
    assert polarize(p, p.degree + 1, [random_element(alg, rng) for _ in range(p.degree + 1)], v) == 0


@given(algebras, seeds, st.data())
def test_invariants_homogeneous(name, seed, data):
    alg = ALGEBRAS[name]
    p = data.draw(st.sampled_from(POLYS[name]))
    c = Fraction(data.draw(st.integers(-6, 6)), data.draw(st.integers(1, 5)))
    x = random_element(alg, random.Random(seed))
    assert p.evaluate(x.scale(c)) == c**p.degree * p.evaluate(x)


@given(st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 2)]), st.data())
def test_forms_graded_commutative(ab, data):
    forms = FormAlgebra(*ab)
    m1 = data.draw(st.sampled_from(forms.monomials()))
    m2 = data.draw(st.sampled_from(forms.monomials()))
    r12, r21 = forms.mul_monomials(m1, m2), forms.mul_monomials(m2, m1)
    if r12 is None:
        assert r21 is None
    else:
        sign = (-1) ** (forms.degree(m1) * forms.degree(m2))
        assert r12[0] == r21[0] and r12[1] == sign * r21[1]


@given(models, seeds, st.integers(2, 3))
def test_koszul_coherence_of_q_and_h(name, seed, k):
    model = MODELS[name]
    dgla = model.dgla
    rng = random.Random(seed)
    strata = sorted({dgla.stratum(i) for i in range(dgla.dim)})
    word = SymWord(tuple(random_stratum_element(dgla, rng.choice(strata), rng) for _ in range(k)))
    perm = list(range(k))
    rng.shuffle(perm)
    moved = word.permuted(perm)
    assert canonicalize(dgla, [moved]) == canonicalize(dgla, [word])
    assert canonicalize(dgla, apply_Q(dgla, [moved])) == canonicalize(dgla, apply_Q(dgla, [word]))
    h = MORPHISMS[name]
    assert h.on_word(moved) == h.on_word(word)


@given(models, seeds)
def test_gauge_preserves_mc_in_hitchin_models(name, seed):
    model = MODELS[name]
    dgla = model.dgla
    ring = ArtinRing(1, 3, names=("t",))
    rng = random.Random(seed)
    u = stratified_mc_sample(dgla, ring, rng)
    assert not mc_defect(dgla, u)
    lam = dgla.element({i: ring.gen(0) * rng.randint(-3, 3) for i in dgla.space.indices(0)})
    assert not mc_defect(dgla, gauge_act(dgla, lam, u))


@given(small_algebras, st.sampled_from(["regular-ss", "regular-nilpotent", "zero"]), seeds)
def test_gauge_invariance_of_pushforward(name, kind, seed):
    alg = ALGEBRAS[name]
    v = v_fixture(alg, kind)
    h = build_adjoint_morphism(default_quotient(alg), v)
    src: ToyHiggsDgla = h.source
    ring = ArtinRing(2, 3, names=("t", "s"))
    rng = random.Random(seed)
    x = src.lift(b=random_ideal_element(alg, ring, rng))
    lam = src.lift(a=random_ideal_element(alg, ring, rng))
    moved = gauge_act(src, lam, x)
    assert not mc_defect(src, moved)
    assert mc_pushforward(h, moved) == mc_pushforward(h, x)


@given(st.sampled_from(["sl2", "sl3"]), st.sampled_from(["regular-ss", "regular-nilpotent"]), seeds)
def test_hull_normal_form(name, kind, seed):
    alg = ALGEBRAS[name]
    v = v_fixture(alg, kind)
    hull = compute_hull(v)
    ring = ArtinRing(1, 3, names=("t",))
    a = random_ideal_element(alg, ring, random.Random(seed))
    lam, b = normalize(hull, a)
    assert in_complement_tensor(hull, b)
    assert exp_ad(lam, v.over(ring) + a) - v.over(ring) == b
    assert len(hull.complement_basis) == alg.dim - len(hull.image_basis)
