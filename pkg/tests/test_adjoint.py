import random

import pytest

from linfty_hitchin.adjoint import (
    ToyBaseDgla,
    build_adjoint_morphism,
    centraliser_check,
    chi_difference_oracle,
    v_fixture,
    verify_adjoint_morphism,
    verify_def_equals_chi,
)
from linfty_hitchin.invariants import default_quotient
from linfty_hitchin.lie import LieAlgebraError, builtin_algebra
from linfty_hitchin.scalars import ArtinRing


@pytest.fixture(scope="module")
def sl2():
    return builtin_algebra("sl2")


@pytest.fixture(scope="module")
def h_sl2(sl2):
    return build_adjoint_morphism(default_quotient(sl2), sl2.from_matrix([[1, 0], [0, -1]]))


def test_words_with_two_degree_zero_factors_vanish(h_sl2, sl2):
    src = h_sl2.source
    a = src.lift(a=sl2.basis(0))
    b = src.lift(a=sl2.basis(1))
    c = src.lift(b=sl2.basis(2))
    assert not h_sl2.h(2, [a, b])
    assert not h_sl2.h(2, [a, c])


def test_h2_on_e_f(h_sl2, sl2):
    src = h_sl2.source
    out = h_sl2.h(2, [src.lift(b=sl2.basis(0)), src.lift(b=sl2.basis(1))])
    assert out.coeffs == {0: -1}


def test_target_is_abelian_degree_one():
    b = ToyBaseDgla(2)
    assert b.abelian and tuple(b.space.degrees) == (1, 1)


def test_def_equals_chi_zero(sl2):
    q = default_quotient(sl2)
    v = sl2.from_matrix([[1, 0], [0, -1]])
    ring = ArtinRing(1, 3, names=("t",))
    assert chi_difference_oracle(q, v, sl2.zero(ring)) == [ring.zero]


def test_def_equals_chi_example(sl2):
    q = default_quotient(sl2)
    v = sl2.from_matrix([[1, 0], [0, -1]])
    ring = ArtinRing(1, 3, names=("t",))
    t = ring.gen(0)
    b = v.over(ring) * t
    assert chi_difference_oracle(q, v, b) == [-2 * t - t * t]


def test_def_equals_chi_gl3_two_variables():
    gl3 = builtin_algebra("gl3")
    q = default_quotient(gl3)
    ring = ArtinRing(2, 3, names=("t", "s"))
    report = verify_def_equals_chi(q, v_fixture(gl3, "regular-ss"), ring, 50, random.Random(0))
    assert report.passed and report.trials >= 200


@pytest.mark.parametrize("name", ["sl2", "gl2", "sl3", "gl3"])
@pytest.mark.parametrize("kind", ["regular-ss", "regular-nilpotent", "zero"])
def test_adjoint_morphism_fixtures(name, kind):
    alg = builtin_algebra(name)
    q = default_quotient(alg)
    report = verify_adjoint_morphism(q, v_fixture(alg, kind), q.max_degree, 3, random.Random(1))
    assert report.passed


@pytest.mark.parametrize("perturb", ["flip-sign", "scale-h2"])
def test_adjoint_negative_controls(sl2, perturb):
    q = default_quotient(sl2)
    report = verify_adjoint_morphism(q, v_fixture(sl2, "regular-ss"), 2, 5, random.Random(1), perturb)
    assert not report.passed


def test_centraliser_dimensions(sl2):
    assert centraliser_check(sl2, v_fixture(sl2, "regular-ss")) == (1, 1, 1)
    assert centraliser_check(sl2, v_fixture(sl2, "zero")) == (3, 3, 3)
    gl3 = builtin_algebra("gl3")
    h0, ker, h1 = centraliser_check(gl3, v_fixture(gl3, "regular-nilpotent"))
    assert h0 == ker == h1 == 3


def test_v_fixtures(sl2):
    assert v_fixture(sl2, "regular-ss") == sl2.from_matrix([[1, 0], [0, -1]])
    assert v_fixture(sl2, "regular-nilpotent") == sl2.basis(0)
    assert v_fixture(sl2, "coeffs:1,2,3") == sl2.element([1, 2, 3])
    with pytest.raises(LieAlgebraError):
        v_fixture(sl2, "semisimple")
