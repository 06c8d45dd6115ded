from fractions import Fraction

import pytest
import sympy

from linfty_hitchin.lie import (
    LieAlgebra,
    LieAlgebraError,
    ad_matrix,
    bch,
    bracket,
    builtin_algebra,
    exp_ad,
)
from linfty_hitchin.scalars import ArtinRing


@pytest.fixture
def sl2():
    return builtin_algebra("sl2")


def test_sl2_basis_bracket(sl2):
    e, f, h = (sl2.basis(i) for i in range(3))
    assert bracket(e, f) == h
    assert bracket(h, e) == e.scale(2)
    assert bracket(e, e).is_zero()


def test_bracket_matches_matrix_commutator():
    gl3 = builtin_algebra("gl3")
    x = gl3.element([1, -2, 0, 3, 1, 4, 0, -1, 2])
    y = gl3.element([0, 1, 5, -1, 2, 0, 3, 0, -4])
    mx, my = sympy.Matrix(x.to_matrix()), sympy.Matrix(y.to_matrix())
    assert sympy.Matrix(bracket(x, y).to_matrix()) == mx * my - my * mx


def test_bracket_over_artin_ring():
    gl2 = builtin_algebra("gl2")
    ring = ArtinRing(1, 3, names=("t",))
    t = ring.gen(0)
    e11 = gl2.from_matrix([[1, 0], [0, 0]]).over(ring) * t
    e12 = gl2.from_matrix([[0, 1], [0, 0]]).over(ring) * t
    assert bracket(e11, e12) == gl2.from_matrix([[0, 1], [0, 0]]).over(ring) * (t * t)


def test_exp_ad_identity(sl2):
    ring = ArtinRing(1, 3, names=("t",))
    x = sl2.basis(0).over(ring)
    assert exp_ad(sl2.zero(ring), x) == x


def test_exp_ad_first_order(sl2):
    ring = ArtinRing(1, 2, names=("t",))
    t = ring.gen(0)
    e, h = sl2.basis(0).over(ring), sl2.basis(2).over(ring)
    assert exp_ad(e * t, h) == h - e * (2 * t)


def test_exp_ad_second_order(sl2):
    ring = ArtinRing(1, 3, names=("t",))
    t = ring.gen(0)
    e, f, h = (sl2.basis(i).over(ring) for i in range(3))
    assert exp_ad(e * t, f) == f + h * t - e * (t * t)


def test_exp_ad_rejects_unit_parameter(sl2):
    ring = ArtinRing(1, 3, names=("t",))
    with pytest.raises(LieAlgebraError):
        exp_ad(sl2.basis(0).over(ring), sl2.basis(1).over(ring))


def test_builtin_dimensions_and_degrees():
    sl2 = builtin_algebra("sl2")
    gl2 = builtin_algebra("gl2")
    gl1 = builtin_algebra("gl1")
    assert (sl2.dim, len(sl2.degrees), sl2.degrees) == (3, 1, (2,))
    assert (gl2.dim, len(gl2.degrees), gl2.degrees) == (4, 2, (1, 2))
    assert (gl1.dim, gl1.degrees) == (1, (1,))
    assert bracket(gl1.basis(0), gl1.basis(0)).is_zero()
    assert builtin_algebra("sl3").dim == 8


def test_jacobi_violation_rejected():
    with pytest.raises(LieAlgebraError):
        LieAlgebra("bad", ["a", "b", "c"], {(0, 1, 2): 1, (1, 0, 2): -1, (1, 2, 0): 1, (2, 1, 0): -1, (0, 2, 0): 1, (2, 0, 0): -1})


def test_antisymmetry_violation_rejected():
    with pytest.raises(LieAlgebraError):
        LieAlgebra("bad", ["a", "b"], {(0, 1, 0): 1})


def test_unknown_algebra():
    with pytest.raises(LieAlgebraError):
        builtin_algebra("so5")


def test_ad_matrix_of_regular_semisimple(sl2):
    v = sl2.from_matrix([[1, 0], [0, -1]])
    assert sympy.Matrix(ad_matrix(v)).rank() == 2


def test_bch_of_commuting_elements(sl2):
    ring = ArtinRing(1, 4, names=("t",))
    t = ring.gen(0)
    h = sl2.basis(2).over(ring)
    assert bch(h * t, h * (t * t)) == h * (t + t * t)


def test_bch_first_correction(sl2):
    ring = ArtinRing(2, 3, names=("t", "s"))
    t, s = ring.gen(0), ring.gen(1)
    e, f, h = (sl2.basis(i).over(ring) for i in range(3))
    assert bch(e * t, f * s) == e * t + f * s + h * (t * s * Fraction(1, 2))
