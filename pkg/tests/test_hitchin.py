import random

import pytest

from linfty_hitchin.hitchin import (
    FormAlgebra,
    HiggsModelDgla,
    ModelError,
    build_hitchin_morphism,
    bundled_models,
    load_model,
    model_from_dict,
    obstruction_map,
    verify_def_equals_hitchin,
    verify_hitchin_morphism,
    verify_obstruction,
)
from linfty_hitchin.invariants import default_quotient
from linfty_hitchin.lie import bracket, builtin_algebra
from linfty_hitchin.linfty import DglaError, is_exact, mc_pushforward
from linfty_hitchin.scalars import ArtinRing


@pytest.fixture(scope="module")
def curve():
    return load_model("curve_sl2")


def test_bundled_models_present():
    assert {"curve_sl2", "curve_sl2_b1", "curve_gl2", "curve_gl2_b1", "surface_sl2", "surface_gl2", "remark_gl2"} <= set(bundled_models())


def test_form_algebra_signs():
    forms = FormAlgebra(1, 2)
    xi, eta1, eta2 = 0b001, 0b010, 0b100
    assert forms.mul_monomials(eta1, xi) == (xi | eta1, -1)
    assert forms.mul_monomials(xi, eta1) == (xi | eta1, 1)
    assert forms.mul_monomials(eta1, eta1) is None
    assert forms.bidegree(xi | eta2) == (1, 1)


def test_dbar_squares_to_zero(curve):
    forms = curve.dgla.forms
    assert not forms.dbar_is_zero
    for m in forms.monomials():
        assert not forms.dbar(forms.dbar_monomial(m))


def test_model_checks(curve):
    assert curve.dgla.check_model() == []


def test_h1_kills_ad_theta_exact_direction(curve):
    dgla = curve.dgla
    alg = dgla.algebra
    x = bracket(alg.basis(0), dgla.theta[0])  # [e, theta] is ad-theta exact
    h = build_hitchin_morphism(dgla, curve.quotient)
    s = dgla.element_from_forms({0b011: x})  # xi1 eta1 (x) [e, theta]
    assert not h.h(1, [s])


def test_words_without_enough_one_forms_vanish(curve):
    dgla = curve.dgla
    alg = dgla.algebra
    h = build_hitchin_morphism(dgla, curve.quotient)
    a = dgla.element_from_forms({0b010: alg.basis(0)})  # eta1 (x) e, bidegree (0,1)
    b = dgla.element_from_forms({0b100: alg.basis(1)})
    assert not h.h(1, [a])
    assert not h.h(2, [a, b])


def test_curve_b1_k2():
    model = load_model("curve_sl2_b1")
    assert verify_hitchin_morphism(model.dgla, model.quotient, 2, 5, random.Random(0)).passed


def test_surface_gl2_k3():
    model = load_model("surface_gl2")
    gl2 = model.dgla.algebra
    assert model.dgla.theta == [gl2.from_matrix([[1, 0], [0, 0]]), gl2.from_matrix([[0, 0], [0, 1]])]
    assert [p.label for p in model.quotient.components] == ["gl2:tr", "gl2:det"]
    assert verify_hitchin_morphism(model.dgla, model.quotient, 3, 3, random.Random(0)).passed


def test_wedge_sign_flip_fails_in_case2():
    model = load_model("surface_sl2")
    report = verify_hitchin_morphism(model.dgla, model.quotient, 3, 3, random.Random(0), flip_koszul="wedge")
    # the morphism identities break only in the Case 2 strata (graded symmetry breaks too)
    failing = [e for e in report.entries if e.failures and e.identity.startswith("mor")]
    assert failing and all(e.profile.startswith("case2:") for e in failing)


def test_transfer_sign_flip_fails(curve):
    report = verify_hitchin_morphism(curve.dgla, curve.quotient, 2, 3, random.Random(0), flip_koszul="beta")
    assert not report.passed


def test_pushforward_zero(curve):
    h = build_hitchin_morphism(curve.dgla, curve.quotient)
    assert not mc_pushforward(h, curve.dgla.zero())


def test_pushforward_example(curve):
    dgla = curve.dgla
    ring = ArtinRing(1, 3, names=("t",))
    t = ring.gen(0)
    s = dgla.element_from_forms({0b001: dgla.algebra.from_matrix([[1, 0], [0, -1]]).over(ring) * t})
    push = mc_pushforward(build_hitchin_morphism(dgla, curve.quotient), s)
    assert push.serialize() == {"sl2:det:u1^2*1": "-2/1*t^1 + -1/1*t^2"}


def test_pushforward_of_antiholomorphic_part(curve):
    dgla = curve.dgla
    ring = ArtinRing(1, 3, names=("t",))
    t = ring.gen(0)
    # eta2 (x) h is dbar-closed and commutes with theta, hence MC
    s = dgla.element_from_forms({0b100: dgla.algebra.basis(2).over(ring) * t})
    assert not mc_pushforward(build_hitchin_morphism(dgla, curve.quotient), s)


@pytest.mark.parametrize("name", ["curve_sl2", "surface_gl2", "remark_gl2"])
def test_def_equals_hitchin(name):
    model = load_model(name)
    ring = ArtinRing(1, 3, names=("t",))
    assert verify_def_equals_hitchin(model.dgla, model.quotient, ring, 5, random.Random(0)).passed


def test_obstruction_of_zero(curve):
    assert not obstruction_map(curve.dgla, curve.quotient, curve.dgla.zero())


def test_obstruction_of_coboundary(curve):
    rng = random.Random(3)
    dgla = curve.dgla
    h = build_hitchin_morphism(dgla, curve.quotient)
    for _ in range(10):
        x = dgla.element({i: rng.randint(-3, 3) for i in dgla.space.indices(1)})
        assert is_exact(h.target, obstruction_map(dgla, curve.quotient, dgla.d(x), h))


def test_obstruction_rejects_non_cocycle(curve):
    dgla = curve.dgla
    # eta1 (x) ... in degree 2: xi1 eta1 (x) e is closed? pick a 2-form whose dbar is nonzero
    bad = dgla.element_from_forms({0b010 | 0b001: dgla.algebra.basis(0)})
    if not dgla.d(bad):
        pytest.skip("fixture element happens to be closed")
    with pytest.raises(DglaError):
        obstruction_map(dgla, curve.quotient, bad)


@pytest.mark.parametrize("name", ["curve_sl2", "central_gl2"])
def test_lift_obstructions_vanish(name):
    model = load_model(name)
    report = verify_obstruction(model.dgla, model.quotient, 10, random.Random(0))
    assert report.passed


def test_central_model_has_genuine_obstructions():
    model = load_model("central_gl2")
    report = verify_obstruction(model.dgla, model.quotient, 10, random.Random(0))
    counted = next(e for e in report.entries if e.identity == "non-exact-obstruction-classes")
    assert counted.trials > 0


def test_generic_cocycles_are_not_killed():
    model = load_model("central_gl2")
    assert not verify_obstruction(model.dgla, model.quotient, 10, random.Random(0), generic=True).passed


def test_theta_must_commute():
    sl2 = builtin_algebra("sl2")
    dgla = HiggsModelDgla(FormAlgebra(2, 1), sl2, [sl2.basis(0), sl2.basis(1)])
    assert "[theta, theta] != 0" in dgla.check_model()


def test_model_from_dict_errors():
    with pytest.raises(ModelError):
        model_from_dict({"name": "x", "algebra": "sl2", "hol": 1, "antihol": 1, "theta": []})
    with pytest.raises(ModelError):
        load_model("/nonexistent/model.toml")


def test_quotient_defaults_to_charpoly(curve):
    assert [p.label for p in curve.quotient.components] == [p.label for p in default_quotient(curve.dgla.algebra).components]
