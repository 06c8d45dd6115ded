"""A linear complement ``K`` of ``Im(ad v)`` and gauge normal forms in ``K (x) m_A``."""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .adjoint import ToyHiggsDgla
from .invariants import InternalConsistencyError
from .lie import LieAlgebra, LieElement, ad_matrix, exp_ad, random_ideal_element
from .linfty import CheckEntry, CheckReport, cohomology
from .scalars import ArtinRing, Rational, format_artin


@dataclass
class HullData:
    v: LieElement
    image_basis: list[list[Rational]]
    complement_basis: list[list[Rational]]

    @property
    def algebra(self) -> LieAlgebra:
        return self.v.algebra

    def decompose(self, vec) -> tuple[list, list]:
        """Split ``vec`` into its Im(ad v) and K components."""
        basis = self.image_basis + self.complement_basis
        dim = self.algebra.dim
        coords = linalg.solve(linalg.transpose(basis, dim) if basis else [], list(vec), len(basis))
        if coords is None:
            raise InternalConsistencyError("image and complement do not span g")
        r = len(self.image_basis)
        img = [0] * dim
        comp = [0] * dim
        for c, b in zip(coords[:r], self.image_basis):
            img = [x + c * y for x, y in zip(img, b)]
        for c, b in zip(coords[r:], self.complement_basis):
            comp = [x + c * y for x, y in zip(comp, b)]
        return img, comp

    def in_complement(self, vec) -> bool:
        return linalg.in_span(self.complement_basis, list(vec))


def compute_hull(v: LieElement) -> HullData:
    """Image of ``ad v`` and its greedy complement in the canonical basis order."""
    alg = v.algebra
    m = ad_matrix(v)
    columns = linalg.transpose(m, alg.dim)
    image = linalg.column_space_basis([c for c in columns if any(c)])
    complement = linalg.extend_to_basis(image, alg.dim)
    hull = HullData(v, image, complement)
    if len(image) + len(complement) != alg.dim or linalg.determinant(image + complement) == 0:
        raise InternalConsistencyError("Im(ad v) + K is not a basis of g")
    return hull


def _coefficient_vector(x: LieElement, mono) -> list:
    return [c.coefficient(mono) if c else 0 for c in x.coeffs]


def normalize(hull: HullData, a: LieElement, transcript: list | None = None) -> tuple[LieElement, LieElement]:
    """``(lam, b)`` with ``b = e^{ad lam}(v + a) - v`` in ``K (x) m_A``.

    Order by order: at degree ``j`` the image parts of the degree-``j``
    coefficients of ``b`` are removed by solving ``ad v (delta) = image part``
    (free variables set to zero) and adding ``delta`` to ``lam``.
    """
    ring: ArtinRing = a.ring
    alg = hull.algebra
    v = hull.v.over(ring)
    admat = ad_matrix(hull.v)
    lam = alg.zero(ring)
    b = a
    for j in range(1, ring.order):
        delta = [ring.zero] * alg.dim
        touched = False
        for mono in ring.monomials(j):
            vec = _coefficient_vector(b, mono)
            if not any(vec):
                continue
            img, _ = hull.decompose(vec)
            if not any(img):
                continue
            sol = linalg.solve(admat, img, alg.dim)
            if sol is None:
                raise InternalConsistencyError("image component is not in Im(ad v)")
            monomial = ring.element({mono: 1})
            delta = [d + monomial * s for d, s in zip(delta, sol)]
            touched = True
        if touched:
            lam = lam + LieElement(alg, tuple(delta), ring)
            b = exp_ad(lam, v + a) - v
        if transcript is not None:
            transcript.append({"order": j, "b": [format_artin(c) for c in b.coeffs]})
    return lam, b


def in_complement_tensor(hull: HullData, b: LieElement) -> bool:
    ring = b.ring
    for mono in ring.monomials():
        vec = _coefficient_vector(b, mono)
        if any(vec) and (not sum(mono) or not hull.in_complement(vec)):
            return False
    return True


def verify_hull_surjectivity(hull: HullData, ring: ArtinRing, trials: int, rng: random.Random, solver: str = "order-by-order") -> CheckReport:
    """Random ``a`` in ``g (x) m_A`` normalized into ``K (x) m_A``; tangent checks.

    ``solver="zero"`` is a sabotage switch that skips normalization.
    """
    alg = hull.algebra
    report = CheckReport(f"hull[{alg.name}]")
    surj = CheckEntry("normal-form-in-K", 1, repr(ring))
    for _ in range(trials):
        a = random_ideal_element(alg, ring, rng)
        if solver == "zero":
            lam, b = alg.zero(ring), a
        elif solver == "order-by-order":
            lam, b = normalize(hull, a)
        else:
            raise ValueError(f"unknown solver {solver!r}")
        ok = in_complement_tensor(hull, b) and b == exp_ad(lam, hull.v.over(ring) + a) - hull.v.over(ring)
        surj.record(ok, lambda a=a, b=b: {"a": [format_artin(c) for c in a.coeffs], "normal_form": [format_artin(c) for c in b.coeffs]})
    report.entries.append(surj)

    tangent = CheckEntry("tangent-bijection", 1, "K -> g/Im(ad v)")
    dim = alg.dim
    full_rank = linalg.rank(hull.image_basis + hull.complement_basis) == dim
    h1 = len(cohomology(ToyHiggsDgla(alg, hull.v), 1))
    tangent.record(full_rank and len(hull.complement_basis) == dim - len(hull.image_basis) == h1, lambda: {"dim_K": len(hull.complement_basis), "dim_H1": h1})
    report.entries.append(tangent)

    inj = CheckEntry("first-order-injectivity", 1, "K (x) m/m^2")
    for _ in range(trials):
        if not hull.complement_basis:
            break
        c1 = [rng.randint(-5, 5) for _ in hull.complement_basis]
        c2 = [rng.randint(-5, 5) for _ in hull.complement_basis]
        if c1 == c2:
            continue
        diff = [0] * dim
        for x, y, b in zip(c1, c2, hull.complement_basis):
            diff = [d + (x - y) * e for d, e in zip(diff, b)]
        inj.record(not linalg.in_span(hull.image_basis, diff), lambda c1=c1, c2=c2: {"k1": c1, "k2": c2})
    report.entries.append(inj)
    return report
