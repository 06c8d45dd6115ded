"""The adjoint quotient as an L-infinity morphism.

``C = g (x) Q[eps]/eps^2`` with ``d x = [v, x] eps`` and the inherited
bracket; ``B = Q^N[-1]`` is abelian.  The morphism has
``h_k((a_1 + b_1 eps) ... (a_k + b_k eps)) = (P_{d_i,k}(p_i)(b_1..b_k; v))_i``.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import linalg
from .invariants import AdjointQuotient, matrix_oracle, polarize
from .lie import LieAlgebra, LieAlgebraError, LieElement, ad_matrix, bracket, exp_ad, random_ideal_element
from .linfty import CheckEntry, CheckReport, Dgla, GradedElement, GradedSpace, LinftyMorphism, abelian_dgla, check_linfty_morphism
from .linfty import cohomology, gauge_act, mc_pushforward, mc_set_check
from .scalars import ArtinRing, RingElement, as_rational, format_artin, format_rational


class ToyHiggsDgla(Dgla):
    """``C^0 = g`` (indices ``0..n-1``) and ``C^1 = g eps`` (indices ``n..2n-1``)."""

    def __init__(self, algebra: LieAlgebra, v: LieElement):
        if v.ring is not None:
            raise LieAlgebraError("v must have rational coefficients")
        self.algebra = algebra
        self.v = v
        n = algebra.dim
        labels = list(algebra.basis_labels) + [f"{lab}*eps" for lab in algebra.basis_labels]
        space = GradedSpace(labels, [0] * n + [1] * n)
        diff = []
        for i in range(n):
            image = bracket(v, algebra.basis(i)).coeffs
            diff.append({n + k: c for k, c in enumerate(image) if c})
        diff += [{} for _ in range(n)]
        table = algebra._table

        def bracket_basis(i: int, j: int) -> dict:
            if i >= n and j >= n:
                return {}
            shift = n if (i >= n or j >= n) else 0
            return {k + shift: c for k, c in table[i % n][j % n]}

        super().__init__(f"C({algebra.name})", space, diff, bracket_basis)

    def lift(self, a: LieElement | None = None, b: LieElement | None = None) -> GradedElement:
        """The element ``a + b eps``."""
        n = self.algebra.dim
        coeffs: dict = {}
        if a is not None:
            coeffs.update({i: c for i, c in enumerate(a.coeffs) if c})
        if b is not None:
            coeffs.update({n + i: c for i, c in enumerate(b.coeffs) if c})
        return GradedElement(self, coeffs)

    def eps_part(self, x: GradedElement) -> LieElement:
        n = self.algebra.dim
        coeffs = [0] * n
        for i, c in x.coeffs.items():
            if i >= n:
                coeffs[i - n] = c
        ring = None
        for c in coeffs:
            if isinstance(c, RingElement):
                ring = c.ring
        if ring is not None:
            coeffs = [c if isinstance(c, RingElement) else ring.scalar(c) for c in coeffs]
        return LieElement(self.algebra, tuple(coeffs), ring)

    def base_part(self, x: GradedElement) -> LieElement:
        n = self.algebra.dim
        coeffs = [x.coeffs.get(i, 0) for i in range(n)]
        return LieElement(self.algebra, tuple(coeffs))


def ToyBaseDgla(rank: int, labels: Sequence[str] | None = None) -> Dgla:
    """``Q^N[-1]``: abelian, zero differential, concentrated in degree 1."""
    labels = list(labels) if labels is not None else [f"chi{i + 1}" for i in range(rank)]
    return abelian_dgla(f"B({rank})", labels, [1] * rank)


def build_adjoint_morphism(q: AdjointQuotient, v: LieElement, perturb: str | None = None) -> LinftyMorphism:
    """Taylor coefficients of the adjoint-quotient morphism at ``v``.

    ``perturb`` is a sabotage switch for negative controls: ``"flip-sign"``
    negates ``h_2`` and ``"scale-h2"`` doubles it.
    """
    source = ToyHiggsDgla(q.algebra, v)
    target = ToyBaseDgla(q.rank, [p.label for p in q.components])
    K = q.max_degree

    def make(k: int):
        factor = 1
        if k == 2 and perturb == "flip-sign":
            factor = -1
        elif k == 2 and perturb == "scale-h2":
            factor = 2
        elif perturb not in (None, "flip-sign", "scale-h2"):
            raise ValueError(f"unknown perturbation {perturb!r}")

        def h_k(args: list[GradedElement]) -> GradedElement:
            bs = [source.eps_part(x) for x in args]
            out = {}
            for i, p in enumerate(q.components):
                val = polarize(p, k, bs, v)
                if val:
                    out[i] = val * factor
            return GradedElement(target, out)

        return h_k

    return LinftyMorphism(source, target, {k: make(k) for k in range(1, K + 1)}, K, name=f"h[{q.algebra.name}]")


# fixtures --------------------------------------------------------------------


def v_fixture(algebra: LieAlgebra, kind: str) -> LieElement:
    """``regular-ss``, ``regular-nilpotent``, ``zero`` or ``coeffs:<c1,c2,...>``."""
    if kind == "zero":
        return algebra.zero()
    if kind.startswith("coeffs:"):
        try:
            values = [as_rational(x.strip()) for x in kind[len("coeffs:"):].split(",")]
        except ValueError as exc:
            raise LieAlgebraError(f"--v {kind!r}: {exc}") from None
        return algebra.element(values)
    if algebra.realization is None:
        raise LieAlgebraError(f"{algebra.name} has no matrix realization; use --v coeffs:...")
    s = len(algebra.realization[0])
    m = [[0] * s for _ in range(s)]
    if kind == "regular-ss":
        if algebra.name.startswith("sl"):
            entries = [s - 1 - 2 * i for i in range(s)]
        else:
            entries = [i + 1 for i in range(s)]
        for i, e in enumerate(entries):
            m[i][i] = e
    elif kind == "regular-nilpotent":
        for i in range(s - 1):
            m[i][i + 1] = 1
    else:
        raise LieAlgebraError(f"unknown v fixture {kind!r}")
    return algebra.from_matrix(m)


# verification ----------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, RingElement):
        return format_artin(x)
    return format_rational(x)


def chi_difference_oracle(q: AdjointQuotient, v: LieElement, b: LieElement) -> list:
    """``chi(v + b) - chi(v)`` from matrix arithmetic over the Artin ring when possible."""
    out = []
    w = v.over(b.ring) + b if b.ring is not None else v + b
    for p in q.components:
        if p.kind is not None and q.algebra.realization is not None:
            out.append(matrix_oracle(p, w) - matrix_oracle(p, v))
        else:
            out.append(p.evaluate(w) - p.evaluate(v))
    return out


def verify_def_equals_chi(q: AdjointQuotient, v: LieElement, ring: ArtinRing, trials: int, rng: random.Random) -> CheckReport:
    """Pushforward of ``b eps`` against ``chi(v+b) - chi(v)``, plus gauge descent."""
    h = build_adjoint_morphism(q, v)
    src, tgt = h.source, h.target
    report = CheckReport(f"def-chi[{q.algebra.name}]")
    ring_label = repr(ring)
    mc = CheckEntry("MC(C)=g(x)m_A", 1, ring_label)
    main = CheckEntry("Def(h)=chi", 1, ring_label)
    descent = CheckEntry("gauge-descent", 1, ring_label)
    reduced = CheckEntry("gauge-reduces-to-affine", 1, ring_label)
    for _ in range(trials):
        b = random_ideal_element(q.algebra, ring, rng)
        x = src.lift(b=b)
        mc.record(mc_set_check(src, ring, x), lambda b=b: {"b": [_fmt(c) for c in b.coeffs]})
        push = mc_pushforward(h, x)
        expected = chi_difference_oracle(q, v, b)
        got = [push.coeffs.get(i, 0) for i in range(tgt.dim)]
        ok = all(a == e for a, e in zip(got, expected))
        main.record(ok, lambda b=b, got=got, e=expected: {"b": [_fmt(c) for c in b.coeffs], "pushforward": [_fmt(c) for c in got], "expected": [_fmt(c) for c in e]})
        lam = random_ideal_element(q.algebra, ring, rng)
        moved = gauge_act(src, src.lift(a=lam), x)
        affine = exp_ad(lam, v.over(ring) + b) - v.over(ring)
        reduced.record(_eq_eps(src, moved, affine), lambda b=b: {"b": [_fmt(c) for c in b.coeffs]})
        push2 = mc_pushforward(h, moved)
        descent.record(push2 == push, lambda b=b, lam=lam: {"b": [_fmt(c) for c in b.coeffs], "lambda": [_fmt(c) for c in lam.coeffs]})
    report.entries += [mc, main, reduced, descent]
    return report


def _eq_eps(src: ToyHiggsDgla, moved: GradedElement, affine: LieElement) -> bool:
    if any(i < src.algebra.dim for i in moved.coeffs):
        return False
    return src.eps_part(moved) == affine


def centraliser_check(algebra: LieAlgebra, v: LieElement) -> tuple[int, int, int]:
    """``(dim H^0, dim ker ad v, dim H^1)`` for the toy dgla at ``v``."""
    c = ToyHiggsDgla(algebra, v)
    h0 = len(cohomology(c, 0))
    h1 = len(cohomology(c, 1))
    kernel = len(linalg.nullspace(ad_matrix(v), algebra.dim))
    return h0, kernel, h1


def verify_adjoint_morphism(q: AdjointQuotient, v: LieElement, k_max: int, trials: int, rng: random.Random, perturb: str | None = None) -> CheckReport:
    h = build_adjoint_morphism(q, v, perturb)
    return check_linfty_morphism(h, k_max, trials, rng)
