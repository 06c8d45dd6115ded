"""Exact linear algebra over Q.

Thin wrappers around sympy's ``DomainMatrix`` (fraction-free elimination
over QQ).  Matrices are lists of rows of Rationals; vectors are lists.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .scalars import Rational


def _to_qq(x) -> object:
    f = Fraction(x)
    return QQ(f.numerator, f.denominator)


def _from_qq(x) -> Rational:
    n, d = int(x.numerator), int(x.denominator)
    return n if d == 1 else Fraction(n, d)


def _dm(rows: Sequence[Sequence[Rational]], ncols: int | None = None) -> DomainMatrix:
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_to_qq(x) for x in row] for row in rows], (nrows, ncols), QQ)


def rank(rows: Sequence[Sequence[Rational]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _dm(rows).rank()


def rref(rows: Sequence[Sequence[Rational]]) -> tuple[list[list[Rational]], tuple[int, ...]]:
    if not rows:
        return [], ()
    reduced, pivots = _dm(rows).rref()
    return [[_from_qq(x) for x in row] for row in reduced.to_list()], tuple(pivots)


def nullspace(rows: Sequence[Sequence[Rational]], ncols: int) -> list[list[Rational]]:
    """Basis of {x : M x = 0} for an ``len(rows) x ncols`` matrix."""
    if ncols == 0:
        return []
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    ns = _dm(rows, ncols).nullspace()
    return [[_from_qq(x) for x in row] for row in ns.to_list()]


def solve(rows: Sequence[Sequence[Rational]], rhs: Sequence[Rational], ncols: int) -> list[Rational] | None:
    """A particular solution of M x = rhs with every free variable set to 0.

    Returns None when the system is inconsistent.
    """
    if not rows:
        return [0] * ncols if not any(rhs) else None
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug)
    if ncols in pivots:
        return None
    x: list[Rational] = [0] * ncols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][ncols]
    return x


def transpose(rows: Sequence[Sequence[Rational]], ncols: int) -> list[list[Rational]]:
    return [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]


def column_space_basis(columns: Sequence[Sequence[Rational]]) -> list[list[Rational]]:
    """Independent subset of ``columns`` spanning their span (first-come order)."""
    basis: list[list[Rational]] = []
    for c in columns:
        if rank(basis + [list(c)]) > len(basis):
            basis.append(list(c))
    return basis


def extend_to_basis(vectors: Sequence[Sequence[Rational]], dim: int) -> list[list[Rational]]:
    """Standard basis vectors, taken greedily in order, completing ``vectors``."""
    current = [list(v) for v in vectors]
    r = rank(current) if current else 0
    added = []
    for i in range(dim):
        if r == dim:
            break
        e = [1 if j == i else 0 for j in range(dim)]
        trial = current + [e]
        rt = rank(trial)
        if rt > r:
            current, r = trial, rt
            added.append(e)
    return added


def in_span(vectors: Sequence[Sequence[Rational]], v: Sequence[Rational]) -> bool:
    if not any(v):
        return True
    if not vectors:
        return False
    return rank([list(x) for x in vectors] + [list(v)]) == rank([list(x) for x in vectors])


def determinant(rows: Sequence[Sequence[Rational]]) -> Rational:
    return _from_qq(_dm(rows).det())
