"""Finite-dimensional Lie algebras given by structure constants.

Elements carry coefficient vectors over Q or over a truncated ring; the
bracket is the bilinear extension of the structure constants, so it works
verbatim on ``g (x) A``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial
from typing import Sequence

from . import linalg
from .scalars import Rational, RingElement, as_rational, common_ring, in_maximal_ideal, zero_of


class LieAlgebraError(ValueError):
    pass


class LieAlgebra:
    """Structure constants ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    Antisymmetry and the Jacobi identity are checked exactly at
    construction, as is agreement with the matrix realization if one is
    supplied.
    """

    def __init__(
        self,
        name: str,
        basis_labels: Sequence[str],
        constants: dict[tuple[int, int, int], Rational],
        realization: Sequence[Sequence[Sequence[Rational]]] | None = None,
        degrees: Sequence[int] | None = None,
        validate: bool = True,
    ):
        self.name = name
        self.basis_labels = tuple(basis_labels)
        self.dim = n = len(self.basis_labels)
        table: list[list[tuple[tuple[int, Rational], ...]]] = [[() for _ in range(n)] for _ in range(n)]
        grouped: dict[tuple[int, int], list[tuple[int, Rational]]] = {}
        for (i, j, k), c in constants.items():
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise LieAlgebraError(f"structure constant index out of range: {(i, j, k)}")
            c = as_rational(c)
            if c:
                grouped.setdefault((i, j), []).append((k, c))
        for (i, j), terms in grouped.items():
            table[i][j] = tuple(sorted(terms))
        self._table = table
        self.realization = (
            None
            if realization is None
            else tuple(tuple(tuple(as_rational(x) for x in row) for row in m) for m in realization)
        )
        self.degrees = tuple(sorted(degrees)) if degrees is not None else ()
        self._coord_system = None
        if validate:
            self.validate()

    # structure ----------------------------------------------------------
    def constant(self, i: int, j: int, k: int) -> Rational:
        for kk, c in self._table[i][j]:
            if kk == k:
                return c
        return 0

    def bracket_basis(self, i: int, j: int) -> tuple[tuple[int, Rational], ...]:
        return self._table[i][j]

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __repr__(self):
        return f"LieAlgebra({self.name}, dim={self.dim})"

    def validate(self) -> None:
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.constant(i, j, k) != -self.constant(j, i, k):
                        raise LieAlgebraError(f"{self.name}: structure constants not antisymmetric at {(i, j, k)}")
        for i, j, k in product(range(n), repeat=3):
            if i < j < k or n < 3:
                x, y, z = self.basis(i), self.basis(j), self.basis(k)
                jac = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
                if not jac.is_zero():
                    raise LieAlgebraError(f"{self.name}: Jacobi identity fails on basis triple {(i, j, k)}")
        if self.realization is not None:
            if len(self.realization) != n:
                raise LieAlgebraError(f"{self.name}: realization needs {n} matrices")
            for i in range(n):
                for j in range(n):
                    a, b = self.realization[i], self.realization[j]
                    comm = _mat_sub(_mat_mul(a, b), _mat_mul(b, a))
                    expected = _mat_zero(len(a))
                    for k, c in self._table[i][j]:
                        expected = _mat_add(expected, _mat_scale(self.realization[k], c))
                    if comm != expected:
                        raise LieAlgebraError(
                            f"{self.name}: realization commutator [{self.basis_labels[i]}, {self.basis_labels[j]}] "
                            "disagrees with the structure constants"
                        )

    # elements -----------------------------------------------------------
    def basis(self, i: int) -> "LieElement":
        return LieElement(self, tuple(1 if j == i else 0 for j in range(self.dim)))

    def zero(self, ring=None) -> "LieElement":
        return LieElement(self, (zero_of(ring),) * self.dim, ring)

    def element(self, coeffs: Sequence, ring=None) -> "LieElement":
        if len(coeffs) != self.dim:
            raise LieAlgebraError(f"{self.name} elements need {self.dim} coefficients, got {len(coeffs)}")
        return LieElement(self, tuple(coeffs), ring)

    def from_matrix(self, m: Sequence[Sequence[Rational]]) -> "LieElement":
        """Coordinates of a rational matrix in the realization basis."""
        if self.realization is None:
            raise LieAlgebraError(f"{self.name} has no matrix realization")
        if self._coord_system is None:
            s = len(self.realization[0])
            rows = [[self.realization[k][a][b] for k in range(self.dim)] for a in range(s) for b in range(s)]
            self._coord_system = rows
        rhs = [as_rational(x) for row in m for x in row]
        sol = linalg.solve(self._coord_system, rhs, self.dim)
        if sol is None:
            raise LieAlgebraError(f"matrix does not lie in {self.name}")
        return LieElement(self, tuple(sol))


class LieElement:
    """Coefficient vector in the basis of ``algebra``."""

    __slots__ = ("algebra", "coeffs", "ring")
    __hash__ = None

    def __init__(self, algebra: LieAlgebra, coeffs: tuple, ring=None):
        self.algebra = algebra
        self.coeffs = coeffs
        self.ring = ring if ring is not None else common_ring(coeffs)

    def _check(self, other: "LieElement"):
        if not isinstance(other, LieElement):
            raise TypeError("expected a LieElement")
        if other.algebra is not self.algebra:
            raise LieAlgebraError(f"algebra mismatch: {self.algebra.name} vs {other.algebra.name}")
        return _join_rings(self.ring, other.ring)

    def __add__(self, other):
        ring = self._check(other)
        return LieElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), ring)

    def __sub__(self, other):
        ring = self._check(other)
        return LieElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), ring)

    def __neg__(self):
        return LieElement(self.algebra, tuple(-a for a in self.coeffs), self.ring)

    def scale(self, c) -> "LieElement":
        ring = _join_rings(self.ring, c.ring if isinstance(c, RingElement) else None)
        return LieElement(self.algebra, tuple(c * a for a in self.coeffs), ring)

    def __mul__(self, c):
        if isinstance(c, LieElement):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(Fraction(1) / Fraction(c))

    def __eq__(self, other):
        if not isinstance(other, LieElement) or other.algebra is not self.algebra:
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_ideal(self) -> bool:
        """All coefficients lie in the maximal ideal of their ring."""
        return all(in_maximal_ideal(c) for c in self.coeffs)

    def over(self, ring) -> "LieElement":
        """The same element with coefficients promoted into ``ring``."""
        if ring is None:
            if self.ring is not None:
                raise LieAlgebraError("cannot demote coefficients to Q")
            return self
        return LieElement(self.algebra, tuple(ring.scalar(c) if not isinstance(c, RingElement) else c for c in self.coeffs), ring)

    def map_coefficients(self, fn) -> "LieElement":
        return LieElement(self.algebra, tuple(fn(c) for c in self.coeffs))

    def to_matrix(self) -> list[list]:
        real = self.algebra.realization
        if real is None:
            raise LieAlgebraError(f"{self.algebra.name} has no matrix realization")
        s = len(real[0])
        zero = zero_of(self.ring)
        m = [[zero for _ in range(s)] for _ in range(s)]
        for c, basis_matrix in zip(self.coeffs, real):
            if not c:
                continue
            for a in range(s):
                for b in range(s):
                    if basis_matrix[a][b]:
                        m[a][b] = m[a][b] + c * basis_matrix[a][b]
        return m

    def __repr__(self):
        labels = self.algebra.basis_labels
        parts = [f"({c})*{lab}" for c, lab in zip(self.coeffs, labels) if c]
        return " + ".join(parts) if parts else "0"


def _join_rings(r1, r2):
    if r1 is None:
        return r2
    if r2 is None or r1 == r2:
        return r1
    if r1.contains_ring(r2):
        return r1
    if r2.contains_ring(r1):
        return r2
    raise LieAlgebraError(f"coefficient ring mismatch: {r1!r} vs {r2!r}")


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """Bilinear extension of the structure constants."""
    ring = x._check(y)
    alg = x.algebra
    out: list = [0] * alg.dim
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(y.coeffs):
            if not b:
                continue
            terms = alg._table[i][j]
            if not terms:
                continue
            ab = a * b
            if not ab:
                continue
            for k, c in terms:
                out[k] = out[k] + c * ab
    if ring is not None:
        out = [v if isinstance(v, RingElement) else ring.scalar(v) for v in out]
    return LieElement(alg, tuple(out), ring)


def ad_matrix(x: LieElement) -> list[list[Rational]]:
    """Matrix of ``ad x`` (column j holds the coordinates of [x, e_j])."""
    if x.ring is not None:
        raise LieAlgebraError("ad_matrix expects rational coefficients")
    alg = x.algebra
    cols = [bracket(x, alg.basis(j)).coeffs for j in range(alg.dim)]
    return [[cols[j][i] for j in range(alg.dim)] for i in range(alg.dim)]


def _nilpotency_bound(ring) -> int:
    bound = 1
    r = ring
    while r is not None:
        order = getattr(r, "order", None)
        if order is None:
            order = getattr(r, "k", 0) + 1
        bound *= max(order, 1)
        r = r.base
    return bound


def exp_ad(lam: LieElement, x: LieElement) -> LieElement:
    """``e^{ad lam}(x) = sum_j (ad lam)^j x / j!`` for nilpotent ``lam``."""
    if lam.ring is None or not lam.in_ideal():
        if lam.is_zero():
            return x
        raise LieAlgebraError("exp_ad needs lambda with all coefficients in the maximal ideal")
    result = x
    term = x
    for j in range(1, _nilpotency_bound(lam.ring) + 1):
        term = bracket(lam, term)
        if term.is_zero():
            break
        result = result + term / factorial(j)
    else:
        raise LieAlgebraError("ad lambda failed to become nilpotent")
    return result


def bch(x: LieElement, y: LieElement) -> LieElement:
    """Baker-Campbell-Hausdorff series through degree 4.

    Exact whenever brackets of five or more ideal elements vanish, e.g.
    for coefficients in the maximal ideal of ``Q[t]/t^5``.
    """
    xy = bracket(x, y)
    xxy = bracket(x, xy)
    yyx = bracket(y, bracket(y, x))
    yxxy = bracket(y, xxy)
    return x + y + xy / 2 + (xxy + yyx) / 12 - yxxy / 24


# matrix helpers --------------------------------------------------------------


def _mat_zero(s: int):
    return tuple(tuple(0 for _ in range(s)) for _ in range(s))


def _mat_mul(a, b):
    s = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(s)) for j in range(s)) for i in range(s))


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def matrix_unit(s: int, i: int, j: int):
    return tuple(tuple(1 if (a, b) == (i, j) else 0 for b in range(s)) for a in range(s))


def _constants_from_realization(mats) -> dict[tuple[int, int, int], Rational]:
    n = len(mats)
    s = len(mats[0])
    rows = [[mats[k][a][b] for k in range(n)] for a in range(s) for b in range(s)]
    out = {}
    for i in range(n):
        for j in range(n):
            comm = _mat_sub(_mat_mul(mats[i], mats[j]), _mat_mul(mats[j], mats[i]))
            sol = linalg.solve(rows, [x for row in comm for x in row], n)
            if sol is None:
                raise LieAlgebraError("matrices are not closed under commutators")
            for k, c in enumerate(sol):
                if c:
                    out[(i, j, k)] = c
    return out


def builtin_algebra(name: str, n: int | None = None) -> LieAlgebra:
    """``gl(n)`` or ``sl(n)`` in the standard matrix basis.

    ``gl(n)`` uses E_ij in row-major order.  ``sl(n)`` uses the off-diagonal
    E_ij in row-major order followed by H_i = E_ii - E_{i+1,i+1}; for
    ``sl(2)`` this is the basis (e, f, h).  Names such as ``"sl3"`` are
    accepted with ``n`` omitted.
    """
    key = name.strip().lower().replace("(", "").replace(")", "")
    if n is None:
        for prefix in ("gl", "sl"):
            if key.startswith(prefix) and key[len(prefix):].isdigit():
                key, n = prefix, int(key[len(prefix):])
                break
    if key not in ("gl", "sl") or n is None:
        raise LieAlgebraError(f"unsupported algebra {name!r} (expected gl(n) or sl(n))")
    if key == "gl":
        if n < 1:
            raise LieAlgebraError("gl(n) needs n >= 1")
        mats = [matrix_unit(n, i, j) for i in range(n) for j in range(n)]
        labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
        degrees = list(range(1, n + 1))
    else:
        if n < 2:
            raise LieAlgebraError("sl(n) needs n >= 2")
        off = [(i, j) for i in range(n) for j in range(n) if i != j]
        mats = [matrix_unit(n, i, j) for i, j in off]
        labels = [f"E{i + 1}{j + 1}" for i, j in off]
        for i in range(n - 1):
            mats.append(_mat_sub(matrix_unit(n, i, i), matrix_unit(n, i + 1, i + 1)))
            labels.append(f"H{i + 1}")
        if n == 2:
            labels = ["e", "f", "h"]
        degrees = list(range(2, n + 1))
    constants = _constants_from_realization(mats)
    return LieAlgebra(f"{key}{n}", labels, constants, realization=mats, degrees=degrees)


def algebra_from_spec(spec: dict, source: str = "<spec>") -> LieAlgebra:
    """Build a user algebra from a parsed spec-file mapping.

    Keys: ``name``, ``dim``, ``basis`` (labels), ``structure`` (list of
    ``[i, j, k, value]`` with 0-based indices), optional ``realization``
    and ``degrees``.  Only one of each antisymmetric pair needs listing.
    """
    try:
        name = str(spec.get("name", "user"))
        labels = list(spec["basis"])
        dim = int(spec.get("dim", len(labels)))
    except KeyError as exc:
        raise LieAlgebraError(f"{source}: missing key {exc.args[0]!r}") from None
    if dim != len(labels):
        raise LieAlgebraError(f"{source}: dim = {dim} but {len(labels)} basis labels given")
    constants: dict[tuple[int, int, int], Rational] = {}
    for pos, entry in enumerate(spec.get("structure", [])):
        try:
            i, j, k, value = entry
            i, j, k, value = int(i), int(j), int(k), as_rational(value)
        except (TypeError, ValueError) as exc:
            raise LieAlgebraError(f"{source}: structure[{pos}] is malformed ({exc})") from None
        for key, val in (((i, j, k), value), ((j, i, k), -value)):
            if constants.get(key, val) != val:
                raise LieAlgebraError(f"{source}: structure[{pos}] contradicts an earlier entry")
            constants[key] = val
    try:
        return LieAlgebra(name, labels, constants, realization=spec.get("realization"), degrees=spec.get("degrees"))
    except LieAlgebraError as exc:
        raise LieAlgebraError(f"{source}: {exc}") from None


def random_element(algebra: LieAlgebra, rng, lo: int = -5, hi: int = 5) -> LieElement:
    """Integer coefficients drawn uniformly from ``[lo, hi]``."""
    return LieElement(algebra, tuple(rng.randint(lo, hi) for _ in range(algebra.dim)))


def random_ideal_element(algebra: LieAlgebra, ring, rng, lo: int = -5, hi: int = 5) -> LieElement:
    """Element of ``g (x) m_A`` with integer coefficients on every ideal monomial."""
    from .scalars import random_artin

    return LieElement(algebra, tuple(random_artin(ring, rng, lo, hi) for _ in range(algebra.dim)), ring)
