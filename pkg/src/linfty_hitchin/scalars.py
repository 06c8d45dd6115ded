"""Exact scalars and truncated polynomial coefficient rings.

Rationals are plain Python ``int`` or :class:`fractions.Fraction`; both are
exact and ``Fraction`` is always kept in lowest terms.

Two families of truncated rings are provided.  :class:`ArtinRing` is
``Q[t_1..t_r]/(deg >= m)``, a local Artin algebra whose maximal ideal is
generated by the ``t_i``.  :class:`MultilinearRing` is
``Q[t_1..t_k]/(t_1^2, ..., t_k^2)``; the coefficient of ``t_1...t_k`` in a
product extracts multilinear parts.  Either ring may be built over another
one (``base=``), which gives towers such as ``A[u]`` or ``A[t]/(t_i^2)``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable

Rational = int | Fraction


def as_rational(x) -> Rational:
    """Parse ints, Fractions and strings such as ``"-3/4"`` into a Rational."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        f = Fraction(x.strip())
        return f.numerator if f.denominator == 1 else f
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def format_rational(x: Rational) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


class _TruncatedRing:
    """Shared machinery: sparse dict of keys -> coefficients in ``base``."""

    level = 1
    zero_key: object = None

    def __init__(self, base: "_TruncatedRing | None" = None):
        self.base = base
        self.level = 1 if base is None else base.level + 1

    def _combine(self, k1, k2):
        raise NotImplementedError

    def element(self, coeffs: dict) -> "RingElement":
        return self._element_class(self, {k: c for k, c in coeffs.items() if c})

    @property
    def zero(self) -> "RingElement":
        return self._element_class(self, {})

    @property
    def one(self) -> "RingElement":
        return self._element_class(self, {self.zero_key: 1})

    def scalar(self, c) -> "RingElement":
        return self._element_class(self, {self.zero_key: c} if c else {})

    def contains_ring(self, other: "_TruncatedRing") -> bool:
        """True if ``other`` is this ring or one of its coefficient rings."""
        r = self
        while r is not None:
            if r == other:
                return True
            r = r.base
        return False


class ArtinRing(_TruncatedRing):
    """``Q[t_1..t_r]/(all monomials of total degree >= order)``."""

    def __init__(self, num_vars: int, order: int, base=None, names: Iterable[str] | None = None):
        if num_vars < 1:
            raise ValueError("an Artin ring needs at least one generator")
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        super().__init__(base)
        self.num_vars = num_vars
        self.order = order
        self.names = tuple(names) if names is not None else tuple(f"t{i + 1}" for i in range(num_vars))
        self.zero_key = (0,) * num_vars
        self._element_class = ArtinElement

    def __eq__(self, other):
        return (
            isinstance(other, ArtinRing)
            and self.num_vars == other.num_vars
            and self.order == other.order
            and self.names == other.names
            and self.base == other.base
        )

    def __hash__(self):
        return hash(("artin", self.num_vars, self.order, self.names, self.base))

    def __repr__(self):
        over = "" if self.base is None else f" over {self.base!r}"
        return f"ArtinRing({', '.join(self.names)}; deg<{self.order}{over})"

    @property
    def truncation_order(self) -> int:
        return self.order

    def _combine(self, k1, k2):
        k = tuple(a + b for a, b in zip(k1, k2))
        return k if sum(k) < self.order else None

    def gen(self, i: int) -> "ArtinElement":
        if self.order < 2:
            return self.zero
        key = tuple(1 if j == i else 0 for j in range(self.num_vars))
        return ArtinElement(self, {key: 1})

    def monomials(self, degree: int | None = None) -> list[tuple[int, ...]]:
        """Exponent vectors in graded-lex order, optionally of one degree."""
        degrees = range(self.order) if degree is None else [degree]
        out = []
        for d in degrees:
            if d >= self.order:
                continue
            block = []
            for combo in combinations_with_replacement(range(self.num_vars), d):
                e = [0] * self.num_vars
                for i in combo:
                    e[i] += 1
                block.append(tuple(e))
            out.extend(sorted(block, reverse=True))
        return out

    def maximal_ideal_monomials(self) -> list[tuple[int, ...]]:
        return [m for m in self.monomials() if sum(m)]


class MultilinearRing(_TruncatedRing):
    """``Q[t_1..t_k]/(t_i^2)``; keys are bitmasks of the t's present."""

    def __init__(self, k: int, base=None):
        if k < 0:
            raise ValueError("k must be >= 0")
        super().__init__(base)
        self.k = k
        self.zero_key = 0
        self.full_mask = (1 << k) - 1
        self._element_class = MultilinearElement

    def __eq__(self, other):
        return isinstance(other, MultilinearRing) and self.k == other.k and self.base == other.base

    def __hash__(self):
        return hash(("multilinear", self.k, self.base))

    def __repr__(self):
        return f"MultilinearRing({self.k})"

    def _combine(self, k1, k2):
        return None if k1 & k2 else k1 | k2

    def gen(self, i: int) -> "MultilinearElement":
        return MultilinearElement(self, {1 << i: 1})


class RingElement:
    """An immutable element of a truncated ring."""

    __slots__ = ("ring", "coeffs")
    __hash__ = None

    def __init__(self, ring: _TruncatedRing, coeffs: dict):
        self.ring = ring
        self.coeffs = coeffs

    # coercion -----------------------------------------------------------
    def _lift(self, other):
        """Return (element_of_same_ring, is_scalar) or None for NotImplemented."""
        if isinstance(other, RingElement):
            if other.ring is self.ring or other.ring == self.ring:
                return other, False
            if self.ring.base is not None and self.ring.base.contains_ring(other.ring):
                return other, True
            if other.ring.contains_ring(self.ring):
                return None
            raise TypeError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return other, True
        return None

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        o, is_scalar = lifted
        r = dict(self.coeffs)
        if is_scalar:
            items = [(self.ring.zero_key, o)] if o else []
        else:
            items = o.coeffs.items()
        for k, c in items:
            s = r.get(k, 0) + c
            if s:
                r[k] = s
            else:
                r.pop(k, None)
        return type(self)(self.ring, r)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.ring, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        o, is_scalar = lifted
        if is_scalar:
            if not o:
                return type(self)(self.ring, {})
            out = {}
            for k, c in self.coeffs.items():
                p = c * o
                if p:
                    out[k] = p
            return type(self)(self.ring, out)
        combine = self.ring._combine
        r: dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in o.coeffs.items():
                k = combine(k1, k2)
                if k is None:
                    continue
                r[k] = r.get(k, 0) + c1 * c2
        return type(self)(self.ring, {k: c for k, c in r.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RingElement):
            return NotImplemented
        inv = Fraction(1) / Fraction(other)
        return self * inv

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # predicates ---------------------------------------------------------
    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        try:
            lifted = self._lift(other)
        except TypeError:
            return False
        if lifted is None:
            return NotImplemented
        o, is_scalar = lifted
        if is_scalar:
            o = self.ring.scalar(o)
        return self.coeffs == o.coeffs

    def constant_term(self):
        return self.coeffs.get(self.ring.zero_key, 0)

    def in_maximal_ideal(self) -> bool:
        return not self.constant_term()

    def coefficient(self, key):
        return self.coeffs.get(key, 0)

    def map_coefficients(self, fn: Callable) -> "RingElement":
        out = {}
        for k, c in self.coeffs.items():
            v = fn(c)
            if v:
                out[k] = v
        return type(self)(self.ring, out)


class ArtinElement(RingElement):
    __slots__ = ()

    def degree_part(self, d: int) -> "ArtinElement":
        return ArtinElement(self.ring, {k: c for k, c in self.coeffs.items() if sum(k) == d})

    def order(self) -> int | None:
        """Lowest total degree present, None for zero."""
        return min((sum(k) for k in self.coeffs), default=None)

    def project(self, target: ArtinRing) -> "ArtinElement":
        """Truncate to ``target``, which must have the same generators and base."""
        if target.num_vars != self.ring.num_vars or target.base != self.ring.base:
            raise ValueError("projection needs rings with the same generators")
        return ArtinElement(target, {k: c for k, c in self.coeffs.items() if sum(k) < target.order})

    def lift_to(self, target: ArtinRing) -> "ArtinElement":
        """Representative in a larger truncation (monomials reused as-is)."""
        if target.num_vars != self.ring.num_vars or target.order < self.ring.order:
            raise ValueError("lift needs a ring with the same generators and larger order")
        return ArtinElement(target, dict(self.coeffs))

    def __repr__(self):
        return f"ArtinElement({self})"

    def __str__(self):
        return format_artin(self)


class MultilinearElement(RingElement):
    __slots__ = ()

    def top(self):
        """Coefficient of ``t_1...t_k``."""
        return self.coeffs.get(self.ring.full_mask, 0)

    def __repr__(self):
        return f"MultilinearElement({self.coeffs!r})"


def _format_coefficient(c) -> str:
    if isinstance(c, RingElement):
        return f"({format_artin(c)})" if isinstance(c, ArtinElement) else f"({c!r})"
    return format_rational(c)


def format_artin(a: ArtinElement) -> str:
    """Canonical graded-lex text form, e.g. ``2/1*t1^1 + -1/1*t1^2``."""
    if not a.coeffs:
        return "0"
    keys = sorted(a.coeffs, key=lambda e: (sum(e), tuple(-x for x in e)))
    terms = []
    for key in keys:
        parts = [_format_coefficient(a.coeffs[key])]
        parts += [f"{name}^{e}" for name, e in zip(a.ring.names, key) if e]
        terms.append("*".join(parts))
    return " + ".join(terms)


def in_maximal_ideal(a) -> bool:
    """True iff the constant term vanishes; plain rationals count as constants."""
    if isinstance(a, RingElement):
        return a.in_maximal_ideal()
    return not a


def artin_mul(a: ArtinElement, b: ArtinElement) -> ArtinElement:
    if not (isinstance(a, ArtinElement) and isinstance(b, ArtinElement)):
        raise TypeError("artin_mul expects two ArtinElements")
    if a.ring != b.ring:
        raise TypeError(f"ring mismatch: {a.ring!r} vs {b.ring!r}")
    return a * b


def small_extension_pair(r: int):
    """``(Q[t]/t^(r+1), Q[t]/t^r, projection)``: a principal small extension."""
    if r < 2:
        raise ValueError("small_extension_pair needs r >= 2")
    big = ArtinRing(1, r + 1, names=("t",))
    small = ArtinRing(1, r, names=("t",))

    def projection(x: ArtinElement) -> ArtinElement:
        return x.project(small)

    return big, small, projection


def scalar_ring(x):
    """The truncated ring an element lives in, or None for rationals."""
    return x.ring if isinstance(x, RingElement) else None


def common_ring(values: Iterable):
    """Ring shared by a collection of scalars (rationals are compatible with any)."""
    ring = None
    for v in values:
        r = scalar_ring(v)
        if r is None:
            continue
        if ring is None:
            ring = r
        elif r != ring:
            if ring.contains_ring(r):
                continue
            if r.contains_ring(ring):
                ring = r
                continue
            raise TypeError(f"ring mismatch: {ring!r} vs {r!r}")
    return ring


def zero_of(ring):
    return 0 if ring is None else ring.zero


def random_artin(ring: ArtinRing, rng, lo: int = -5, hi: int = 5, ideal: bool = True) -> ArtinElement:
    """Random element with integer coefficients; inside m_A when ``ideal``."""
    mons = ring.maximal_ideal_monomials() if ideal else ring.monomials()
    return ring.element({m: rng.randint(lo, hi) for m in mons})
