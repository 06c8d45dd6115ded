"""Invariant polynomials on a Lie algebra and their polarisations.

A polynomial is a dict from exponent vectors (one entry per basis
coordinate) to Rationals.  The polarisation ``P_{d,k}(p)(X_1..X_k; v)`` is
*defined* as the coefficient of ``t_1...t_k`` in ``p(v + sum_i t_i X_i)``,
evaluated over ``Q[t_1..t_k]/(t_i^2)`` with coefficients in whatever ring
the arguments live in.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Sequence

from .lie import LieAlgebra, LieAlgebraError, LieElement, bracket, random_element
from .scalars import ArtinRing, MultilinearRing, RingElement, as_rational, zero_of

Polynomial = dict  # tuple[int, ...] -> Rational


class InvariantError(ValueError):
    pass


class InternalConsistencyError(AssertionError):
    pass


# polynomial evaluation -------------------------------------------------------


def _ml_mul(a: dict, b: dict) -> dict:
    """Product in Q[t]/(t_i^2) on raw mask dicts (coefficients of any ring)."""
    r: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            if m1 & m2:
                continue
            m = m1 | m2
            r[m] = r.get(m, 0) + c1 * c2
    return {m: c for m, c in r.items() if c}


class _Program:
    """Monomials sorted so consecutive ones share prefixes of factors."""

    def __init__(self, terms: Polynomial):
        seqs = []
        for exps, c in terms.items():
            seq = tuple((j, e) for j, e in enumerate(exps) if e)
            seqs.append((seq, c))
        seqs.sort()
        self.seqs = seqs
        self.max_exp: dict[int, int] = {}
        for seq, _ in seqs:
            for j, e in seq:
                self.max_exp[j] = max(self.max_exp.get(j, 0), e)

    def run(self, coords: Sequence, mul: Callable, one, add: Callable, zero):
        powers: dict[tuple[int, int], object] = {}
        for j, emax in self.max_exp.items():
            p = coords[j]
            powers[(j, 1)] = p
            for e in range(2, emax + 1):
                p = mul(p, coords[j])
                powers[(j, e)] = p
        total = zero
        prefix: list = []  # partial products, prefix[i] = product of first i+1 factors
        prev: tuple = ()
        for seq, c in self.seqs:
            common = 0
            while common < len(seq) and common < len(prev) and seq[common] == prev[common]:
                common += 1
            del prefix[common:]
            for pos in range(common, len(seq)):
                f = powers[seq[pos]]
                prefix.append(f if pos == 0 else mul(prefix[-1], f))
            value = prefix[-1] if seq else one
            total = add(total, value, c)
            prev = seq
        return total


def _program(p) -> _Program:
    prog = getattr(p, "_prog", None)
    if prog is None:
        prog = _Program(p.terms)
        p._prog = prog
    return prog


def evaluate_polynomial(terms: Polynomial, coords: Sequence, ring=None):
    """``p(x)`` for coordinates in Q or in a truncated ring."""
    prog = _Program(terms) if not isinstance(terms, _Program) else terms
    return _evaluate(prog, coords, ring)


def _evaluate(prog: _Program, coords: Sequence, ring):
    zero = zero_of(ring)
    one = 1 if ring is None else ring.one

    def add(total, value, c):
        return total + value * c

    return prog.run(coords, lambda a, b: a * b, one, add, zero)


# invariant polynomials -------------------------------------------------------


class InvariantPolynomial:
    """A homogeneous polynomial on ``algebra`` expected to be ad-invariant.

    ``kind`` optionally records how the polynomial arises from the matrix
    realization (``("charpoly", k)`` or ``("trace", d)``) so that an
    independent matrix computation can be used as an oracle.
    """

    def __init__(
        self,
        algebra: LieAlgebra,
        degree: int,
        terms: Polynomial,
        label: str,
        kind: tuple | None = None,
        validate: bool = True,
        seed: int = 0,
    ):
        self.algebra = algebra
        self.degree = degree
        self.terms = {tuple(e): as_rational(c) for e, c in terms.items() if c}
        self.label = label
        self.kind = kind
        self._prog = None
        if validate:
            self.validate(seed=seed)

    def __repr__(self):
        return f"InvariantPolynomial({self.label}, deg={self.degree}, on {self.algebra.name})"

    def __call__(self, x: LieElement):
        return self.evaluate(x)

    def evaluate(self, x: LieElement):
        if x.algebra is not self.algebra:
            raise LieAlgebraError("algebra mismatch")
        return _evaluate(_program(self), x.coeffs, x.ring)

    def validate(self, samples: int = 8, seed: int = 0) -> None:
        for e in self.terms:
            if len(e) != self.algebra.dim:
                raise InvariantError(f"{self.label}: exponent vector {e} has the wrong length")
            if sum(e) != self.degree:
                raise InvariantError(f"{self.label}: monomial {e} is not of degree {self.degree}")
        rng = random.Random(f"validate:{self.label}:{seed}")
        for _ in range(samples):
            x = random_element(self.algebra, rng)
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            if self.evaluate(x.scale(c)) != c**self.degree * self.evaluate(x):
                raise InvariantError(f"{self.label}: not homogeneous of degree {self.degree}")
            y = random_element(self.algebra, rng)
            if not check_lemma_invariance(self, x, y):
                raise InvariantError(f"{self.label}: not infinitesimally invariant (sample {x!r}, {y!r})")


class AdjointQuotient:
    """Ordered invariant generators ``chi = (p_1, ..., p_N)``, ascending degree."""

    def __init__(self, components: Sequence[InvariantPolynomial], check_degrees: bool = True):
        if not components:
            raise InvariantError("an adjoint quotient needs at least one component")
        alg = components[0].algebra
        if any(p.algebra is not alg for p in components):
            raise InvariantError("all components must live on one algebra")
        self.algebra = alg
        self.components = tuple(sorted(components, key=lambda p: p.degree))
        self.degrees = tuple(p.degree for p in self.components)
        if check_degrees and alg.degrees and self.degrees != tuple(alg.degrees):
            raise InvariantError(f"component degrees {self.degrees} do not match {alg.name} degrees {alg.degrees}")

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)


# builders --------------------------------------------------------------------


def _symbolic_matrix(alg: LieAlgebra, order: int):
    ring = ArtinRing(alg.dim, order)
    x = LieElement(alg, tuple(ring.gen(i) for i in range(alg.dim)), ring)
    return ring, x.to_matrix()


def _terms_of(a) -> Polynomial:
    if isinstance(a, RingElement):
        return {k: c for k, c in a.coeffs.items()}
    return {} if not a else {(0,) * 0: a}


def _mat_mul_generic(a, b):
    s = len(a)
    out = []
    for i in range(s):
        row = []
        for j in range(s):
            acc = 0
            for k in range(s):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _trace(m):
    acc = 0
    for i in range(len(m)):
        acc = acc + m[i][i]
    return acc


def charpoly_coefficients_symbolic(m, n: int) -> list:
    """Faddeev-LeVerrier: returns e_1..e_n with det(lam - M) = sum (-1)^k e_k lam^(n-k)."""
    c = [0] * (n + 1)
    c[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        prod = _mat_mul_generic(m, mk) if k > 1 else [[0] * n for _ in range(n)]
        mk = [[prod[i][j] + (c[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = _mat_mul_generic(m, mk)
        c[n - k] = _trace(am) * Fraction(-1, k)
    return [(-1) ** k * c[n - k] for k in range(1, n + 1)]


def charpoly_invariants(alg: LieAlgebra, validate: bool = True) -> list[InvariantPolynomial]:
    """Coefficients e_k of the characteristic polynomial (e_1 = tr, e_n = det).

    Components that vanish identically on ``alg`` (``tr`` on ``sl(n)``) are
    dropped.
    """
    if alg.realization is None:
        raise InvariantError(f"{alg.name} has no matrix realization")
    s = len(alg.realization[0])
    ring, m = _symbolic_matrix(alg, s + 1)
    out = []
    for k, ek in enumerate(charpoly_coefficients_symbolic(m, s), start=1):
        terms = {e: c for e, c in ek.coeffs.items()} if isinstance(ek, RingElement) else {}
        if not terms:
            continue
        label = "det" if k == s else ("tr" if k == 1 else f"e{k}")
        out.append(InvariantPolynomial(alg, k, terms, f"{alg.name}:{label}", kind=("charpoly", k), validate=validate))
    return out


def trace_power(alg: LieAlgebra, d: int, validate: bool = True) -> InvariantPolynomial:
    """``X -> tr(X^d)`` in the matrix realization."""
    if alg.realization is None:
        raise InvariantError(f"{alg.name} has no matrix realization")
    ring, m = _symbolic_matrix(alg, d + 1)
    p = m
    for _ in range(d - 1):
        p = _mat_mul_generic(p, m)
    tr = _trace(p)
    terms = {e: c for e, c in tr.coeffs.items()} if isinstance(tr, RingElement) else {}
    if not terms:
        raise InvariantError(f"tr(X^{d}) vanishes identically on {alg.name}")
    return InvariantPolynomial(alg, d, terms, f"{alg.name}:tr^{d}", kind=("trace", d), validate=validate)


def default_quotient(alg: LieAlgebra) -> AdjointQuotient:
    """Characteristic-polynomial coefficients of the realization."""
    return AdjointQuotient(charpoly_invariants(alg))


def builtin_invariants(alg: LieAlgebra, max_trace_degree: int = 4) -> list[InvariantPolynomial]:
    """Char-poly coefficients plus nonvanishing trace powers up to ``max_trace_degree``."""
    out = list(charpoly_invariants(alg))
    for d in range(2, max_trace_degree + 1):
        try:
            out.append(trace_power(alg, d))
        except InvariantError:
            continue
    return out


def polynomial_from_expression(alg: LieAlgebra, expression: str, label: str, degree: int | None = None) -> InvariantPolynomial:
    """Parse ``"e*f + 1/4*h**2"``-style text over the basis labels."""
    import sympy

    symbols = sympy.symbols(list(alg.basis_labels))
    names = {str(s): s for s in symbols}
    try:
        expr = sympy.sympify(expression.replace("^", "**"), locals=names, rational=True)
        poly = sympy.Poly(expr, *symbols)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise InvariantError(f"{label}: cannot parse polynomial {expression!r} ({exc})") from None
    terms = {}
    for exps, c in poly.as_dict().items():
        q = sympy.Rational(c)
        terms[tuple(int(e) for e in exps)] = Fraction(int(q.p), int(q.q))
    if not terms:
        raise InvariantError(f"{label}: polynomial is zero")
    degrees = {sum(e) for e in terms}
    if degree is None:
        if len(degrees) != 1:
            raise InvariantError(f"{label}: polynomial is not homogeneous")
        degree = degrees.pop()
    return InvariantPolynomial(alg, degree, terms, label)


# matrix oracle ---------------------------------------------------------------


def _det_leibniz(m):
    n = len(m)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = term * m[i][perm[i]]
            if not term:
                break
        if term:
            total = total + (term if inv % 2 == 0 else -term)
    return total


def elementary_invariant_matrix(m, k: int):
    """Sum of principal k x k minors, each by the Leibniz formula."""
    from itertools import combinations

    total = 0
    for rows in combinations(range(len(m)), k):
        total = total + _det_leibniz([[m[i][j] for j in rows] for i in rows])
    return total


def matrix_oracle(p: InvariantPolynomial, x: LieElement):
    """``p(x)`` computed from the matrix of ``x`` without the stored polynomial."""
    if p.kind is None:
        raise InvariantError(f"{p.label} has no matrix description")
    m = x.to_matrix()
    tag, deg = p.kind
    if tag == "charpoly":
        out = elementary_invariant_matrix(m, deg)
    else:
        q = m
        for _ in range(deg - 1):
            q = _mat_mul_generic(q, m)
        out = _trace(q)
    if x.ring is not None and not isinstance(out, RingElement):
        out = x.ring.scalar(out)
    return out


# polarisation ----------------------------------------------------------------


def _same_algebra(p: InvariantPolynomial, elems: Sequence[LieElement]):
    for e in elems:
        if e.algebra is not p.algebra:
            raise LieAlgebraError(f"{p.label}: argument lives on {e.algebra.name}, expected {p.algebra.name}")


def polarize(p: InvariantPolynomial, k: int, args: Sequence[LieElement], v: LieElement):
    """Coefficient of ``t_1...t_k`` in ``p(v + sum t_i X_i)``."""
    if k < 0 or len(args) != k:
        raise ValueError(f"polarize needs exactly k = {k} arguments, got {len(args)}")
    _same_algebra(p, list(args) + [v])
    ring = None
    for e in list(args) + [v]:
        if e.ring is not None:
            ring = e.ring if ring is None or e.ring.contains_ring(ring) else ring
    zero = zero_of(ring)
    if k > p.degree:
        return zero
    coords = []
    for j in range(p.algebra.dim):
        entry = {}
        c0 = v.coeffs[j]
        if c0:
            entry[0] = c0
        for i, x in enumerate(args):
            c = x.coeffs[j]
            if c:
                entry[1 << i] = c
        coords.append(entry)
    full = (1 << k) - 1

    def add(total, value, c):
        for m, coef in value.items():
            total[m] = total.get(m, 0) + coef * c
        return total

    result = _program(p).run(coords, _ml_mul, {0: 1}, add, {})
    out = result.get(full, 0)
    if ring is not None and not isinstance(out, RingElement):
        out = ring.scalar(out)
    elif ring is not None and out.ring != ring:
        out = ring.scalar(out) if ring.contains_ring(out.ring) else out
    return out


def polarize_full(p: InvariantPolynomial, k: int, args: Sequence[LieElement], v: LieElement):
    """``P_{d,k}(X; v)`` computed directly and as ``P_{d,d}(v,..,v,X)/(d-k)!``.

    The two routes must agree; a disagreement raises
    :class:`InternalConsistencyError`.
    """
    d = p.degree
    if k > d:
        raise ValueError("polarize_full needs k <= d")
    direct = polarize(p, k, args, v)
    zero_v = p.algebra.zero()
    full = polarize(p, d, [v] * (d - k) + list(args), zero_v)
    via_full = full / factorial(d - k) if not isinstance(full, int) or full % factorial(d - k) else full // factorial(d - k)
    if direct != via_full:
        raise InternalConsistencyError(f"{p.label}: P_(d,k) = {direct} but P_(d,d)/(d-k)! = {via_full}")
    return direct


def chi(q: AdjointQuotient, v: LieElement) -> list:
    return [p.evaluate(v) for p in q.components]


def taylor_sum(p: InvariantPolynomial, v: LieElement, x: LieElement, drop_factorial: bool = False):
    """``sum_{k>=1} P_{d,k}(x,..,x; v)/k!``."""
    total = None
    for k in range(1, p.degree + 1):
        term = polarize(p, k, [x] * k, v)
        if not drop_factorial:
            term = term * Fraction(1, factorial(k))
        total = term if total is None else total + term
    return total


def check_taylor(p: InvariantPolynomial, v: LieElement, x: LieElement, drop_factorial: bool = False) -> bool:
    lhs = p.evaluate(v + x) - p.evaluate(v)
    return lhs == taylor_sum(p, v, x, drop_factorial)


def check_lemma_invariance(p: InvariantPolynomial, v: LieElement, x: LieElement) -> bool:
    """``P_{d,1}([x, v]; v) == 0``."""
    return not polarize(p, 1, [bracket(x, v)], v)


def funny_sum(p: InvariantPolynomial, k: int, y: LieElement, xs: Sequence[LieElement], v: LieElement, drop_sum: bool = False):
    """Left side of the commutator identity for polarisations (should vanish)."""
    d = p.degree
    if not 2 <= k <= d:
        raise ValueError(f"need 2 <= k <= d, got k = {k}, d = {d}")
    if len(xs) != k - 1:
        raise ValueError(f"need k - 1 = {k - 1} X arguments")
    total = polarize(p, k, [bracket(y, v)] + list(xs), v)
    if drop_sum:
        return total
    for j in range(k - 1):
        rest = [x for i, x in enumerate(xs) if i != j]
        total = total + polarize(p, k - 1, [bracket(y, xs[j])] + rest, v)
    return total


def check_funny_identity(p, k, y, xs, v, drop_sum: bool = False) -> bool:
    return not funny_sum(p, k, y, xs, v, drop_sum)


# Lemma on symmetric forms ---------------------------------------------------------


def full_polarisation_form(p: InvariantPolynomial) -> Callable[[Sequence[LieElement]], object]:
    """The symmetric d-linear form ``F = P_{d,d}(p)(., ..., .; 0)``."""
    zero_v = p.algebra.zero()

    def form(args: Sequence[LieElement]):
        return polarize(p, p.degree, list(args), zero_v)

    return form


def check_symmetric(form: Callable, algebra: LieAlgebra, d: int, rng, samples: int = 3) -> bool:
    for _ in range(samples):
        args = [random_element(algebra, rng) for _ in range(d)]
        base = form(args)
        perm = list(range(d))
        rng.shuffle(perm)
        if form([args[i] for i in perm]) != base:
            return False
    return True


def factor_oracle(form: Callable, linear: Callable, d: int, v: LieElement, xs: Sequence[LieElement]):
    """Brute force: the part of ``sum_slots F(w,..,L w,..,w)`` at ``w = v + sum t_i X_i``
    containing each ``X_i`` exactly once."""
    k1 = len(xs)
    ring = MultilinearRing(k1)
    coeffs = []
    for j in range(v.algebra.dim):
        c = ring.scalar(v.coeffs[j])
        for i, x in enumerate(xs):
            if x.coeffs[j]:
                c = c + ring.gen(i) * x.coeffs[j]
        coeffs.append(c)
    w = LieElement(v.algebra, tuple(coeffs), ring)
    lw = linear(w)
    total = ring.zero
    for slot in range(d):
        args = [lw if i == slot else w for i in range(d)]
        total = total + form(args)
    return total.top() if isinstance(total, RingElement) else total


def factor_formula(form: Callable, linear: Callable, d: int, v: LieElement, xs: Sequence[LieElement], swap_coefficients: bool = False):
    """Closed two-term expression for the same projection."""
    k = len(xs) + 1
    c1 = factorial(d) // factorial(d - k)
    c2 = factorial(d) // factorial(d - k + 1)
    if swap_coefficients:
        c1, c2 = c2, c1
    total = c1 * form([linear(v)] + list(xs) + [v] * (d - k))
    for j in range(len(xs)):
        rest = [x for i, x in enumerate(xs) if i != j]
        total = total + c2 * form([linear(xs[j])] + rest + [v] * (d - k + 1))
    return total


def check_factor_lemma(
    form: Callable,
    linear: Callable,
    d: int,
    v: LieElement,
    xs: Sequence[LieElement],
    rng=None,
    swap_coefficients: bool = False,
) -> bool:
    """Oracle-vs-formula comparison; ``form`` must be symmetric."""
    k = len(xs) + 1
    if k > d:
        raise ValueError(f"need k <= d, got k = {k}, d = {d}")
    if rng is not None and not check_symmetric(form, v.algebra, d, rng):
        raise InvariantError("form is not symmetric")
    return factor_oracle(form, linear, d, v, xs) == factor_formula(form, linear, d, v, xs, swap_coefficients)


# trace-power closed forms --------------------------------------------------------


def trace_word_sum(xs: Sequence[LieElement], v: LieElement, d: int, reading: str = "symmetrized"):
    """Closed form for polarising ``tr(A^d)``.

    ``literal``: ``d!/(d-k)! tr(X_1...X_k v^(d-k))``.
    ``symmetrized``: ``d!/(d-k)!`` times the average of ``tr(w)`` over the
    distinct arrangements ``w`` of the multiset ``{X_1..X_k, v^(d-k)}``;
    equivalently the sum of ``tr(w)`` over those arrangements.
    """
    k = len(xs)
    mats = [x.to_matrix() for x in xs]
    vm = v.to_matrix()

    def tr_prod(seq):
        m = seq[0]
        for nxt in seq[1:]:
            m = _mat_mul_generic(m, nxt)
        return _trace(m)

    if reading == "literal":
        coeff = factorial(d) // factorial(d - k)
        return coeff * tr_prod(mats + [vm] * (d - k))
    if reading != "symmetrized":
        raise ValueError(f"unknown reading {reading!r}")
    total = 0
    labels = list(range(k)) + [-1] * (d - k)
    for arrangement in set(permutations(labels)):
        total = total + tr_prod([vm if a < 0 else mats[a] for a in arrangement])
    return total
