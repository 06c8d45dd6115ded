"""Finite-dimensional dglas viewed as L-infinity algebras.

Conventions.  A dgla ``C`` is turned into an L-infinity structure on
``C[1]``: the shifted degree of a homogeneous ``a`` is ``deg a - 1``,
``q1(a) = -da`` and ``q2(a.b) = (-1)^deg(a) [a, b]`` (unshifted degree in
the exponent).  Symmetric words are reordered with the Koszul sign of the
shifted degrees.  Only the coderivation components ``Q_k^k`` and
``Q_k^{k-1}`` exist for a dgla.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Callable, Hashable, Iterable, Sequence

from . import linalg
from .scalars import ArtinRing, RingElement, common_ring, format_rational


class DglaError(ValueError):
    pass


# graded spaces ---------------------------------------------------------------


class GradedSpace:
    """Basis labels with a degree attached to each basis vector."""

    def __init__(self, labels: Sequence[str], degrees: Sequence[int]):
        if len(labels) != len(degrees):
            raise DglaError("labels and degrees differ in length")
        self.labels = tuple(labels)
        self.degrees = tuple(degrees)
        self.dim = len(labels)
        self._by_degree: dict[int, list[int]] = {}
        for i, d in enumerate(degrees):
            self._by_degree.setdefault(d, []).append(i)

    def indices(self, degree: int) -> list[int]:
        return list(self._by_degree.get(degree, ()))

    def component_dims(self) -> dict[int, int]:
        return {d: len(ix) for d, ix in sorted(self._by_degree.items())}

    def shift(self, n: int) -> "GradedSpace":
        """``V[n]`` with ``V[n]^i = V^(n+i)``."""
        return GradedSpace(self.labels, [d - n for d in self.degrees])


class GradedElement:
    """Sparse vector ``{basis index: coefficient}``; coefficients in Q or in a ring."""

    __slots__ = ("dgla", "coeffs")
    __hash__ = None

    def __init__(self, dgla: "Dgla", coeffs: dict):
        self.dgla = dgla
        self.coeffs = {i: c for i, c in coeffs.items() if c}

    def __add__(self, other: "GradedElement") -> "GradedElement":
        r = dict(self.coeffs)
        for i, c in other.coeffs.items():
            r[i] = r.get(i, 0) + c
        return GradedElement(self.dgla, r)

    def __neg__(self):
        return GradedElement(self.dgla, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GradedElement":
        return GradedElement(self.dgla, {i: x * c for i, x in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return not (self - other).coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def degrees(self) -> set[int]:
        return {self.dgla.space.degrees[i] for i in self.coeffs}

    def degree(self) -> int:
        """Degree of a homogeneous element (zero counts as homogeneous of any degree)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise DglaError(f"element is not homogeneous (degrees {sorted(ds)})")
        return ds.pop() if ds else 0

    def part(self, degree: int) -> "GradedElement":
        deg = self.dgla.space.degrees
        return GradedElement(self.dgla, {i: c for i, c in self.coeffs.items() if deg[i] == degree})

    def ring(self):
        return common_ring(self.coeffs.values())

    def map_coefficients(self, fn: Callable) -> "GradedElement":
        return GradedElement(self.dgla, {i: fn(c) for i, c in self.coeffs.items()})

    def __repr__(self):
        labels = self.dgla.space.labels
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{labels[i]}" for i, c in sorted(self.coeffs.items()))

    def serialize(self) -> dict:
        labels = self.dgla.space.labels
        return {labels[i]: _serialize_scalar(c) for i, c in sorted(self.coeffs.items())}


def _serialize_scalar(c) -> str:
    if isinstance(c, RingElement):
        return str(c)
    return format_rational(c)


# dglas -----------------------------------------------------------------------


class Dgla:
    """A finite-dimensional dgla on a basis.

    ``differential[i]`` is the sparse image ``{j: c}`` of basis vector ``i``;
    ``bracket_basis(i, j)`` returns the sparse bracket of two basis vectors.
    ``stratum(i)`` labels basis vectors for profile stratification (the
    degree by default).
    """

    def __init__(
        self,
        name: str,
        space: GradedSpace,
        differential: Sequence[dict],
        bracket_basis: Callable[[int, int], dict] | None,
        stratum: Callable[[int], Hashable] | None = None,
    ):
        self.name = name
        self.space = space
        self.dim = space.dim
        self.differential = [dict(x) for x in differential]
        self._bracket_basis = bracket_basis
        self._bracket_cache: dict[tuple[int, int], dict] = {}
        self._stratum = stratum

    @property
    def abelian(self) -> bool:
        return self._bracket_basis is None

    def stratum(self, i: int) -> Hashable:
        return self._stratum(i) if self._stratum else self.space.degrees[i]

    def basis(self, i: int) -> GradedElement:
        return GradedElement(self, {i: 1})

    def zero(self) -> GradedElement:
        return GradedElement(self, {})

    def element(self, coeffs: dict) -> GradedElement:
        return GradedElement(self, coeffs)

    def bracket_basis(self, i: int, j: int) -> dict:
        if self._bracket_basis is None:
            return {}
        key = (i, j)
        r = self._bracket_cache.get(key)
        if r is None:
            r = {k: c for k, c in self._bracket_basis(i, j).items() if c}
            self._bracket_cache[key] = r
        return r

    def d(self, x: GradedElement) -> GradedElement:
        r: dict = {}
        for i, c in x.coeffs.items():
            for j, a in self.differential[i].items():
                r[j] = r.get(j, 0) + c * a
        return GradedElement(self, r)

    def bracket(self, x: GradedElement, y: GradedElement) -> GradedElement:
        r: dict = {}
        if self._bracket_basis is None:
            return GradedElement(self, r)
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                br = self.bracket_basis(i, j)
                if not br:
                    continue
                ab = a * b
                if not ab:
                    continue
                for k, c in br.items():
                    r[k] = r.get(k, 0) + ab * c
        return GradedElement(self, r)

    def ad(self, x: GradedElement) -> Callable[[GradedElement], GradedElement]:
        return lambda y: self.bracket(x, y)

    # matrices ------------------------------------------------------------
    def differential_matrix(self, degree: int) -> list[list]:
        """Rows indexed by degree+1 basis, columns by degree basis."""
        src = self.space.indices(degree)
        tgt = self.space.indices(degree + 1)
        pos = {j: r for r, j in enumerate(tgt)}
        rows = [[0] * len(src) for _ in tgt]
        for col, i in enumerate(src):
            for j, c in self.differential[i].items():
                if j not in pos:
                    raise DglaError(f"{self.name}: differential of {self.space.labels[i]} leaves degree {degree + 1}")
                rows[pos[j]][col] = c
        return rows

    # axioms --------------------------------------------------------------
    def check_axioms(self, rng: random.Random | None = None, max_triples: int = 20000) -> list[str]:
        """Exact basis checks; returns a list of violations (empty when all hold).

        Jacobi runs over all basis triples when there are at most
        ``max_triples`` of them and over a seeded sample otherwise.
        """
        problems: list[str] = []
        deg = self.space.degrees
        n = self.dim
        lab = self.space.labels
        for i in range(n):
            for j in self.differential[i]:
                if deg[j] != deg[i] + 1:
                    problems.append(f"d({lab[i]}) has a term of degree {deg[j]}")
            if self.d(self.d(self.basis(i))):
                problems.append(f"d^2({lab[i]}) != 0")
        if self.abelian:
            return problems
        for i in range(n):
            for j in range(n):
                br = self.bracket_basis(i, j)
                for k in br:
                    if deg[k] != deg[i] + deg[j]:
                        problems.append(f"[{lab[i]},{lab[j]}] has a term of degree {deg[k]}")
                sym = self.bracket_basis(j, i)
                s = -((-1) ** (deg[i] * deg[j]))
                if {k: c for k, c in br.items()} != {k: s * c for k, c in sym.items()}:
                    problems.append(f"graded antisymmetry fails on ({lab[i]},{lab[j]})")
                a, b = self.basis(i), self.basis(j)
                lhs = self.d(self.bracket(a, b))
                rhs = self.bracket(self.d(a), b) + self.bracket(a, self.d(b)).scale((-1) ** deg[i])
                if lhs != rhs:
                    problems.append(f"d is not a derivation on ({lab[i]},{lab[j]})")
        triples: Iterable
        if n**3 <= max_triples:
            triples = ((i, j, k) for i in range(n) for j in range(n) for k in range(n))
        else:
            rng = rng or random.Random(f"axioms:{self.name}")
            triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(max_triples)]
        for i, j, k in triples:
            a, b, c = self.basis(i), self.basis(j), self.basis(k)
            lhs = self.bracket(a, self.bracket(b, c))
            rhs = self.bracket(self.bracket(a, b), c) + self.bracket(b, self.bracket(a, c)).scale((-1) ** (deg[i] * deg[j]))
            if lhs != rhs:
                problems.append(f"graded Jacobi fails on ({lab[i]},{lab[j]},{lab[k]})")
        return problems


def abelian_dgla(name: str, labels: Sequence[str], degrees: Sequence[int], differential: Sequence[dict] | None = None, stratum=None) -> Dgla:
    space = GradedSpace(labels, degrees)
    diff = differential if differential is not None else [{} for _ in labels]
    return Dgla(name, space, diff, None, stratum)


# symmetric words -------------------------------------------------------------


def shifted_degree(x: GradedElement) -> int:
    return x.degree() - 1


def unshuffles(k: int, n: int) -> list[tuple[int, ...]]:
    """All ``(k, n-k)`` unshuffles as tuples ``(sigma_1, ..., sigma_n)`` (0-based)."""
    if not 0 <= k <= n:
        raise ValueError(f"unshuffles need 0 <= k <= n, got k = {k}, n = {n}")
    out = []
    for first in combinations(range(n), k):
        rest = tuple(i for i in range(n) if i not in first)
        out.append(first + rest)
    return out


def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of reordering factors of the given degrees into ``perm`` order."""
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and degrees[perm[a]] % 2 and degrees[perm[b]] % 2:
                sign = -sign
    return sign


@dataclass
class SymWord:
    """A representative ``s_1 ... s_k`` of a product in ``S(C[1])``."""

    factors: tuple
    coefficient: object = 1

    def __post_init__(self):
        self.factors = tuple(self.factors)

    @property
    def length(self) -> int:
        return len(self.factors)

    def shifted_degrees(self) -> list[int]:
        return [shifted_degree(x) for x in self.factors]

    def permuted(self, perm: Sequence[int]) -> "SymWord":
        """The same symmetric product written in ``perm`` order."""
        sign = koszul_sign(perm, self.shifted_degrees())
        return SymWord(tuple(self.factors[i] for i in perm), self.coefficient * sign)


FormalSum = list  # list[SymWord]


def coderivation_Qkk(dgla: Dgla, word: SymWord) -> FormalSum:
    """``sum_{S(1,k-1)} eps(sigma) q1(s_sigma1) s_sigma2 ...`` with ``q1 = -d``."""
    k = word.length
    degs = word.shifted_degrees()
    out = []
    for perm in unshuffles(1, k):
        sign = koszul_sign(perm, degs)
        head = -dgla.d(word.factors[perm[0]])
        if not head:
            continue
        out.append(SymWord((head,) + tuple(word.factors[i] for i in perm[1:]), word.coefficient * sign))
    return out


def q2(dgla: Dgla, a: GradedElement, b: GradedElement) -> GradedElement:
    return dgla.bracket(a, b).scale((-1) ** a.degree())


def coderivation_Qk_km1(dgla: Dgla, word: SymWord, flip_q2: bool = False) -> FormalSum:
    """``sum_{S(2,k-2)} eps(sigma) q2(s_sigma1 s_sigma2) s_sigma3 ...``."""
    k = word.length
    if k < 2:
        raise ValueError("Q_k^(k-1) needs k >= 2")
    if dgla.abelian:
        return []
    degs = word.shifted_degrees()
    out = []
    for perm in unshuffles(2, k):
        sign = koszul_sign(perm, degs)
        a, b = word.factors[perm[0]], word.factors[perm[1]]
        head = q2(dgla, a, b)
        if flip_q2:
            head = dgla.bracket(a, b)
        if not head:
            continue
        out.append(SymWord((head,) + tuple(word.factors[i] for i in perm[2:]), word.coefficient * sign))
    return out


def apply_Q(dgla: Dgla, words: FormalSum, flip_q2: bool = False) -> FormalSum:
    out = []
    for w in words:
        out.extend(coderivation_Qkk(dgla, w))
        if w.length >= 2:
            out.extend(coderivation_Qk_km1(dgla, w, flip_q2))
    return out


def canonicalize(dgla: Dgla, words: FormalSum) -> dict:
    """Expand into sorted basis words ``{(i_1 <= ... <= i_k): coefficient}``."""
    shifted = [d - 1 for d in dgla.space.degrees]
    total: dict = {}
    for w in words:
        expansions = [((), w.coefficient)]
        for f in w.factors:
            nxt = []
            for idx, c in expansions:
                for i, a in f.coeffs.items():
                    nxt.append((idx + (i,), c * a))
            expansions = nxt
        for idx, c in expansions:
            key, sign = _sort_word(idx, shifted)
            if key is None:
                continue
            total[key] = total.get(key, 0) + sign * c
    return {k: c for k, c in total.items() if c}


def _sort_word(idx: tuple, shifted: Sequence[int]):
    items = list(idx)
    sign = 1
    for a in range(1, len(items)):
        b = a
        while b > 0 and items[b - 1] > items[b]:
            if shifted[items[b - 1]] % 2 and shifted[items[b]] % 2:
                sign = -sign
            items[b - 1], items[b] = items[b], items[b - 1]
            b -= 1
    for a in range(1, len(items)):
        if items[a] == items[a - 1] and shifted[items[a]] % 2:
            return None, 0
    return tuple(items), sign


# profiles --------------------------------------------------------------------


def profiles(dgla: Dgla, k: int) -> list[tuple]:
    strata = sorted({dgla.stratum(i) for i in range(dgla.dim)}, key=repr)
    return [tuple(p) for p in combinations_with_replacement(strata, k)]


def _members(dgla: Dgla) -> dict:
    cache = getattr(dgla, "_members_cache", None)
    if cache is None:
        cache = {}
        for i in range(dgla.dim):
            cache.setdefault(dgla.stratum(i), []).append(i)
        dgla._members_cache = cache
    return cache


def random_stratum_element(dgla: Dgla, stratum: Hashable, rng: random.Random, terms: int = 2, lo: int = -5, hi: int = 5) -> GradedElement:
    members = _members(dgla)[stratum]
    coeffs: dict = {}
    for _ in range(terms):
        i = rng.choice(members)
        coeffs[i] = coeffs.get(i, 0) + rng.choice([c for c in range(lo, hi + 1) if c])
    return GradedElement(dgla, coeffs)


def random_basis_word(dgla: Dgla, profile: Sequence, rng: random.Random) -> SymWord:
    members = _members(dgla)
    return SymWord(tuple(dgla.basis(rng.choice(members[s])) for s in profile))


def _odd_count(dgla: Dgla, profile: Sequence) -> int | None:
    """Number of shifted-odd factors, or None when a stratum mixes parities."""
    members = _members(dgla)
    n = 0
    for s in profile:
        parities = {(dgla.space.degrees[i] - 1) % 2 for i in members[s]}
        if len(parities) != 1:
            return None
        n += parities.pop()
    return n


# reports ---------------------------------------------------------------------


@dataclass
class CheckEntry:
    identity: str
    k: int
    profile: str
    trials: int = 0
    failures: int = 0
    first_counterexample: dict | None = None

    def record(self, ok: bool, witness: Callable[[], dict]):
        self.trials += 1
        if not ok:
            self.failures += 1
            if self.first_counterexample is None:
                self.first_counterexample = witness()

    def as_dict(self) -> dict:
        d = {"identity": self.identity, "k": self.k, "degree_profile": self.profile, "trials": self.trials, "failures": self.failures}
        if self.first_counterexample is not None:
            d["first_counterexample"] = self.first_counterexample
        return d


@dataclass
class CheckReport:
    subject: str
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.failures == 0 for e in self.entries)

    @property
    def trials(self) -> int:
        return sum(e.trials for e in self.entries)

    @property
    def failures(self) -> int:
        return sum(e.failures for e in self.entries)

    def first_failure(self) -> CheckEntry | None:
        for e in self.entries:
            if e.failures:
                return e
        return None

    def extend(self, other: "CheckReport"):
        self.entries.extend(other.entries)


def _profile_label(profile) -> str:
    return "(" + ",".join(str(s) for s in profile) + ")"


def _word_witness(word: SymWord) -> dict:
    return {"word": [f.serialize() for f in word.factors]}


# codifferential --------------------------------------------------------------


def check_codifferential(
    dgla: Dgla,
    k_max: int,
    rng: random.Random | None = None,
    trials: int = 5,
    max_odd: int = 3,
    exhaustive_limit: int = 200,
    flip_q2: bool = False,
) -> CheckReport:
    """``Q o Q = 0`` on basis words of every profile up to length ``k_max``.

    Profiles with more than ``max_odd`` shifted-odd factors are skipped.
    A profile with at most ``exhaustive_limit`` basis words is checked on
    all of them, otherwise on ``trials`` random words.
    """
    rng = rng or random.Random(f"codifferential:{dgla.name}")
    report = CheckReport(dgla.name)
    members = _members(dgla)
    for k in range(1, k_max + 1):
        for profile in profiles(dgla, k):
            odd = _odd_count(dgla, profile)
            if odd is not None and odd > max_odd:
                continue
            entry = CheckEntry("Q^2=0", k, _profile_label(profile))
            count = 1
            for s in profile:
                count *= len(members[s])
            if count <= exhaustive_limit:
                words = _all_words(dgla, profile)
            else:
                words = [random_basis_word(dgla, profile, rng) for _ in range(trials)]
            for w in words:
                result = canonicalize(dgla, apply_Q(dgla, apply_Q(dgla, [w], flip_q2), flip_q2))
                entry.record(not result, lambda w=w: _word_witness(w))
            report.entries.append(entry)
    return report


def _all_words(dgla: Dgla, profile: Sequence) -> list[SymWord]:
    members = _members(dgla)
    words = [()]
    for s in profile:
        words = [w + (i,) for w in words for i in members[s]]
    seen = set()
    out = []
    for w in words:
        key = tuple(sorted(w))
        if key in seen:
            continue
        seen.add(key)
        out.append(SymWord(tuple(dgla.basis(i) for i in w)))
    return out


# L-infinity morphisms --------------------------------------------------------


class LinftyMorphism:
    """Taylor coefficients ``h_k`` from ``source[1]`` to an abelian ``target[1]``.

    ``components[k]`` takes a list of ``k`` homogeneous source elements and
    returns a target element; missing ``k`` (and ``k > K``) give zero.
    """

    def __init__(self, source: Dgla, target: Dgla, components: dict, K: int, name: str = "h"):
        if not target.abelian:
            raise DglaError("only abelian targets are supported")
        self.source = source
        self.target = target
        self.components = dict(components)
        self.K = K
        self.name = name

    def h(self, k: int, args: Sequence[GradedElement]) -> GradedElement:
        if len(args) != k:
            raise ValueError(f"h_{k} needs {k} arguments")
        fn = self.components.get(k)
        if fn is None or k > self.K:
            return self.target.zero()
        return fn(list(args))

    def on_word(self, word: SymWord) -> GradedElement:
        return self.h(word.length, word.factors).scale(word.coefficient)

    def on_sum(self, k: int, words: FormalSum) -> GradedElement:
        total = self.target.zero()
        for w in words:
            if w.length != k:
                raise DglaError("formal sum mixes word lengths")
            total = total + self.on_word(w)
        return total


def morphism_defect(h: LinftyMorphism, word: SymWord) -> GradedElement:
    """``h_k(Q_k^k w) + h_{k-1}(Q_k^{k-1} w) - qhat1(h_k w)`` with ``qhat1 = -dhat``."""
    k = word.length
    lhs = h.on_sum(k, coderivation_Qkk(h.source, word))
    if k >= 2:
        lhs = lhs + h.on_sum(k - 1, coderivation_Qk_km1(h.source, word))
    rhs = -h.target.d(h.on_word(word))
    return lhs - rhs


def check_linfty_morphism(
    h: LinftyMorphism,
    k_max: int,
    trials: int,
    rng: random.Random | None = None,
    profile_filter: Callable[[tuple], str | None] | None = None,
    check_symmetry: bool = True,
) -> CheckReport:
    """Morphism conditions on random homogeneous words of every profile.

    ``profile_filter`` may rename a profile (e.g. to tag a stratum) or
    return None to skip it.
    """
    rng = rng or random.Random(f"morphism:{h.name}")
    report = CheckReport(h.name)
    src = h.source
    for k in range(1, k_max + 1):
        for profile in profiles(src, k):
            label = _profile_label(profile)
            if profile_filter is not None:
                tag = profile_filter(profile)
                if tag is None:
                    continue
                label = f"{tag}{label}" if tag else label
            ident = "mor1" if k == 1 else "mor2"
            entry = CheckEntry(ident, k, label)
            sym = CheckEntry("symmetry", k, label) if check_symmetry and k >= 2 else None
            for _ in range(trials):
                word = SymWord(tuple(random_stratum_element(src, s, rng) for s in profile))
                defect = morphism_defect(h, word)
                entry.record(not defect, lambda w=word, dft=defect: {**_word_witness(w), "defect": dft.serialize()})
                if sym is not None:
                    perm = list(range(k))
                    rng.shuffle(perm)
                    ok = h.on_word(word.permuted(perm)) == h.on_word(word)
                    sym.record(ok, lambda w=word, p=tuple(perm): {**_word_witness(w), "permutation": list(p)})
            report.entries.append(entry)
            if sym is not None:
                report.entries.append(sym)
    return report


# Maurer-Cartan ---------------------------------------------------------------


def mc_defect(dgla: Dgla, u: GradedElement) -> GradedElement:
    """``du + 1/2 [u, u]``."""
    return dgla.d(u) + dgla.bracket(u, u).scale(Fraction(1, 2))


def _check_in_ideal(u: GradedElement, what: str):
    for c in u.coeffs.values():
        if not isinstance(c, RingElement) or not c.in_maximal_ideal():
            raise DglaError(f"{what} must have coefficients in the maximal ideal")


def mc_set_check(dgla: Dgla, ring: ArtinRing, u: GradedElement) -> bool:
    if u.coeffs and u.degrees() != {1}:
        raise DglaError(f"MC elements live in degree 1, got degrees {sorted(u.degrees())}")
    _check_in_ideal(u, "u")
    return not mc_defect(dgla, u)


def exp_ad(dgla: Dgla, lam: GradedElement, x: GradedElement) -> GradedElement:
    """``e^{ad lam}(x)``; ``lam`` over the maximal ideal so the series stops."""
    _check_in_ideal(lam, "lambda")
    total = x
    term = x
    j = 1
    while True:
        term = dgla.bracket(lam, term).scale(Fraction(1, j))
        if not term:
            return total
        total = total + term
        j += 1


def gauge_act(dgla: Dgla, lam: GradedElement, u: GradedElement) -> GradedElement:
    """``e^{ad lam}(u) - sum_{j>=0} (ad lam)^j (d lam)/(j+1)!``."""
    if lam.coeffs and lam.degrees() != {0}:
        raise DglaError("gauge parameters live in degree 0")
    if not lam.coeffs:
        return u
    _check_in_ideal(lam, "lambda")
    result = exp_ad(dgla, lam, u)
    term = dgla.d(lam)
    j = 0
    while term:
        result = result - term.scale(Fraction(1, factorial(j + 1)))
        term = dgla.bracket(lam, term)
        j += 1
    return result


def bch(dgla: Dgla, x: GradedElement, y: GradedElement) -> GradedElement:
    """Baker-Campbell-Hausdorff through brackets of length four."""
    br = dgla.bracket
    xy = br(x, y)
    return (
        x
        + y
        + xy.scale(Fraction(1, 2))
        + (br(x, xy) + br(y, br(y, x))).scale(Fraction(1, 12))
        - br(y, br(x, xy)).scale(Fraction(1, 24))
    )


def mc_pushforward(h: LinftyMorphism, x: GradedElement, check: bool = True) -> GradedElement:
    """``sum_{k>=1} h_k(x^k)/k!``; verifies that the result is MC in the target."""
    if check and mc_defect(h.source, x):
        raise DglaError("x is not a Maurer-Cartan element")
    total = h.target.zero()
    if x.coeffs:
        for k in range(1, h.K + 1):
            total = total + h.h(k, [x] * k).scale(Fraction(1, factorial(k)))
    if check and h.target.d(total):
        raise DglaError("pushforward is not Maurer-Cartan in the target")
    return total


def mc_extend_partial(dgla: Dgla, order: int, rng: random.Random, lo: int = -3, hi: int = 3) -> tuple[list[GradedElement], int | None]:
    """Coefficients ``x_1, x_2, ...`` of an MC element ``sum_j t^j x_j`` built order by order.

    ``x_1`` is a random cocycle; at order ``j`` the equation
    ``d x_j = -1/2 sum_{a+b=j} [x_a, x_b]`` is solved exactly and a random
    cocycle is added.  Returns ``([0, x_1, ..., x_{j-1}], j)`` when order
    ``j`` is obstructed, and ``([0, x_1, ..., x_{order-1}], None)`` otherwise.
    """
    src = dgla.space.indices(1)
    tgt = dgla.space.indices(2)
    dmat = dgla.differential_matrix(1)
    kernel = linalg.nullspace(dmat, len(src)) if tgt else [[1 if i == j else 0 for i in range(len(src))] for j in range(len(src))]
    pos = {k: r for r, k in enumerate(tgt)}

    def random_cocycle() -> GradedElement:
        vec = [0] * len(src)
        for basis_vec in kernel:
            c = rng.randint(lo, hi)
            if c:
                vec = [a + c * b for a, b in zip(vec, basis_vec)]
        return GradedElement(dgla, {src[i]: c for i, c in enumerate(vec) if c})

    parts: list[GradedElement] = [dgla.zero(), random_cocycle()]
    for j in range(2, order):
        rhs = dgla.zero()
        for a in range(1, j):
            rhs = rhs + dgla.bracket(parts[a], parts[j - a])
        vec = [0] * len(tgt)
        for k, c in rhs.scale(Fraction(-1, 2)).coeffs.items():
            vec[pos[k]] = c
        sol = linalg.solve(dmat, vec, len(src)) if tgt else [0] * len(src)
        if sol is None:
            return parts, j
        parts.append(GradedElement(dgla, {src[i]: c for i, c in enumerate(sol) if c}) + random_cocycle())
    return parts, None


def assemble_series(dgla: Dgla, ring: ArtinRing, parts: Sequence[GradedElement]) -> GradedElement:
    """``sum_j t^j parts[j]`` over ``Q[t]/t^m``."""
    t = ring.gen(0)
    total = dgla.zero()
    power = ring.one
    for j in range(1, len(parts)):
        power = power * t
        total = total + parts[j].scale(power)
    return total


def mc_extend(dgla: Dgla, ring: ArtinRing, rng: random.Random, lo: int = -3, hi: int = 3) -> GradedElement | None:
    """A random MC element over ``Q[t]/t^m``, or None when an obstruction appears."""
    if ring.num_vars != 1:
        raise DglaError("mc_extend works over Q[t]/t^m")
    parts, failed = mc_extend_partial(dgla, ring.order, rng, lo, hi)
    if failed is not None:
        return None
    return assemble_series(dgla, ring, parts)


# cohomology ------------------------------------------------------------------


def cohomology(dgla: Dgla, degree: int) -> list[GradedElement]:
    """Representatives of a basis of ``H^degree``."""
    src = dgla.space.indices(degree)
    if not src:
        return []
    dmat = dgla.differential_matrix(degree)
    cycles = linalg.nullspace(dmat, len(src)) if dmat else [[1 if i == j else 0 for i in range(len(src))] for j in range(len(src))]
    prev = dgla.space.indices(degree - 1)
    boundaries = linalg.transpose(dgla.differential_matrix(degree - 1), len(prev)) if prev else []
    boundaries = [b for b in boundaries if any(b)]
    chosen: list[list] = []
    span = list(boundaries)
    for z in cycles:
        if not linalg.in_span(span, z):
            span.append(z)
            chosen.append(z)
    return [GradedElement(dgla, {src[i]: c for i, c in enumerate(z) if c}) for z in chosen]


def is_exact(dgla: Dgla, x: GradedElement) -> bool:
    """Is the rational element ``x`` in the image of ``d``?"""
    if not x.coeffs:
        return True
    degree = x.degree()
    prev = dgla.space.indices(degree - 1)
    if not prev:
        return False
    tgt = dgla.space.indices(degree)
    pos = {k: r for r, k in enumerate(tgt)}
    vec = [0] * len(tgt)
    for k, c in x.coeffs.items():
        vec[pos[k]] = c
    return linalg.solve(dgla.differential_matrix(degree - 1), vec, len(prev)) is not None
