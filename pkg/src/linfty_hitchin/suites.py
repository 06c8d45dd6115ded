"""Seeded verification suites behind the command-line interface.

Every suite draws its samples from ``random.Random(f"{seed}:{suite}:{fixture}")``
(Python's Mersenne Twister), so a fixture's samples do not depend on which
other fixtures run.  Each suite has at least one sabotage switch
(``negctl``) that must make it fail.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Callable

from . import __version__
from .adjoint import ToyHiggsDgla, build_adjoint_morphism, centraliser_check, v_fixture, verify_def_equals_chi
from .hitchin import (
    HitchinModel,
    ModelError,
    build_hitchin_morphism,
    bundled_models,
    case_tag,
    load_algebra,
    load_model,
    quotient_from_spec,
    verify_def_equals_hitchin,
    verify_obstruction,
)
from .invariants import (
    AdjointQuotient,
    InvariantPolynomial,
    builtin_invariants,
    check_factor_lemma,
    check_funny_identity,
    check_lemma_invariance,
    check_symmetric,
    check_taylor,
    full_polarisation_form,
    polarize,
    trace_word_sum,
)
from .kuranishi import compute_hull, verify_hull_surjectivity
from .lie import LieAlgebra, LieAlgebraError, LieElement, bracket, exp_ad, random_element, random_ideal_element
from .linfty import CheckEntry, CheckReport, check_codifferential, check_linfty_morphism
from .scalars import ArtinRing, format_artin, format_rational, random_artin, small_extension_pair

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

SCHEMA = "linfty-hitchin-report/1"
PRNG = "python random.Random (MT19937) seeded with the string '<seed>:<suite>:<fixture>'"

DEFAULT_ALGEBRAS = ("gl2", "gl3", "sl2", "sl3")
V_FIXTURES = ("regular-ss", "regular-nilpotent", "zero")


class UsageError(ValueError):
    """Bad flags or unreadable inputs (exit code 2)."""


@dataclass
class SuiteConfig:
    suite: str
    seed: int = 0
    algebra: str | None = None
    model: str | None = None
    v: str | None = None
    trials: int | None = None
    k_max: int | None = None
    ring: str | None = None
    negctl: str | None = None
    record_samples: bool = False


@dataclass
class SuiteResult:
    suite: str
    anchor: str
    negctl: str | None
    entries: list = field(default_factory=list)  # (fixture, CheckEntry)
    notes: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def failures(self) -> int:
        return sum(e.failures for _, e in self.entries)

    @property
    def trials(self) -> int:
        return sum(e.trials for _, e in self.entries)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.trials > 0

    def add(self, fixture: str, entry: CheckEntry):
        self.entries.append((fixture, entry))

    def add_report(self, fixture: str, report: CheckReport):
        for e in report.entries:
            self.add(fixture, e)

    def first_failure(self):
        for fixture, e in self.entries:
            if e.failures:
                return fixture, e
        return None

    def as_dict(self, include_samples: bool = False) -> dict:
        entries = []
        for fixture, e in self.entries:
            d = {"suite": self.suite, "dgla_id": fixture}
            d.update(e.as_dict())
            entries.append(d)
        digest = hashlib.sha256(json.dumps(self.samples, sort_keys=True).encode()).hexdigest()
        out = {
            "suite": self.suite,
            "anchor": self.anchor,
            "negctl": self.negctl,
            "verdict": "pass" if self.passed else "fail",
            "trials": self.trials,
            "failures": self.failures,
            "entries": entries,
            "notes": list(self.notes),
            "samples_sha256": digest,
        }
        if include_samples:
            out["samples"] = self.samples
        return out


def suite_rng(seed: int, suite: str, fixture: str) -> random.Random:
    return random.Random(f"{seed}:{suite}:{fixture}")


def _fmt(x) -> str:
    if hasattr(x, "ring") and hasattr(x, "coeffs") and not isinstance(x, LieElement):
        return format_artin(x)
    return format_rational(x)


def _lie(x: LieElement) -> list[str]:
    return [_fmt(c) for c in x.coeffs]


# fixtures --------------------------------------------------------------------


def algebra_fixtures(config: SuiteConfig) -> list[tuple[LieAlgebra, list[InvariantPolynomial]]]:
    """``(algebra, invariant polynomials)`` pairs selected by ``--algebra``."""
    names = [config.algebra] if config.algebra else list(DEFAULT_ALGEBRAS)
    out = []
    for name in names:
        if name.startswith("spec:"):
            path = Path(name[5:])
            try:
                data = tomllib.loads(path.read_text())
            except FileNotFoundError:
                raise UsageError(f"{path}: no such algebra file") from None
            except tomllib.TOMLDecodeError as exc:
                raise UsageError(f"{path}: {exc}") from None
            try:
                alg = load_algebra(name)
                polys = list(quotient_from_spec(alg, data, str(path)).components)
            except ModelError as exc:
                raise UsageError(str(exc)) from None
            out.append((alg, polys))
            continue
        try:
            alg = load_algebra(name)
        except ModelError as exc:
            raise UsageError(str(exc)) from None
        out.append((alg, builtin_invariants(alg)))
    return out


def quotient_for(alg: LieAlgebra, polys: list[InvariantPolynomial]) -> AdjointQuotient:
    charpoly = [p for p in polys if p.kind and p.kind[0] == "charpoly"]
    if charpoly:
        return AdjointQuotient(charpoly)
    return AdjointQuotient(polys, check_degrees=False)


def v_fixtures(config: SuiteConfig, alg: LieAlgebra) -> list[tuple[str, LieElement]]:
    kinds = [config.v] if config.v else list(V_FIXTURES)
    out = []
    for kind in kinds:
        try:
            out.append((kind, v_fixture(alg, kind)))
        except LieAlgebraError as exc:
            if config.v:
                raise UsageError(str(exc)) from None
    return out


def parse_ring(spec: str) -> ArtinRing:
    """``"r,m"`` -> ``Q[t_1..t_r]/(deg >= m)``."""
    try:
        r, m = (int(x) for x in spec.split(","))
        return ArtinRing(r, m, names=("t",) if r == 1 else None)
    except ValueError:
        raise UsageError(f"--ring {spec!r}: expected 'r,m' with r >= 1 and m >= 1") from None


def model_fixtures(config: SuiteConfig) -> list[HitchinModel]:
    names = [config.model] if config.model else bundled_models()
    out = []
    for name in names:
        try:
            out.append(load_model(name))
        except ModelError as exc:
            raise UsageError(str(exc)) from None
    return out


def _trials(config: SuiteConfig, default: int) -> int:
    return config.trials if config.trials is not None else default


def _negctl(config: SuiteConfig, allowed: tuple) -> str | None:
    if config.negctl is not None and config.negctl not in allowed:
        raise UsageError(f"suite {config.suite!r} has no negative control {config.negctl!r} (available: {', '.join(allowed)})")
    return config.negctl


# suites ----------------------------------------------------------------------


def suite_artin(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("no-truncation",))
    n = _trials(config, 100)
    for r, m in ((1, 3), (1, 6), (2, 3), (3, 4), (4, 4)):
        ring = ArtinRing(r, m)
        fixture = repr(ring)
        rng = suite_rng(config.seed, config.suite, fixture)
        assoc = CheckEntry("associativity", 3, fixture)
        dist = CheckEntry("distributivity", 3, fixture)
        nil = CheckEntry("a^m=0 on m_A", 1, fixture)
        loose = ArtinRing(r, m + 1) if neg == "no-truncation" else ring
        for _ in range(n):
            a, b, c = (random_artin(ring, rng, ideal=False) for _ in range(3))
            assoc.record((a * b) * c == a * (b * c), lambda a=a, b=b, c=c: {"a": str(a), "b": str(b), "c": str(c)})
            dist.record(a * (b + c) == a * b + a * c, lambda a=a, b=b, c=c: {"a": str(a), "b": str(b), "c": str(c)})
            x = random_artin(ring, rng)
            if loose is not ring:
                x = x.lift_to(loose)
            nil.record(not x**m, lambda x=x: {"a": str(x)})
            res.samples.append([str(a), str(b), str(c), str(x)])
        for e in (assoc, dist, nil):
            res.add(fixture, e)
    ext = CheckEntry("small-extension projection", 1, "Q[t]/t^(r+1) -> Q[t]/t^r")
    rng = suite_rng(config.seed, config.suite, "small-extension")
    for r in (2, 3, 4):
        big, small, proj = small_extension_pair(r)
        for _ in range(max(1, n // 10)):
            y = random_artin(small, rng, ideal=False)
            kernel = big.gen(0) ** r
            ok = proj(y.lift_to(big)) == y and not (kernel * big.gen(0)) and not proj(kernel)
            ext.record(ok, lambda y=y: {"y": str(y)})
    res.add("small-extension", ext)


def _break_jacobi(alg: LieAlgebra) -> LieAlgebra:
    constants = {}
    for i in range(alg.dim):
        for j in range(alg.dim):
            for k, c in alg._table[i][j]:
                constants[(i, j, k)] = c
    i, j = 0, 1
    k = alg.dim - 1
    constants[(i, j, k)] = constants.get((i, j, k), 0) + 1
    constants[(j, i, k)] = constants.get((j, i, k), 0) - 1
    return LieAlgebra(alg.name + "-broken", alg.basis_labels, constants, validate=False)


def suite_lie(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("break-jacobi",))
    n = _trials(config, 100)
    ring = ArtinRing(1, 4, names=("t",))
    for alg, _ in algebra_fixtures(config):
        fixture = alg.name
        rng = suite_rng(config.seed, config.suite, fixture)
        test_alg = _break_jacobi(alg) if neg == "break-jacobi" and alg.dim >= 3 else alg
        jac = CheckEntry("Jacobi", 3, fixture)
        auto = CheckEntry("exp_ad-automorphism", 2, repr(ring))
        inv = CheckEntry("exp_ad(-lam)exp_ad(lam)=id", 1, repr(ring))
        for _ in range(n):
            x, y, z = (random_element(test_alg, rng) for _ in range(3))
            total = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
            jac.record(total.is_zero(), lambda x=x, y=y, z=z: {"x": _lie(x), "y": _lie(y), "z": _lie(z)})
            res.samples.append([_lie(x), _lie(y), _lie(z)])
        for _ in range(max(1, n // 5)):
            lam = random_ideal_element(alg, ring, rng)
            x = random_ideal_element(alg, ring, rng) + random_element(alg, rng).over(ring)
            y = random_element(alg, rng).over(ring)
            lhs = exp_ad(lam, bracket(x, y))
            rhs = bracket(exp_ad(lam, x), exp_ad(lam, y))
            auto.record(lhs == rhs, lambda lam=lam: {"lambda": _lie(lam)})
            inv.record(exp_ad(-lam, exp_ad(lam, x)) == x, lambda lam=lam: {"lambda": _lie(lam)})
        for e in (jac, auto, inv):
            res.add(fixture, e)


def _poly_fixtures(config: SuiteConfig):
    for alg, polys in algebra_fixtures(config):
        for p in polys:
            yield alg, p


def suite_polarisation(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("drop-factorial",))
    n = _trials(config, 20)
    literal_total = literal_bad = 0
    for alg, p in _poly_fixtures(config):
        fixture = p.label
        rng = suite_rng(config.seed, config.suite, fixture)
        d = p.degree
        sym = CheckEntry("symmetry", d, fixture)
        lin = CheckEntry("multilinearity", d, fixture)
        van = CheckEntry("vanishing-above-degree", d + 1, fixture)
        full = CheckEntry("P_dk=P_dd/(d-k)!", d, fixture)
        closed = CheckEntry("trace-closed-form-symmetrized", d, fixture) if p.kind and p.kind[0] == "trace" else None
        for _ in range(n):
            k = rng.randint(1, d)
            args = [random_element(alg, rng) for _ in range(k)]
            v = random_element(alg, rng)
            res.samples.append([_lie(x) for x in args] + [_lie(v)])
            base = polarize(p, k, args, v)
            perm = list(range(k))
            rng.shuffle(perm)
            sym.record(polarize(p, k, [args[i] for i in perm], v) == base, lambda a=args, v=v: {"args": [_lie(x) for x in a], "v": _lie(v)})
            x2 = random_element(alg, rng)
            a, b = rng.randint(-5, 5), rng.randint(-5, 5)
            combo = [args[0].scale(a) + x2.scale(b)] + args[1:]
            lin.record(polarize(p, k, combo, v) == a * base + b * polarize(p, k, [x2] + args[1:], v), lambda a=args, v=v: {"args": [_lie(x) for x in a], "v": _lie(v)})
            extra = [random_element(alg, rng) for _ in range(d + 1)]
            van.record(polarize(p, d + 1, extra, v) == 0, lambda v=v: {"v": _lie(v)})
            via_full = polarize(p, d, [v] * (d - k) + args, alg.zero())
            if neg != "drop-factorial":
                via_full = Fraction(via_full) / factorial(d - k)
            full.record(via_full == base, lambda a=args, v=v: {"args": [_lie(x) for x in a], "v": _lie(v), "k": k})
            if closed is not None:
                closed.record(trace_word_sum(args, v, d, "symmetrized") == base, lambda a=args, v=v: {"args": [_lie(x) for x in a], "v": _lie(v)})
                literal_total += 1
                if trace_word_sum(args, v, d, "literal") != base:
                    literal_bad += 1
        for e in (sym, lin, van, full) + ((closed,) if closed else ()):
            res.add(fixture, e)
    if literal_total:
        res.notes.append(
            f"trace closed form read literally (d!/(d-k)! tr(X_1...X_k v^(d-k))) disagrees with coefficient extraction "
            f"in {literal_bad} of {literal_total} samples; the symmetrized reading agrees in all of them"
        )


def suite_taylor(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("drop-factorial",))
    n = _trials(config, 100)
    for alg, p in _poly_fixtures(config):
        fixture = p.label
        rng = suite_rng(config.seed, config.suite, fixture)
        e = CheckEntry("taylor", p.degree, fixture)
        for _ in range(n):
            v, x = random_element(alg, rng), random_element(alg, rng)
            res.samples.append([_lie(v), _lie(x)])
            e.record(check_taylor(p, v, x, drop_factorial=neg == "drop-factorial"), lambda v=v, x=x: {"v": _lie(v), "X": _lie(x)})
        res.add(fixture, e)


def _non_invariant(alg: LieAlgebra, d: int) -> InvariantPolynomial:
    exps = tuple(d if i == 0 else 0 for i in range(alg.dim))
    return InvariantPolynomial(alg, d, {exps: 1}, f"{alg.name}:x1^{d}", validate=False)


def suite_lemma(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("non-invariant",))
    n = _trials(config, 100)
    for alg, p in _poly_fixtures(config):
        if neg == "non-invariant":
            p = _non_invariant(alg, max(p.degree, 2))
        fixture = p.label
        rng = suite_rng(config.seed, config.suite, fixture)
        e = CheckEntry("P_d1([X,v];v)=0", 1, fixture)
        for _ in range(n):
            v, x = random_element(alg, rng), random_element(alg, rng)
            res.samples.append([_lie(v), _lie(x)])
            e.record(check_lemma_invariance(p, v, x), lambda v=v, x=x: {"v": _lie(v), "X": _lie(x)})
        res.add(fixture, e)
        if neg == "non-invariant":
            break


def suite_funny(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("drop-sum",))
    n = _trials(config, 100)
    for alg, p in _poly_fixtures(config):
        k_top = p.degree if config.k_max is None else min(p.degree, config.k_max)
        for k in range(2, k_top + 1):
            fixture = p.label
            rng = suite_rng(config.seed, config.suite, f"{fixture}:k={k}")
            e = CheckEntry("commutator-identity", k, fixture)
            for _ in range(n):
                y = random_element(alg, rng)
                xs = [random_element(alg, rng) for _ in range(k - 1)]
                v = random_element(alg, rng)
                res.samples.append([_lie(y)] + [_lie(x) for x in xs] + [_lie(v)])
                e.record(check_funny_identity(p, k, y, xs, v, drop_sum=neg == "drop-sum"), lambda y=y, xs=xs, v=v: {"Y": _lie(y), "X": [_lie(x) for x in xs], "v": _lie(v)})
            res.add(fixture, e)


def suite_factor(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("swap-coefficients",))
    n = _trials(config, 20)
    k_cap = 3 if config.k_max is None else config.k_max
    for alg, p in _poly_fixtures(config):
        d = p.degree
        if d > 3:
            continue
        form = full_polarisation_form(p)
        for lname in ("identity", "ad Y"):
            for k in range(1, min(d, k_cap) + 1):
                fixture = f"{p.label}:L={lname}"
                rng = suite_rng(config.seed, config.suite, f"{fixture}:k={k}")
                e = CheckEntry("factor-lemma", k, fixture)
                if not check_symmetric(form, alg, d, rng):
                    e.record(False, lambda: {"reason": "F is not symmetric"})
                for _ in range(n):
                    if lname == "identity":
                        linear = lambda x: x  # noqa: E731
                        y = None
                    else:
                        y = random_element(alg, rng)
                        linear = lambda x, y=y: bracket(y, x)  # noqa: E731
                    v = random_element(alg, rng)
                    xs = [random_element(alg, rng) for _ in range(k - 1)]
                    res.samples.append([_lie(v)] + [_lie(x) for x in xs] + ([_lie(y)] if y is not None else []))
                    ok = check_factor_lemma(form, linear, d, v, xs, swap_coefficients=neg == "swap-coefficients")
                    e.record(ok, lambda v=v, xs=xs: {"v": _lie(v), "X": [_lie(x) for x in xs]})
                res.add(fixture, e)


def suite_codifferential(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("flip-q2",))
    k_max = config.k_max or 5
    n = _trials(config, 2)
    flip = neg == "flip-q2"
    if not config.model:
        for alg, _ in algebra_fixtures(config):
            for kind, v in v_fixtures(config, alg):
                dgla = ToyHiggsDgla(alg, v)
                fixture = f"{dgla.name}@{kind}"
                rng = suite_rng(config.seed, config.suite, fixture)
                res.add_report(fixture, check_codifferential(dgla, k_max, rng, trials=n, flip_q2=flip))
    if not config.algebra:
        for model in model_fixtures(config):
            rng = suite_rng(config.seed, config.suite, model.name)
            res.add_report(model.name, check_codifferential(model.dgla, min(k_max, 5), rng, trials=n, flip_q2=flip))


def suite_adjoint_morphism(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("flip-sign", "scale-h2"))
    n = _trials(config, 10)
    for alg, polys in algebra_fixtures(config):
        q = quotient_for(alg, polys)
        for kind, v in v_fixtures(config, alg):
            fixture = f"{alg.name}@{kind}"
            rng = suite_rng(config.seed, config.suite, fixture)
            h = build_adjoint_morphism(q, v, neg)
            k_max = q.max_degree if config.k_max is None else config.k_max
            res.add_report(fixture, check_linfty_morphism(h, k_max, n, rng))
            h0, ker, _ = centraliser_check(alg, v)
            cent = CheckEntry("dim H^0 = dim ker ad v", 0, fixture)
            cent.record(h0 == ker, lambda: {"H0": h0, "ker": ker})
            res.add(fixture, cent)


def _rings(config: SuiteConfig, defaults) -> list[ArtinRing]:
    if config.ring:
        return [parse_ring(config.ring)]
    return [ArtinRing(r, m, names=("t",) if r == 1 else ("t", "s")) for r, m in defaults]


def _pushforward_no_factorial(h, x):
    total = h.target.zero()
    for k in range(1, h.K + 1):
        total = total + h.h(k, [x] * k)
    return total


def suite_def_chi(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("drop-factorial",))
    n = _trials(config, 50)
    for alg, polys in algebra_fixtures(config):
        q = quotient_for(alg, polys)
        for kind, v in v_fixtures(config, alg):
            for ring in _rings(config, ((1, 2), (1, 4), (2, 3))):
                fixture = f"{alg.name}@{kind}"
                rng = suite_rng(config.seed, config.suite, f"{fixture}:{ring!r}")
                if neg == "drop-factorial":
                    res.add_report(fixture, _def_chi_sabotaged(q, v, ring, n, rng))
                else:
                    res.add_report(fixture, verify_def_equals_chi(q, v, ring, n, rng))


def _def_chi_sabotaged(q, v, ring, n, rng) -> CheckReport:
    from .adjoint import chi_difference_oracle

    h = build_adjoint_morphism(q, v)
    rep = CheckReport("def-chi-sabotaged")
    e = CheckEntry("Def(h)=chi", 1, repr(ring))
    for _ in range(n):
        b = random_ideal_element(q.algebra, ring, rng)
        push = _pushforward_no_factorial(h, h.source.lift(b=b))
        expected = chi_difference_oracle(q, v, b)
        e.record(all(push.coeffs.get(i, 0) == x for i, x in enumerate(expected)), lambda b=b: {"b": _lie(b)})
    rep.entries.append(e)
    return rep


def suite_hull(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("zero-solver",))
    n = _trials(config, 50)
    names = [config.algebra] if config.algebra else ["sl2", "sl3"]
    kinds = [config.v] if config.v else ["regular-ss", "regular-nilpotent"]
    ring = parse_ring(config.ring) if config.ring else ArtinRing(1, 3, names=("t",))
    for name in names:
        try:
            alg = load_algebra(name)
        except ModelError as exc:
            raise UsageError(str(exc)) from None
        for kind in kinds:
            try:
                v = v_fixture(alg, kind)
            except LieAlgebraError as exc:
                raise UsageError(str(exc)) from None
            fixture = f"{alg.name}@{kind}"
            rng = suite_rng(config.seed, config.suite, fixture)
            hull = compute_hull(v)
            res.notes.append(f"{fixture}: K = span {hull.complement_basis} (coordinates in the {alg.name} basis)")
            res.add_report(fixture, verify_hull_surjectivity(hull, ring, n, rng, solver="zero" if neg == "zero-solver" else "order-by-order"))


def suite_hitchin_morphism(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("flip-koszul", "flip-wedge"))
    n = _trials(config, 3)
    k_max = config.k_max or 3
    flip = {"flip-koszul": "beta", "flip-wedge": "wedge"}.get(neg or "", False)
    for model in model_fixtures(config):
        rng = suite_rng(config.seed, config.suite, model.name)
        h = build_hitchin_morphism(model.dgla, model.quotient, flip)
        problems = model.dgla.check_model()
        e = CheckEntry("model-axioms", 0, model.name)
        e.record(not problems, lambda: {"problems": problems})
        res.add(model.name, e)
        res.add_report(model.name, check_linfty_morphism(h, k_max, n, rng, profile_filter=case_tag))


def suite_def_hitchin(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("drop-factorial",))
    n = _trials(config, 10)
    for model in model_fixtures(config):
        for ring in _rings(config, ((1, 3), (2, 3))):
            rng = suite_rng(config.seed, config.suite, f"{model.name}:{ring!r}")
            if neg == "drop-factorial":
                res.add_report(model.name, _def_hitchin_sabotaged(model, ring, n, rng))
            else:
                res.add_report(model.name, verify_def_equals_hitchin(model.dgla, model.quotient, ring, n, rng))


def _def_hitchin_sabotaged(model: HitchinModel, ring, n, rng) -> CheckReport:
    from .hitchin import _s10_parts, hitchin_oracle, stratified_mc_sample

    h = build_hitchin_morphism(model.dgla, model.quotient)
    rep = CheckReport("def-hitchin-sabotaged")
    e = CheckEntry("Def(h)=H", 1, repr(ring))
    for _ in range(n):
        x = stratified_mc_sample(model.dgla, ring, rng)
        push = _pushforward_no_factorial(h, x)
        expected = hitchin_oracle(model.dgla, model.quotient, h.target, _s10_parts(model.dgla, x, ring), ring)
        e.record(push == expected, lambda x=x: {"x": x.serialize()})
    rep.entries.append(e)
    return rep


def suite_obstruction(config: SuiteConfig, res: SuiteResult):
    neg = _negctl(config, ("generic-cocycle",))
    n = _trials(config, 20)
    for model in model_fixtures(config):
        rng = suite_rng(config.seed, config.suite, model.name)
        rep = verify_obstruction(model.dgla, model.quotient, n, rng, generic=neg == "generic-cocycle")
        for e in rep.entries:
            if e.identity == "non-exact-obstruction-classes":
                res.notes.append(f"{model.name}: {e.trials} of {n} lifts had obstruction classes that are not exact in the source")
            else:
                res.add(model.name, e)


@dataclass(frozen=True)
class Suite:
    name: str
    anchor: str
    runner: Callable
    negctls: tuple


SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("artin", "Artin", suite_artin, ("no-truncation",)),
        Suite("lie", "Lie", suite_lie, ("break-jacobi",)),
        Suite("polarisation", "Polarisation", suite_polarisation, ("drop-factorial",)),
        Suite("taylor", "Eq.taylor", suite_taylor, ("drop-factorial",)),
        Suite("lemma", "Lemma.lemma", suite_lemma, ("non-invariant",)),
        Suite("funny", "Cor.funny", suite_funny, ("drop-sum",)),
        Suite("factor", "Lemma.factor", suite_factor, ("swap-coefficients",)),
        Suite("codifferential", "Codifferential", suite_codifferential, ("flip-q2",)),
        Suite("adjoint-morphism", "Prop.Lie1", suite_adjoint_morphism, ("flip-sign", "scale-h2")),
        Suite("def-chi", "Prop.Lie2", suite_def_chi, ("drop-factorial",)),
        Suite("hull", "Prop.hull", suite_hull, ("zero-solver",)),
        Suite("hitchin-morphism", "Prop.hitchin1", suite_hitchin_morphism, ("flip-koszul", "flip-wedge")),
        Suite("def-hitchin", "Prop.hitchin2", suite_def_hitchin, ("drop-factorial",)),
        Suite("obstruction", "Cor.obstruct", suite_obstruction, ("generic-cocycle",)),
    )
}

ORDER = tuple(SUITES)


def _normalize_anchor(s: str) -> str:
    return s.replace(" ", "").replace("`", "").lower()


def resolve_only(only: str) -> list[str]:
    key = _normalize_anchor(only)
    hits = [s.name for s in SUITES.values() if _normalize_anchor(s.anchor) == key or s.name == key]
    if not hits:
        raise UsageError(f"--only {only!r} matches no suite or anchor")
    return hits


def run(config: SuiteConfig) -> SuiteResult:
    import time

    suite = SUITES.get(config.suite)
    if suite is None:
        raise UsageError(f"unknown suite {config.suite!r} (choose from {', '.join(ORDER)})")
    res = SuiteResult(suite.name, suite.anchor, config.negctl)
    start = time.perf_counter()
    suite.runner(config, res)
    res.wall_time = time.perf_counter() - start
    return res


def build_report(results: list[SuiteResult], seed: int, include_samples: bool = False) -> dict:
    """JSON-ready report; wall times are left out so reruns are byte-identical."""
    return {
        "schema": SCHEMA,
        "version": __version__,
        "seed": seed,
        "prng": PRNG,
        "verdict": "pass" if all(r.passed for r in results) else "fail",
        "suites": [r.as_dict(include_samples) for r in results],
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
