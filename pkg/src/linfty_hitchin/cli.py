"""``linfty-hitchin``: run the verification suites from the command line.

Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .adjoint import v_fixture
from .hitchin import ModelError, load_algebra
from .kuranishi import compute_hull, in_complement_tensor, normalize
from .lie import LieAlgebraError, exp_ad, random_ideal_element
from .scalars import ArtinRing, format_artin, format_rational
from .suites import ORDER, SuiteConfig, SuiteResult, UsageError, build_report, dump_report, parse_ring, resolve_only, run, suite_rng


def _add_common(p: argparse.ArgumentParser, model: bool = True):
    p.add_argument("--algebra", help="sl2|sl3|gl2|gl3|spec:<file>")
    if model:
        p.add_argument("--model", help="model file, or the name of a bundled model")
    p.add_argument("--v", help="regular-ss|regular-nilpotent|zero|coeffs:<c1,c2,...>")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int)
    p.add_argument("--ring", help="coefficient ring 'r,m' meaning Q[t_1..t_r]/(deg >= m)")
    p.add_argument("--json", metavar="PATH", help="also write the JSON report to PATH ('-' for stdout)")
    p.add_argument("--record-samples", action="store_true", help="include every sampled input in the JSON report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linfty-hitchin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run one suite")
    verify.add_argument("suite", choices=ORDER)
    _add_common(verify)
    verify.add_argument("--negctl", help="sabotage switch that must make the suite fail")

    run_all = sub.add_parser("run-all", help="run every suite with the default fixtures")
    run_all.add_argument("--seed", type=int, default=0)
    run_all.add_argument("--only", help="suite name or anchor, e.g. 'Prop.Lie2'")
    run_all.add_argument("--json", metavar="PATH")
    run_all.add_argument("--record-samples", action="store_true")

    hull = sub.add_parser("hull", help="complement of Im(ad v) and gauge normal forms")
    hull.add_argument("--algebra", default="sl2")
    hull.add_argument("--v", default="regular-ss")
    hull.add_argument("--ring", default="1,3")
    hull.add_argument("--trials", type=int, default=5)
    hull.add_argument("--seed", type=int, default=0)
    hull.add_argument("--json", metavar="PATH")

    hitchin = sub.add_parser("hitchin", help="Dolbeault-model checks")
    hsub = hitchin.add_subparsers(dest="hitchin_command", required=True)
    hverify = hsub.add_parser("verify", help="morphism, deformation and obstruction suites on one model")
    hverify.add_argument("--model", required=True)
    hverify.add_argument("--kmax", type=int)
    hverify.add_argument("--trials", type=int)
    hverify.add_argument("--seed", type=int, default=0)
    hverify.add_argument("--json", metavar="PATH")
    hverify.add_argument("--negctl", help="passed to the hitchin-morphism suite")
    return parser


def _print_result(res: SuiteResult, out) -> None:
    verdict = "PASS" if res.passed else "FAIL"
    neg = f" negctl={res.negctl}" if res.negctl else ""
    print(f"{verdict} {res.suite} [{res.anchor}]{neg} trials={res.trials} failures={res.failures} ({res.wall_time:.2f}s)", file=out)
    for note in res.notes:
        print(f"  note: {note}", file=out)
    first = res.first_failure()
    if first is not None:
        fixture, entry = first
        print(f"  first counterexample ({fixture}, {entry.identity}, k={entry.k}, profile={entry.profile}):", file=out)
        print("  " + json.dumps(entry.first_counterexample, sort_keys=True, default=str), file=out)
    elif res.trials == 0:
        print("  no trials were run", file=out)


def _write_json(path: str | None, payload: str) -> None:
    if not path:
        return
    if path == "-":
        sys.stdout.write(payload)
        return
    try:
        with open(path, "w") as fh:
            fh.write(payload)
    except OSError as exc:
        raise UsageError(f"--json {path}: {exc.strerror}") from None


def _finish(results: list[SuiteResult], seed: int, json_path: str | None, record: bool, summary: bool = False) -> int:
    out = sys.stderr if json_path == "-" else sys.stdout
    if summary:
        print("", file=out)
        print(f"{'anchor':<16} {'suite':<18} {'verdict':<8} {'trials':>8} {'failures':>9} {'time':>8}", file=out)
        for r in results:
            print(f"{r.anchor:<16} {r.suite:<18} {'pass' if r.passed else 'fail':<8} {r.trials:>8} {r.failures:>9} {r.wall_time:>7.1f}s", file=out)
    _write_json(json_path, dump_report(build_report(results, seed, record)))
    return 0 if all(r.passed for r in results) else 1


def cmd_verify(args) -> int:
    config = SuiteConfig(
        suite=args.suite,
        seed=args.seed,
        algebra=args.algebra,
        model=args.model,
        v=args.v,
        trials=args.trials,
        k_max=args.kmax,
        ring=args.ring,
        negctl=args.negctl,
    )
    res = run(config)
    _print_result(res, sys.stderr if args.json == "-" else sys.stdout)
    return _finish([res], args.seed, args.json, args.record_samples)


def run_all(seed: int = 0, only: str | None = None, out=None) -> list[SuiteResult]:
    names = resolve_only(only) if only else list(ORDER)
    results = []
    for name in names:
        res = run(SuiteConfig(suite=name, seed=seed))
        if out is not None:
            _print_result(res, out)
        results.append(res)
    return results


def cmd_run_all(args) -> int:
    out = sys.stderr if args.json == "-" else sys.stdout
    results = run_all(args.seed, args.only, out)
    return _finish(results, args.seed, args.json, args.record_samples, summary=True)


def cmd_hull(args) -> int:
    try:
        alg = load_algebra(args.algebra)
        v = v_fixture(alg, args.v)
    except (ModelError, LieAlgebraError) as exc:
        raise UsageError(str(exc)) from None
    ring: ArtinRing = parse_ring(args.ring)
    hull = compute_hull(v)
    rng = suite_rng(args.seed, "hull", f"{alg.name}@{args.v}")
    trials = []
    ok_all = True
    for _ in range(args.trials):
        a = random_ideal_element(alg, ring, rng)
        lam, b = normalize(hull, a)
        ok = in_complement_tensor(hull, b) and b == exp_ad(lam, v.over(ring) + a) - v.over(ring)
        ok_all &= ok
        trials.append(
            {
                "a": [format_artin(c) for c in a.coeffs],
                "lambda": [format_artin(c) for c in lam.coeffs],
                "normal_form": [format_artin(c) for c in b.coeffs],
                "in_K": ok,
            }
        )
    payload = {
        "schema": "linfty-hitchin-hull/1",
        "version": __version__,
        "algebra": alg.name,
        "basis": list(alg.basis_labels),
        "v": [format_rational(c) for c in v.coeffs],
        "ring": repr(ring),
        "seed": args.seed,
        "image_basis": [[format_rational(c) for c in row] for row in hull.image_basis],
        "complement_basis": [[format_rational(c) for c in row] for row in hull.complement_basis],
        "trials": trials,
        "verdict": "pass" if ok_all else "fail",
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.json and args.json != "-":
        _write_json(args.json, text)
        print(f"{'PASS' if ok_all else 'FAIL'} hull {alg.name}@{args.v}: dim K = {len(hull.complement_basis)}, {len(trials)} normal forms")
    else:
        sys.stdout.write(text)
    return 0 if ok_all else 1


def cmd_hitchin_verify(args) -> int:
    out = sys.stderr if args.json == "-" else sys.stdout
    results = []
    for name in ("hitchin-morphism", "def-hitchin", "obstruction"):
        config = SuiteConfig(
            suite=name,
            seed=args.seed,
            model=args.model,
            trials=args.trials,
            k_max=args.kmax,
            negctl=args.negctl if name == "hitchin-morphism" else None,
        )
        res = run(config)
        _print_result(res, out)
        results.append(res)
    return _finish(results, args.seed, args.json, False)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "run-all":
            return cmd_run_all(args)
        if args.command == "hull":
            return cmd_hull(args)
        return cmd_hitchin_verify(args)
    except UsageError as exc:
        print(f"linfty-hitchin: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
