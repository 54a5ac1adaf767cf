"""Command-line front end. Every command prints one JSON report on stdout.

Exit codes: 0 success, 1 verification failure, 2 usage/parse/load error,
3 resource guardrail.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction

from . import __version__
from . import bounds as bd
from . import verify as vf
from .balls import BallSpec, enum_ds_ball, enum_sub_ball, xi_0s
from .cells import brute_intersection, ds12_intersection_via_cells, histogram_violations, pair_distance_histogram
from .errors import GuardrailError, ReconError
from .recon import RNG_ALGORITHM, load_code, min_hamming_distance, read_coverage, simulate
from .words import Word, hamming

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _json_default(o):
    if isinstance(o, Fraction):
        return int(o) if o.denominator == 1 else str(o)
    if isinstance(o, Word):
        return str(o)
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"not serializable: {type(o).__name__}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _n_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError("range end precedes its start")
    return a, b


def _word(args, text: str) -> Word:
    return Word.parse(text, args.q)


# --- commands -----------------------------------------------------------------


def cmd_ball(args) -> tuple[dict, int]:
    x = _word(args, args.word)
    spec = BallSpec(args.deletions, args.substitutions)
    ball = enum_ds_ball(x, spec, force=args.force)
    out = {"word": str(x), "n": len(x), "size": len(ball)}
    if not args.count_only:
        out["members"] = ball.strings()
    status = EXIT_OK
    if spec.t == 0:
        want = xi_0s(x.q, len(x), spec.s)
        out["closed_form_size"] = want
        out["closed_form_agrees"] = want == len(ball)
        if want != len(ball):
            status = EXIT_FAIL
    return out, status


def cmd_intersect(args) -> tuple[dict, int]:
    x, y = _word(args, args.x), _word(args, args.y)
    if len(x) != len(y):
        raise UsageError("x and y must have equal length")
    spec = BallSpec(1, 2)
    out = {"x": str(x), "y": str(y), "n": len(x), "hamming": hamming(x, y), "method": args.method}
    timings = {}
    sets = {}
    if args.method in ("brute", "both"):
        t0 = time.perf_counter()
        sets["brute"] = brute_intersection(x, y, spec, force=args.force)
        timings["brute"] = time.perf_counter() - t0
    if args.method in ("cells", "both"):
        t0 = time.perf_counter()
        sets["cells"] = ds12_intersection_via_cells(x, y)
        timings["cells"] = time.perf_counter() - t0
    result = next(iter(sets.values()))
    out["size"] = len(result)
    status = EXIT_OK
    if args.method == "both":
        out["sizes"] = {k: len(v) for k, v in sets.items()}
        out["agree"] = sets["brute"] == sets["cells"]
        if not out["agree"]:
            status = EXIT_FAIL
    if args.members:
        out["members"] = result.strings()
    d = out["hamming"]
    if d == 2:
        out["d2_form"] = bd.classify_d2(x, y).as_dict()
    if d >= 2:
        h = pair_distance_histogram(x, y)
        out["histogram"] = {
            "run_pairs": h.total,
            "columns": {str(dp) if dp < 5 else ">=5": h.column(dp) for dp in range(6)},
            "table_violations": histogram_violations(h),
        }
    args._timings.update({f"{k}_seconds": round(v, 6) for k, v in timings.items()})
    return out, status


def cmd_coverage(args) -> tuple[dict, int]:
    code = load_code(args.code_file, q=args.q, n=args.n)
    cov = read_coverage(code, exhaustive=args.exhaustive, sample_budget=args.sample_budget, rng_seed=args.seed)
    out = {
        "codewords": len(code),
        "q": code.q,
        "n": code.n,
        "q_inferred": code.q_inferred,
        "min_distance": min_hamming_distance(code),
        "nu": cov.nu,
        "witness": [str(w) for w in cov.pair],
        "threshold": cov.threshold,
        "exact": cov.exact,
        "pairs_checked": cov.pairs_checked,
    }
    if not cov.exact:
        out["label"] = "lower-bound"
    return out, EXIT_OK


def cmd_simulate(args) -> tuple[dict, int]:
    code = load_code(args.code_file, q=args.q, n=args.n)
    cov = read_coverage(code)
    res = simulate(
        code,
        args.reads,
        args.trials,
        args.seed,
        args.mode,
        with_replacement=args.with_replacement,
        feasible_only=args.feasible_only,
    )
    guaranteed = args.reads > cov.nu and not args.with_replacement
    attempted = res.trials - res.capacity_errors
    out = {
        "codewords": len(code),
        "q": code.q,
        "n": code.n,
        "nu": cov.nu,
        "reads": args.reads,
        "trials": res.trials,
        "mode": res.mode,
        "with_replacement": args.with_replacement,
        "feasible_only": args.feasible_only,
        "source_pool": res.sources,
        "unique_correct": res.unique_correct,
        "ambiguous": res.ambiguous,
        "wrong": res.wrong,
        "capacity_errors": res.capacity_errors,
        "guarantee_applies": guaranteed,
    }
    if res.failures:
        out["failures"] = res.failures
    status = EXIT_OK
    if res.wrong or (guaranteed and res.unique_correct != attempted):
        status = EXIT_FAIL
    return out, status


def cmd_verify(args) -> tuple[dict, int]:
    suite = args.suite
    needs_seed = vf.RANDOMIZED.get(suite)
    if needs_seed == "always" and args.seed is None:
        raise UsageError(f"suite {suite} samples at random; pass --seed")
    if needs_seed == "random" and args.seed is None and not args.exhaustive:
        raise UsageError(f"suite {suite} needs --exhaustive, --seed, or both")
    qs = tuple(args.q_list) if args.q_list else None
    kw = {}
    if suite == "xi":
        kw = {"qs": qs or (2, 3, 4), "n_max": args.n_max or 8}
    elif suite == "lemma2":
        kw = {"exhaustive_n_max": args.n_max or 6, "seed": args.seed}
        if qs:
            kw["random_q"] = qs
        if args.n:
            kw["random_n"] = args.n
        if args.samples:
            kw["per_d"] = args.samples
    elif suite == "cells":
        qs = qs or (2, 3)
        kw = {"qs": qs, "seed": args.seed, "exhaustive": args.exhaustive, "union_q": qs[0]}
        if args.n:
            kw["obs_n_max"] = args.n
            kw["union_n_max"] = args.n
            kw["random_cases"] = tuple((q, args.n) for q in qs)
        if args.samples:
            kw["per_case"] = args.samples
    elif suite == "lemma3-tables":
        kw = {"qs": qs or (2, 3), "n": args.n or 12, "seed": args.seed}
        if args.samples:
            kw["per_d"] = args.samples
            kw["two_sided_extra"] = args.samples
    elif suite == "claims":
        lo, hi = 6, args.n_max or 10
        kw = {"qs": qs or (2, 3), "ns": range(lo, hi + 1), "seed": args.seed}
        if args.samples:
            kw["per_case"] = args.samples
    elif suite == "bound":
        q = qs[0] if qs else 2
        kw = {"q": q, "n": args.n or 9}
    res = vf.run_suite(suite, **kw)
    return res.as_dict(), EXIT_OK if res.passed else EXIT_FAIL


def cmd_extremal(args) -> tuple[dict, int]:
    lo, hi = args.n_range
    ns = [n for n in range(max(lo, 8), hi + 1) if n % 2 == 0]
    if not ns:
        raise UsageError("the range holds no even n >= 8")
    if args.fit and len(ns) < 3:
        raise UsageError("a quadratic fit needs at least three even n in the range")
    points = bd.extremal_sweep(args.q, ns, force=args.force)
    out = {"q": args.q, "sizes": [{"n": n, "size": v} for n, v in points]}
    a_thm, b_thm = bd.bound_coefficients(args.q)
    out["theorem_coefficients"] = {"a": a_thm, "b": b_thm}
    fit = None
    if args.fit:
        fit = bd.fit_quadratic(points)
        out["fit"] = {
            "a": fit.a,
            "b": fit.b,
            "c": fit.c,
            "consistent": fit.consistent,
            "window": [ns[0], ns[-1]],
            "quadratic_onset_n": bd.quadratic_onset(points),
            "a_matches_theorem": fit.a == a_thm,
            "b_matches_theorem": fit.b == b_thm,
        }
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "size"] + (["fit"] if fit else []))
            for n, v in points:
                w.writerow([n, v] + ([_json_default(fit(n))] if fit else []))
        out["csv"] = args.csv
    return out, EXIT_OK


COMMANDS = {
    "ball": cmd_ball,
    "intersect": cmd_intersect,
    "coverage": cmd_coverage,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "extremal": cmd_extremal,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON report")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identical output)")
    common.add_argument("--threads", type=int, default=None, help="cap internal parallelism")
    common.add_argument("--force", action="store_true", help="override enumeration guardrails")

    p = argparse.ArgumentParser(prog="delsubrecon", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("ball", parents=[common], help="enumerate an error ball")
    b.add_argument("--word", required=True)
    b.add_argument("--q", type=int, default=2)
    b.add_argument("--del", dest="deletions", type=int, default=1)
    b.add_argument("--sub", dest="substitutions", type=int, default=2)
    b.add_argument("--count-only", action="store_true")

    i = sub.add_parser("intersect", parents=[common], help="intersect two single-deletion two-substitution balls")
    i.add_argument("--x", required=True)
    i.add_argument("--y", required=True)
    i.add_argument("--q", type=int, default=2)
    i.add_argument("--method", choices=("brute", "cells", "both"), default="both")
    i.add_argument("--members", action="store_true")

    c = sub.add_parser("coverage", parents=[common], help="read coverage of a code file")
    c.add_argument("code_file")
    c.add_argument("--q", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--exhaustive", action="store_true")
    c.add_argument("--sample-budget", type=int)
    c.add_argument("--seed", type=int)

    s = sub.add_parser("simulate", parents=[common], help="sample reads and decode")
    s.add_argument("code_file")
    s.add_argument("--q", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--reads", "-N", type=int, required=True)
    s.add_argument("--trials", "-T", type=int, default=1000)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--mode", choices=("uniform-ball", "process"), default="uniform-ball")
    s.add_argument("--with-replacement", action="store_true")
    s.add_argument("--feasible-only", action="store_true", help="draw sources only among codewords with enough reads")

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("--suite", required=True, choices=vf.SUITES)
    v.add_argument("--q", dest="q_list", type=_int_list)
    v.add_argument("--n", type=int)
    v.add_argument("--n-max", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--exhaustive", action="store_true")

    e = sub.add_parser("extremal", parents=[common], help="sizes along the extremal family")
    e.add_argument("--q", type=int, default=2)
    e.add_argument("--n-range", type=_n_range, required=True)
    e.add_argument("--fit", action="store_true")
    e.add_argument("--csv")
    return p


def _params(args) -> dict:
    skip = {"command", "pretty", "timing", "threads", "_timings"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._timings = {}
    if args.threads:
        import numba

        numba.set_num_threads(max(1, min(args.threads, numba.config.NUMBA_NUM_THREADS)))
    t0 = time.perf_counter()
    try:
        results, status = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GuardrailError as e:
        print(f"guardrail: {e}", file=sys.stderr)
        return EXIT_GUARD
    except ReconError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "argv": argv,
        "parameters": _params(args),
        "results": results,
        "status": "ok" if status == EXIT_OK else "fail",
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "force": bool(args.force),
    }
    if report["seed"] is not None:
        report["rng"] = RNG_ALGORITHM
    if args.timing:
        report["timing"] = {"total_seconds": round(time.perf_counter() - t0, 6), **args._timings}
    text = json.dumps(report, sort_keys=True, default=_json_default, indent=2 if args.pretty else None)
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
