"""Batch experiment runner: ``thorp <subcommand> [options]``.

Exit status is 0 on success, 1 when an invariant check fails during the run
and 2 for invalid arguments (including capacity limits).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from math import factorial

import numpy as np

from . import CONVENTIONS, __version__
from .analysis import lemmas as lemma_suites
from .analysis.distribution import MAX_GROUP_D
from .analysis.mixing import contraction_experiment, entropy_decay, mixing_profile
from .analysis.pairs import (
    loglog_slope,
    pair_chain_build,
    pair_distance_curve,
    row_sum_error,
    second_eigenvalue_modulus,
    stationarity_error,
)
from .core import DeckParams, Permutation, TabularOracle
from .coupling import FlipSchedule, coupled_run, exhaustive_sweep
from .errors import CapacityError, DomainError

INVARIANT_TOL = 1e-12
MAX_COUPLE_D = 10
MAX_SWEEP_D = 3


# -- output -----------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}"
                               for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_cell(v) -> str:
    if isinstance(v, (float, np.floating)) and not isinstance(v, bool):
        return "" if not math.isfinite(v) else _fmt_float(float(v))
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    if v is None:
        return ""
    return str(v)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        body = dumps({k: v for k, v in doc.items()})
        return body + "\n"
    lines = []
    for key in ("tool", "version", "command"):
        lines.append(f"# {key}: {doc[key]}")
    lines.append(f"# config: {dumps(doc['config'])}")
    lines.append(f"# conventions: {','.join(doc['conventions'])}")
    lines.append(f"# summary: {dumps(doc['summary'])}")
    if "runtime_s" in doc:
        lines.append(f"# runtime_s: {_fmt_float(doc['runtime_s'])}")
    records = doc["records"]
    if records:
        header = list(records[0])
        lines.append(",".join(header))
        for rec in records:
            lines.append(",".join(_csv_cell(rec[h]) for h in header))
    return "\n".join(lines) + "\n"


# -- subcommands ------------------------------------------------------------


def _require_group_d(d: int) -> None:
    if d > MAX_GROUP_D:
        raise CapacityError(f"exact mode supports d <= {MAX_GROUP_D}, got d={d}",
                            bound=f"n! <= {factorial(1 << MAX_GROUP_D)}")


def cmd_mix(args):
    _require_group_d(args.d)
    prof = mixing_profile(args.d, args.threshold, args.extra_rounds)
    records = [{"round": t, "l1": dist, "tv_halved": 0.5 * dist, "entropy": ent}
               for t, (dist, ent) in enumerate(zip(prof.distances, prof.entropies))]
    increases = _increases(prof.entropies)
    summary = {"mixing_time": prof.mixing_time, "monotone_distance": prof.monotone,
               "entropy_increases": increases}
    return summary, records, increases == 0


def _increases(values) -> int:
    return sum(b > a + INVARIANT_TOL for a, b in zip(values, values[1:]))


def cmd_entropy_decay(args):
    _require_group_d(args.d)
    ents = entropy_decay(args.d, args.rounds)
    records = [{"round": t, "entropy": e} for t, e in enumerate(ents)]
    increases = _increases(ents)
    return {"rounds": args.rounds, "entropy_increases": increases}, records, increases == 0


def cmd_contract(args):
    _require_group_d(args.d)
    rep = contraction_experiment(args.d, args.samples, args.seed)
    records = [{"sample": i, "kind": s.kind, "support": s.support,
                "ent_before": s.ent_before, "ent_after": s.ent_after,
                "ratio": s.ratio} for i, s in enumerate(rep.samples)]
    summary = {"samples": len(rep.samples), "excluded": rep.excluded,
               "max_ratio": rep.max_ratio, "c_hat": rep.c_hat, "strict": rep.strict}
    return summary, records, rep.strict and rep.c_hat > 0


def cmd_pair(args):
    records, times, ok = [], {}, True
    errors = {}
    for d in args.d:
        chain = pair_chain_build(d)
        curve = pair_distance_curve(chain, args.threshold)
        times[str(d)] = len(curve) - 1
        rs, st = row_sum_error(chain), stationarity_error(chain)
        errors[str(d)] = {"row_sum": rs, "stationarity": st,
                          "slem": second_eigenvalue_modulus(chain)}
        ok &= rs <= INVARIANT_TOL and st <= INVARIANT_TOL
        records.extend({"d": d, "round": t, "l1": v} for t, v in enumerate(curve))
    summary = {"mixing_times": times, "checks": errors}
    if len(args.d) >= 2:
        summary["loglog_slope"] = loglog_slope(args.d, [times[str(d)] for d in args.d])
    return summary, records, ok


def cmd_couple(args):
    if args.d > MAX_COUPLE_D:
        raise CapacityError(f"couple supports d <= {MAX_COUPLE_D}, got d={args.d}",
                            bound=f"d <= {MAX_COUPLE_D}")
    params = DeckParams(args.d)
    if args.geometric:
        sched = FlipSchedule.geometric(params.n, args.seed)
    else:
        sched = FlipSchedule(args.T or 1, params.n)
    args.T = sched.T  # record the effective offset
    if args.exhaustive:
        if args.d > MAX_SWEEP_D:
            raise CapacityError(f"exhaustive sweep supports d <= {MAX_SWEEP_D}",
                                bound=f"{1 << ((1 << (MAX_SWEEP_D - 1)) * MAX_SWEEP_D)} tables")
        rep = exhaustive_sweep(args.d, sched.T)
        ranks = sorted(set(rep.law_X) | set(rep.law_X_flip))
        records = [{"rank": r, "count_X": rep.law_X.get(r, 0),
                    "count_X_flip": rep.law_X_flip.get(r, 0)} for r in ranks]
        summary = {"T": sched.T, "tables": rep.tables, "valid_replay": rep.valid_replay,
                   "display_match": rep.display_match, "involution": rep.involution,
                   "same_law": rep.same_law}
        return summary, records, rep.ok
    rng = np.random.default_rng([args.seed, 0])
    Z = TabularOracle(rng.integers(2, size=(params.half, args.d)))
    tr = coupled_run(Permutation.identity(params.n), Z, sched)
    records = [{"card": j, "T_j": sched[j], "partner": tr.partners[j],
                "gamma": list(tr.gamma(j)), "gamma_flip": list(tr.gamma_flip(j))}
               for j in range(params.n)]
    return {"trace": tr.to_dict()}, records, True


def cmd_lemmas(args):
    halved = args.pinsker_convention == "halved"
    suites = [
        lemma_suites.projection_suite(args.trials, args.seed),
        lemma_suites.convexity_suite(args.trials, args.seed),
        lemma_suites.pinsker_suite(args.trials, args.seed, halved=halved),
        lemma_suites.mixture_identity_suite(args.trials, args.seed),
        lemma_suites.chain_rule_suite(args.chain_trials, args.seed),
    ]
    records = [{"suite": s.name, "trials": s.trials, "violations": s.violations,
                "worst_excess": s.worst} for s in suites]
    dent = {str(size): lemma_suites.dent_sweep(args.dent_trials, args.seed, size).min_ratio
            for size in (6, 24, 120)}
    total = sum(s.violations for s in suites)
    summary = {"violations": total, "pinsker_convention": args.pinsker_convention,
               "dent_min_ratio": dent}
    return summary, records, total == 0


COMMANDS = {
    "mix": cmd_mix,
    "entropy-decay": cmd_entropy_decay,
    "contract": cmd_contract,
    "pair": cmd_pair,
    "couple": cmd_couple,
    "lemmas": cmd_lemmas,
}


# -- argument parsing -------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _threshold(text: str) -> float:
    v = float(text)
    if not 0 < v <= 2:
        raise argparse.ArgumentTypeError(f"threshold must lie in (0, 2], got {v}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    common.add_argument("--seed", type=_seed, default=None,
                        help="master seed (default: $THORP_SEED or 0)")
    common.add_argument("--timing", action="store_true",
                        help="embed wall-clock runtime in the document")

    parser = argparse.ArgumentParser(prog="thorp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"thorp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mix", parents=[common], help="exact mixing time from the identity")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--threshold", type=_threshold, default=0.25)
    p.add_argument("--extra-rounds", type=_nonneg_int, default=0)

    p = sub.add_parser("entropy-decay", parents=[common], help="ENT per round")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--rounds", type=_nonneg_int, default=10)

    p = sub.add_parser("contract", parents=[common], help="entropy contraction over d rounds")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--samples", type=_positive_int, default=50)

    p = sub.add_parser("pair", parents=[common], help="two-card chain mixing times")
    p.add_argument("--d", type=_positive_int, nargs="+", default=[2, 3, 4, 5, 6])
    p.add_argument("--threshold", type=_threshold, default=0.25)

    p = sub.add_parser("couple", parents=[common], help="flip coupling trace or sweep")
    p.add_argument("--d", type=_positive_int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--T", type=_positive_int, help="flip offset (default: 1)")
    group.add_argument("--geometric", action="store_true",
                       help="draw T from geometric(1/2) using the seed")
    p.add_argument("--exhaustive", action="store_true",
                   help="enumerate every oracle table (d <= 3)")

    p = sub.add_parser("lemmas", parents=[common], help="randomised inequality suites")
    p.add_argument("--trials", type=_positive_int, default=10_000)
    p.add_argument("--chain-trials", type=_positive_int, default=100)
    p.add_argument("--dent-trials", type=_positive_int, default=1_000)
    p.add_argument("--pinsker-convention", choices=("unhalved", "halved"),
                   default="unhalved")
    return parser


def _config(args) -> dict:
    skip = {"command", "out", "format", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        try:
            args.seed = _seed(os.environ.get("THORP_SEED", "0"))
        except (ValueError, argparse.ArgumentTypeError):
            print("thorp: error: THORP_SEED must be a 64-bit unsigned integer",
                  file=sys.stderr)
            return 2
    start = time.perf_counter()
    try:
        summary, records, ok = COMMANDS[args.command](args)
    except (CapacityError, DomainError) as exc:
        print(f"thorp {args.command}: error: {exc}", file=sys.stderr)
        return 2
    doc = {
        "tool": "thorp",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "conventions": list(CONVENTIONS),
        "ok": ok,
        "summary": summary,
        "records": records,
    }
    if args.timing:
        doc["runtime_s"] = time.perf_counter() - start
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
