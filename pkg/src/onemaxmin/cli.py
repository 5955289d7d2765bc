"""Command-line interface: ``onemaxmin <subcommand> ...``.

Exit codes: 0 success, 1 verification or fit failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import Optional, Sequence

from . import oracles
from .benchmark import ENUMERATION_LIMIT, ProblemInstance, evaluate, pareto_front
from .bitcore import BitString
from .reformulate import (
    EXTERIOR, NONPARAMETER, PenaltySpec, ScalarizationSpec, SubproblemSpec, constrained_optima,
    exterior_optima, penalty_thresholds, scalarization_optima, subproblem_optima,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _num(v: Fraction):
    """JSON-friendly rendering: ints stay ints, other rationals become 'p/q' strings."""
    return int(v) if v.denominator == 1 else str(v)


def _instance(args) -> ProblemInstance:
    try:
        return ProblemInstance(args.n, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# -- subcommands ----------------------------------------------------------------

def cmd_evaluate(args) -> int:
    inst = _instance(args)
    try:
        x = BitString.from_str(args.x)
        v = evaluate(inst, x)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"({v[0]}, {v[1]})")
    return EXIT_OK


def cmd_front(args) -> int:
    for f1, f2 in pareto_front(_instance(args)):
        print(f"({f1}, {f2})")
    return EXIT_OK


def _describe(desc) -> dict:
    return {
        "label": desc.label,
        "infeasible": desc.infeasible,
        "levels": sorted(desc.levels),
        "values": [list(v) for v in sorted(desc.values())],
    }


def cmd_oracle(args) -> int:
    inst = _instance(args)
    try:
        if args.kind == "scalarization":
            if args.w is None:
                raise UsageError("scalarization needs --w")
            desc = scalarization_optima(ScalarizationSpec(inst, args.w))
            out = {"problem": "scalarization", "w": _num(args.w)}
            brute, brute_args = oracles.scalarization, (inst, args.w)
        elif args.kind == "penalty":
            if args.eps is None:
                raise UsageError("penalty needs --eps")
            spec = PenaltySpec(inst, args.eps, args.r, args.mode)
            desc = exterior_optima(spec)
            out = {"problem": f"{args.mode}-penalty", "eps": _num(spec.eps), "r": _num(spec.r)}
            if inst.n - inst.k < spec.eps < inst.n:
                th = penalty_thresholds(inst, spec.eps)
                out.update(r1=_num(th.r1), r2=_num(th.r2))
            if args.mode == NONPARAMETER:
                brute, brute_args = oracles.nonparameter_penalty, (inst, spec.eps)
            else:
                brute, brute_args = oracles.exterior_penalty, (inst, spec.eps, spec.r)
        elif args.kind == "subproblem":
            if args.i is None:
                raise UsageError("subproblem needs --i")
            desc = subproblem_optima(SubproblemSpec(inst, args.i))
            out = {"problem": "tchebycheff", "i": args.i, "H": inst.k, "z": [inst.n, inst.n]}
            brute, brute_args = oracles.tchebycheff, (inst, args.i)
        else:
            if args.eps is None:
                raise UsageError("constrained needs --eps")
            desc = constrained_optima(inst, args.eps)
            out = {"problem": "constrained", "eps": _num(args.eps)}
            brute, brute_args = oracles.constrained, (inst, args.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = {"n": inst.n, "k": inst.k, **out, "optimal_set": _describe(desc)}
    status = EXIT_OK
    if args.check:
        if inst.n > ENUMERATION_LIMIT:
            raise UsageError(f"--check enumerates 2**n strings; needs n <= {ENUMERATION_LIMIT}")
        found = brute(*brute_args).values
        agree = set(found) == desc.values()
        out["brute_force"] = {"values": [list(v) for v in sorted(found)], "agrees": agree}
        status = EXIT_OK if agree else EXIT_FAIL
    _emit(out)
    return status


def cmd_run(args) -> int:
    from .lab.config import AlgorithmSpec, ConfigError
    from .lab.runner import run_trial

    inst = _instance(args)
    try:
        alg = AlgorithmSpec(args.algo, N=args.N, mu=args.mu, selection=args.selection)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    if args.budget is not None and args.budget < 1:
        raise UsageError("--budget must be at least 1")
    rec = run_trial(alg, inst, 0, args.seed, multiplier=args.multiplier,
                    timing=not args.no_timing, budget=args.budget)
    _emit(asdict(rec))
    return EXIT_OK


def cmd_suite(args) -> int:
    from .lab.config import ConfigError, load_config
    from .lab.runner import run_suite
    from .records import write_records

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be at least 1")
    records = run_suite(cfg, workers=args.workers)
    try:
        path = write_records(records, args.out, args.format)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    censored = sum(r.censored for r in records)
    print(f"wrote {len(records)} records ({censored} censored) to {path}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .lab.verify import verify

    try:
        report = verify(args.scope, args.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _emit(report.to_dict())
    else:
        for line in report.lines():
            print(line)
        print("verification " + ("passed" if report.passed else "FAILED"))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_fit(args) -> int:
    from .lab.scaling import fit_groups, fit_scaling
    from .records import read_records

    try:
        records = read_records(args.input)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read records from {args.input}: {exc}") from None
    if args.algorithm:
        records = [r for r in records if r.algorithm == args.algorithm]
    try:
        if args.by_ratio:
            fits = fit_groups(records, args.law, args.threshold, args.metric)
        else:
            fits = [fit_scaling(records, args.law, args.threshold, args.metric, args.population)]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not fits:
        raise UsageError("no group spans two or more values of n")
    payload = [f.to_dict() for f in fits]
    _emit(payload[0] if len(payload) == 1 and not args.by_ratio else payload)
    return EXIT_OK if all(f.passed for f in fits) else EXIT_FAIL


# -- parser ---------------------------------------------------------------------

def _add_instance(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="string length")
    p.add_argument("--k", type=int, required=True, help="length of the conflicting suffix")


def build_parser() -> argparse.ArgumentParser:
    from .lab.config import ALGORITHMS
    from .lab.scaling import DEFAULT_THRESHOLD, LAWS, METRICS
    from .lab.verify import N_MAX_LIMIT, SCOPES
    from .moea import SELECTIONS

    parser = argparse.ArgumentParser(prog="onemaxmin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="objective values of one bitstring")
    _add_instance(p)
    p.add_argument("--x", required=True, help="bitstring such as 110100")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("front", help="list the Pareto front")
    _add_instance(p)
    p.set_defaults(func=cmd_front)

    p = sub.add_parser("oracle", help="closed-form optimal set of a single-objective reformulation")
    p.add_argument("kind", choices=("scalarization", "penalty", "subproblem", "constrained"))
    _add_instance(p)
    p.add_argument("--w", type=_fraction, help="weight on f1 (scalarization)")
    p.add_argument("--eps", type=_fraction, help="lower bound on f2 (penalty, constrained)")
    p.add_argument("--r", type=_fraction, default=Fraction(1), help="penalty coefficient")
    p.add_argument("--mode", choices=(EXTERIOR, NONPARAMETER), default=EXTERIOR)
    p.add_argument("--i", type=int, help="subproblem index in [0, k]")
    p.add_argument("--check", action="store_true", help="also enumerate and compare (small n)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("run", help="one seeded trial, printed as a JSON record")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    _add_instance(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, help="evaluation budget (default: law-based)")
    p.add_argument("--multiplier", type=float, default=200, help="budget law multiplier")
    p.add_argument("--N", type=int, help="NSGA-II population size")
    p.add_argument("--mu", type=int, help="SMS-EMOA population size")
    p.add_argument("--selection", choices=SELECTIONS, default="random")
    p.add_argument("--no-timing", action="store_true", help="leave wall_ms empty")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("suite", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output path (.csv or .json)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("verify", help="exhaustive cross-checks of the closed forms")
    p.add_argument("--scope", choices=SCOPES, default="all")
    p.add_argument("--n-max", type=int, default=10, help=f"largest n (at most {N_MAX_LIMIT})")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", help="check a runtime scaling law against records")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--law", choices=sorted(LAWS), default="k-n-log-n")
    p.add_argument("--metric", choices=METRICS, default="evals_full_coverage")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--algorithm", help="restrict to one algorithm")
    p.add_argument("--population", type=int, help="population size for pop-n-log-n")
    p.add_argument("--by-ratio", action="store_true",
                   help="one fit per (algorithm, k/n) group instead of a single fit")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"onemaxmin {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
