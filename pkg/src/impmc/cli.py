"""Command line interface: ``impmc {check,expect,average,graph,oracle}``.

Exit codes: 0 on a completed analysis (whatever the verdict), 2 for
parse/validation/lookup errors, 3 when an enumeration size guard trips.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import gamble
from .dot import graph_to_dot
from .ergodicity import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    LimitResult,
    NotWeaklyErgodic,
    class_average_limit,
    class_lower_average_limit,
    classify,
    limit_lower_average,
    limit_upper_average,
)
from .errors import ImpmcError, SizeLimit
from .model_io import load_model
from .operator import iterate_lower, iterate_upper, lower_expected_average, upper_expected_average
from .oracle import brute_force_lower, brute_force_upper
from .structure import build_upper_graph, decompose

EXIT_OK, EXIT_INVALID, EXIT_SIZE = 0, 2, 3


class UsageError(ImpmcError):
    pass


def fmt(x) -> str:
    x = float(x)
    if x == 0:
        x = 0.0  # no "-0"
    return format(x, ".12g")


def fmt_set(labels) -> str:
    return "{" + ",".join(labels) + "}"


def _resolve_gamble(args, model):
    if args.values is not None:
        try:
            values = [float(v) for v in args.values.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse --values {args.values!r}") from None
        return "inline", gamble(values, model.operator.n)
    if args.gamble is None:
        raise UsageError("name a gamble with --gamble or give --values")
    try:
        return args.gamble, model.gambles[args.gamble]
    except KeyError:
        known = ", ".join(sorted(model.gambles)) or "none"
        raise UsageError(f"unknown gamble {args.gamble!r} (model defines: {known})") from None


def _selected_states(args, model):
    space = model.operator.space
    if args.state is None:
        return list(range(space.n))
    return [space.index(args.state)]


def _emit(args, out, text_lines, payload):
    if args.format == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _per_state(model, idx, values):
    labels = model.operator.space.labels
    return {labels[i]: float(values[i]) for i in idx}


def cmd_check(args, model, out):
    report = classify(model.operator)
    d = report.to_dict()
    if report.has_top_class:
        parts = [
            f"weakly ergodic: {'yes' if report.weakly_ergodic else 'no'}",
            f"ergodic: {'yes' if report.ergodic else 'no'}",
            f"top class: {fmt_set(d['top_class'])}",
        ]
        if report.top_period != 1:
            parts.append(f"period: {report.top_period}")
    else:
        parts = [
            "no top class",
            "maximal classes: " + ",".join(fmt_set(c) for c in d["maximal_classes"]),
            "weakly ergodic: no",
        ]
    lines = ["; ".join(parts)]
    if args.format == "text":
        lines += [
            f"TCR: {'yes' if report.tcr else 'no'}",
            f"TCA: {'yes' if report.tca else 'no'}",
            "---",
            json.dumps(d, sort_keys=True),
        ]
    _emit(args, out, lines, d)
    return EXIT_OK


def cmd_expect(args, model, out):
    if args.k < 0:
        raise UsageError("-k must be non-negative")
    name, f = _resolve_gamble(args, model)
    T = model.operator
    values = iterate_upper(T, f, args.k) if args.bound == "upper" else iterate_lower(T, f, args.k)
    idx = _selected_states(args, model)
    per = _per_state(model, idx, values)
    lines = [f"{s}: {fmt(v)}" for s, v in per.items()]
    _emit(args, out, lines, {"gamble": name, "k": args.k, "bound": args.bound, "values": per})
    return EXIT_OK


def _class_limits(args, model, f):
    T = model.operator
    dec = decompose(build_upper_graph(T))
    fn = class_average_limit if args.bound == "upper" else class_lower_average_limit
    results = []
    for S in dec.maximal:
        res = fn(T, f, S, args.tol, args.max_iter)
        results.append((T.space.subset_labels(S), res))
    return results


def _limit_lines(res: LimitResult, indent=""):
    lines = [
        f"{indent}value: {fmt(res.value)}",
        f"{indent}error bound: {fmt(res.error_bound)}",
        f"{indent}method: {res.method}",
        f"{indent}iterations: {res.iterations}",
    ]
    if res.period is not None:
        lines.append(f"{indent}period: {res.period}")
    if not res.converged:
        lines.append(f"{indent}WARNING: iteration budget exhausted before tolerance")
    return lines


def cmd_average(args, model, out):
    name, f = _resolve_gamble(args, model)
    T = model.operator
    if not args.limit:
        if args.k is None or args.k < 0:
            raise UsageError("give -k >= 0 or --limit")
        fn = upper_expected_average if args.bound == "upper" else lower_expected_average
        values = fn(T, f, args.k)
        per = _per_state(model, _selected_states(args, model), values)
        lines = [f"{s}: {fmt(v)}" for s, v in per.items()]
        _emit(args, out, lines, {"gamble": name, "k": args.k, "bound": args.bound, "values": per})
        return EXIT_OK

    fn = limit_upper_average if args.bound == "upper" else limit_lower_average
    res = fn(T, f, args.tol, args.max_iter)
    payload = {"gamble": name, "bound": args.bound}
    if isinstance(res, NotWeaklyErgodic):
        lines = ["not weakly ergodic (top class missing or not absorbing)"]
        classes = []
        for labels, cres in _class_limits(args, model, f):
            lines.append(f"class {fmt_set(labels)}:")
            lines += _limit_lines(cres, indent="  ")
            classes.append({"class": labels, **cres.to_dict()})
        payload.update(weakly_ergodic=False, class_limits=classes)
    else:
        lines = _limit_lines(res)
        payload.update(weakly_ergodic=True, limit=res.to_dict())
    _emit(args, out, lines, payload)
    return EXIT_OK


def cmd_graph(args, model, out):
    T = model.operator
    graph = build_upper_graph(T)
    text = graph_to_dot(graph, decompose(graph), name=args.name)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_oracle(args, model, out):
    if args.k < 0:
        raise UsageError("-k must be non-negative")
    name, f = _resolve_gamble(args, model)
    T = model.operator
    if args.bound == "upper":
        brute = brute_force_upper(T, f, args.k, args.mode)
        rec = iterate_upper(T, f, args.k) if args.mode == "instant" else upper_expected_average(T, f, args.k)
    else:
        brute = brute_force_lower(T, f, args.k, args.mode)
        rec = iterate_lower(T, f, args.k) if args.mode == "instant" else lower_expected_average(T, f, args.k)
    gap = float(np.max(np.abs(brute - rec)))
    labels = T.space.labels
    lines = [f"{s}: brute-force {fmt(b)}  recursion {fmt(r)}" for s, b, r in zip(labels, brute, rec)]
    lines.append(f"max gap: {fmt(gap)}")
    payload = {
        "gamble": name, "k": args.k, "mode": args.mode, "bound": args.bound,
        "brute_force": dict(zip(labels, map(float, brute))),
        "recursion": dict(zip(labels, map(float, rec))),
        "max_gap": gap,
    }
    _emit(args, out, lines, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted before or after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--max-iter", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="impmc", parents=[common],
        description="Expectations, time averages and ergodicity of imprecise Markov chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def gamble_args(p):
        p.add_argument("--gamble", "-g", help="name of a gamble defined in the model")
        p.add_argument("--values", help="inline gamble, comma separated in state order")
        p.add_argument("--bound", choices=("upper", "lower"), default="upper")

    sub.add_parser("check", parents=[common], help="classify (weak) ergodicity")

    p = sub.add_parser("expect", parents=[common], help="upper/lower expectation of f(X_k)")
    gamble_args(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--state", help="report only this initial state")

    p = sub.add_parser("average", parents=[common], help="upper/lower expected time average")
    gamble_args(p)
    p.add_argument("-k", type=int)
    p.add_argument("--limit", action="store_true", help="compute the limit as k -> infinity")
    p.add_argument("--state", help="report only this initial state")

    p = sub.add_parser("graph", parents=[common], help="emit the accessibility graph")
    p.add_argument("--dot", action="store_true", help="DOT output (the only format)")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--name", default="accessibility")

    p = sub.add_parser("oracle", parents=[common], help="brute-force cross-check")
    gamble_args(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--mode", choices=("instant", "average"), default="instant")
    return parser


COMMANDS = {
    "check": cmd_check,
    "expect": cmd_expect,
    "average": cmd_average,
    "graph": cmd_graph,
    "oracle": cmd_oracle,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    args.format = getattr(args, "format", "text")
    args.tol = getattr(args, "tol", DEFAULT_TOL)
    args.max_iter = getattr(args, "max_iter", DEFAULT_MAX_ITER)
    model_path = getattr(args, "model", None)
    if model_path is None:
        print("error: --model PATH is required", file=sys.stderr)
        return EXIT_INVALID
    try:
        model = load_model(model_path)
        return COMMANDS[args.command](args, model, out)
    except SizeLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ImpmcError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
