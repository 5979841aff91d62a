"""Command-line entry point: ``flowncg <command> ...``.

Exit status: 0 on success, 1 when a domain check fails (not an equilibrium,
no cycle found, audit violation, trace mismatch), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from typing import List, Optional

from . import analysis, constructions, dynamics, formats
from .games import GameKind, agent_utility, utility_report
from .network import CapacityNetwork

log = logging.getLogger("flowncg")


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _read_network(path: str) -> CapacityNetwork:
    return formats.network_from_json(_read_json(path))


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_construct(args) -> int:
    net = constructions.construct(args.id, args.n, args.k, args.policy)
    _emit(formats.dumps(formats.network_to_json(net)), args.output)
    return 0


def cmd_evaluate(args) -> int:
    net = _read_network(args.network)
    if args.agent is not None:
        v = net.node(args.agent)
        u = agent_utility(net, v, args.game)
        value = u.to_json()
        _emit((value if isinstance(value, str) else json.dumps(value)) + "\n", args.output)
    else:
        _emit(formats.dumps(utility_report(net, args.game)), args.output)
    return 0


def cmd_best_response(args) -> int:
    net = _read_network(args.network)
    v = net.node(args.agent)
    current = agent_utility(net, v, args.game)
    strategy, u = dynamics.best_response(net, v, args.game)
    out = {
        "agent": v,
        "current": [list(p) for p in net.strategies[v].purchases],
        "current_utility": current.to_json(),
        "best_response": [list(p) for p in strategy.purchases],
        "utility": u.to_json(),
        "improving": u > current,
    }
    _emit(formats.dumps(out), args.output)
    return 0


def cmd_verify_ne(args) -> int:
    net = _read_network(args.network)
    nash, witness = dynamics.is_nash(net, args.game)
    out = {"game": GameKind.parse(args.game).value, "nash": nash,
           "witness": witness.to_json() if witness else None}
    _emit(formats.dumps(out), args.output)
    return 0 if nash else 1


def _dynamics_json(net, args) -> dict:
    outcome = dynamics.run_dynamics(
        net, args.game, args.scheduler, args.steps, args.seed, args.move_rule
    )
    return formats.trace_to_json(
        outcome, args.game, args.scheduler, args.seed, args.steps, args.move_rule
    )


def cmd_dynamics(args) -> int:
    net = _read_network(args.network)
    _emit(formats.dumps(_dynamics_json(net, args)), args.output)
    return 0


def cmd_verify_trace(args) -> int:
    data = _read_json(args.trace)
    if not isinstance(data, dict):
        raise formats.FormatError("<root>", "expected a JSON object")
    for key in ("game", "scheduler", "seed", "step_limit", "start"):
        if key not in data:
            raise formats.FormatError(key, "missing")
    start = formats.network_from_json(data["start"])
    moves = formats.trace_moves(data)
    problems = []
    try:
        dynamics.replay(start, moves, data["game"])
    except ValueError as exc:
        problems.append(str(exc))
    rerun = argparse.Namespace(
        game=data["game"], scheduler=data["scheduler"], seed=data["seed"],
        steps=data["step_limit"], move_rule=data.get("move_rule", "best"),
    )
    if _dynamics_json(start, rerun) != data:
        problems.append("trace differs from a fresh run with the same start, scheduler and seed")
    _emit(formats.dumps({"valid": not problems, "problems": problems}), args.output)
    return 0 if not problems else 1


def cmd_search_irc(args) -> int:
    if args.n is not None:
        result = dynamics.search_irc(args.n, args.k, args.game, args.max_states, args.move_rule)
    else:
        result = dynamics.find_irc(args.k, args.game, args.n_max, args.max_states, args.move_rule)
    data = formats.irc_to_json(result)
    if result.status == "cycle":
        data["verified"] = dynamics.verify_improving_cycle(result.start, result.moves, result.kind)
    _emit(formats.dumps(data), args.output)
    return 0 if result.status == "cycle" and data["verified"] else 1


def cmd_census(args) -> int:
    games = ["avg", "min"] if args.game == "both" else [args.game]
    reports = [
        analysis.ne_census(args.n, args.k, g, threads=args.threads, max_profiles=args.max_profiles)
        for g in games
    ]
    payload = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    _emit(formats.dumps(payload), args.output)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=analysis.NeCensus.CSV_FIELDS)
            writer.writeheader()
            for r in reports:
                writer.writerow(r.csv_row())
    return 1 if any(r.audit_violations for r in reports) else 0


def cmd_audit(args) -> int:
    net = _read_network(args.network)
    try:
        report = analysis.audit_ne(net, args.game)
    except analysis.AuditViolation as exc:
        _emit(formats.dumps(exc.report.to_json()), args.output)
        return 1
    _emit(formats.dumps(report.to_json()), args.output)
    return 0


def cmd_export_dot(args) -> int:
    _emit(formats.to_dot(_read_network(args.network)), args.output)
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for parallel stages (output is identical)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    game = argparse.ArgumentParser(add_help=False)
    game.add_argument("--game", choices=["avg", "min"], default="avg")

    net_in = argparse.ArgumentParser(add_help=False)
    net_in.add_argument("network", nargs="?", default="-", help="network JSON (default stdin)")

    parser = argparse.ArgumentParser(prog="flowncg", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="emit a named network")
    p.add_argument("id", choices=sorted(constructions.CONSTRUCTIONS))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--policy", choices=constructions.CYCLE_POLICIES, default="rotations")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("evaluate", parents=[common, game, net_in], help="agent and social utilities")
    p.add_argument("--agent", help="node id or label; prints only that agent's utility")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("best-response", parents=[common, game, net_in], help="best response of one agent")
    p.add_argument("--agent", required=True)
    p.set_defaults(func=cmd_best_response)

    p = sub.add_parser("verify-ne", parents=[common, game, net_in], help="exit 0 iff Nash equilibrium")
    p.set_defaults(func=cmd_verify_ne)

    p = sub.add_parser("dynamics", parents=[common, game, net_in], help="best-response dynamics trace")
    p.add_argument("--scheduler", choices=dynamics.SCHEDULERS, default="round-robin")
    p.add_argument("--steps", type=int, default=1000, help="move limit")
    p.add_argument("--move-rule", choices=dynamics.DYNAMICS_RULES, default="best",
                   help="best response, first improving strategy, or a random improving move")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("verify-trace", parents=[common], help="replay and re-run a dynamics trace")
    p.add_argument("trace", nargs="?", default="-")
    p.set_defaults(func=cmd_verify_trace)

    p = sub.add_parser("search-irc", parents=[common, game], help="search for an improving-response cycle")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, help="search only this n (default: k+1 .. --n-max)")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--max-states", type=int, default=10**7)
    p.add_argument("--move-rule", choices=dynamics.MOVE_RULES, default="improving",
                   help="which moves count as edges of the state graph")
    p.set_defaults(func=cmd_search_irc)

    p = sub.add_parser("census", parents=[common], help="exhaustive equilibrium census")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--game", choices=["avg", "min", "both"], default="both")
    p.add_argument("--max-profiles", type=int, default=analysis.DEFAULT_MAX_PROFILES)
    p.add_argument("--csv", help="also write a CSV table here")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("audit", parents=[common, game, net_in], help="structural audit of an equilibrium")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("export-dot", parents=[common, net_in], help="Graphviz DOT export")
    p.set_defaults(func=cmd_export_dot)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    if args.threads > (os.cpu_count() or 1) * 4:
        log.warning("--threads %d is far above the CPU count", args.threads)
    try:
        return args.func(args)
    except (UsageError, ValueError, TypeError) as exc:
        # FormatError, InfeasibleError and CensusTooLarge are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
