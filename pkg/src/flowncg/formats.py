"""JSON network / trace formats and DOT export."""
from __future__ import annotations

import json
from typing import Any

from .dynamics import DynamicsOutcome, IrcResult, MoveRecord
from .games import GameKind
from .network import CapacityNetwork, network_from_edges

__all__ = [
    "FormatError",
    "network_to_json",
    "network_from_json",
    "to_dot",
    "trace_to_json",
    "trace_moves",
    "irc_to_json",
    "dumps",
]


class FormatError(ValueError):
    """Input JSON does not match the schema; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def network_to_json(net: CapacityNetwork) -> dict:
    data = {
        "n": net.n,
        "k": net.k,
        "edges": [{"owner": v, "target": t, "capacity": c} for v, t, c in net.edges],
    }
    if net.labels is not None:
        data["labels"] = list(net.labels)
    return data


def _int_field(data: dict, key: str, where: str) -> int:
    if key not in data:
        raise FormatError(where + key, "missing")
    value = data[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(where + key, f"expected an integer, got {value!r}")
    return value


def network_from_json(data: Any) -> CapacityNetwork:
    if not isinstance(data, dict):
        raise FormatError("<root>", "expected a JSON object")
    n = _int_field(data, "n", "")
    k = _int_field(data, "k", "")
    edges = data.get("edges")
    if not isinstance(edges, list):
        raise FormatError("edges", "expected a list")
    triples = []
    seen = set()
    for i, e in enumerate(edges):
        where = f"edges[{i}]."
        if not isinstance(e, dict):
            raise FormatError(f"edges[{i}]", "expected an object")
        owner = _int_field(e, "owner", where)
        target = _int_field(e, "target", where)
        cap = _int_field(e, "capacity", where)
        if cap < 1:
            raise FormatError(where + "capacity", f"must be a positive integer, got {cap}")
        if (owner, target) in seen:
            raise FormatError(f"edges[{i}]", f"duplicate edge ({owner}, {target})")
        seen.add((owner, target))
        triples.append((owner, target, cap))
    labels = data.get("labels")
    if labels is not None and not (
        isinstance(labels, list) and all(isinstance(x, str) for x in labels)
    ):
        raise FormatError("labels", "expected a list of strings")
    return network_from_edges(n, k, triples, labels)


def to_dot(net: CapacityNetwork) -> str:
    lines = ["digraph G {"]
    for v in range(net.n):
        lines.append(f'  {v} [label="{net.name(v)}"];')
    for v, t, c in net.edges:
        lines.append(f'  {v} -> {t} [label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_to_json(
    outcome: DynamicsOutcome, kind, scheduler: str, seed: int, step_limit: int,
    move_rule: str = "best",
) -> dict:
    kind = GameKind.parse(kind)
    return {
        "game": kind.value,
        "scheduler": scheduler,
        "move_rule": move_rule,
        "seed": seed,
        "step_limit": step_limit,
        "start": network_to_json(outcome.start),
        "moves": [m.to_json() for m in outcome.trace],
        "outcome": {
            "status": outcome.status,
            "first_index": outcome.first_index,
            "moves": len(outcome.trace),
        },
        "final": network_to_json(outcome.network),
    }


def trace_moves(data: dict) -> list:
    kind = GameKind.parse(data.get("game"))
    moves = data.get("moves")
    if not isinstance(moves, list):
        raise FormatError("moves", "expected a list")
    out = []
    for i, m in enumerate(moves):
        try:
            out.append(MoveRecord.from_json(m, kind))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"moves[{i}]", str(exc)) from exc
    return out


def irc_to_json(result: IrcResult) -> dict:
    return {
        "status": result.status,
        "n": result.n,
        "k": result.k,
        "game": result.kind.value,
        "states_explored": result.states_explored,
        "start": network_to_json(result.start) if result.start is not None else None,
        "moves": [m.to_json() for m in result.moves],
    }
