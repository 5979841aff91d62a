"""Agent and social utilities for the average-flow and min-flow games."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from .connectivity import connectivity_matrix
from .network import CapacityNetwork

__all__ = [
    "GameKind",
    "Utility",
    "agent_utility",
    "social_utility",
    "compare",
    "score_from_matrix",
    "utility_from_score",
    "utility_report",
    "format_fraction",
]


class GameKind(str, enum.Enum):
    AVG = "avg"
    MIN = "min"

    @classmethod
    def parse(cls, value) -> "GameKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown game {value!r}; expected 'avg' or 'min'") from None


def format_fraction(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class Utility:
    """Utility of one agent.

    ``value`` is a :class:`~fractions.Fraction` in the average game and a
    ``(edge connectivity, well-connected count)`` pair in the min game.
    Ordering is exact; comparing utilities of different games raises.
    """

    kind: GameKind
    value: Union[Fraction, Tuple[int, int]]

    def _key(self, other: "Utility"):
        if not isinstance(other, Utility):
            return NotImplemented
        if other.kind is not self.kind:
            raise TypeError(f"cannot compare {self.kind.value} and {other.kind.value} utilities")
        return other.value

    def __lt__(self, other):
        return self.value < self._key(other)

    def __le__(self, other):
        return self.value <= self._key(other)

    def __gt__(self, other):
        return self.value > self._key(other)

    def __ge__(self, other):
        return self.value >= self._key(other)

    def to_json(self):
        if self.kind is GameKind.AVG:
            return format_fraction(self.value)
        return [int(self.value[0]), int(self.value[1])]

    @classmethod
    def from_json(cls, kind: GameKind, data) -> "Utility":
        kind = GameKind.parse(kind)
        if kind is GameKind.AVG:
            if not isinstance(data, str):
                raise ValueError(f"avg utility must be a fraction string, got {data!r}")
            return cls(kind, Fraction(data))
        if not (isinstance(data, list) and len(data) == 2 and all(isinstance(x, int) for x in data)):
            raise ValueError(f"min utility must be a pair of integers, got {data!r}")
        return cls(kind, (data[0], data[1]))

    def __str__(self):
        if self.kind is GameKind.AVG:
            return format_fraction(self.value)
        return f"({self.value[0]}, {self.value[1]})"


def compare(a: Utility, b: Utility) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if a.kind is not b.kind:
        raise ValueError(f"cannot compare {a.kind.value} and {b.kind.value} utilities")
    return (a.value > b.value) - (a.value < b.value)


def score_from_matrix(matrix: Sequence[Sequence[int]], v: int, kind: GameKind):
    """Cheap order-equivalent of :func:`agent_utility` for a fixed ``n``.

    Average game: the integer sum of connectivities from ``v`` (the common
    denominator ``n - 1`` is dropped). Min game: the utility pair itself.
    """
    n = len(matrix)
    if kind is GameKind.AVG:
        return sum(matrix[v])
    lam = min(matrix[i][j] for i in range(n) for j in range(i + 1, n))
    return (lam, sum(1 for i in range(n) if i != v and matrix[i][v] > lam))


def utility_from_score(score, n: int, kind: GameKind) -> Utility:
    if kind is GameKind.AVG:
        return Utility(kind, Fraction(score, n - 1))
    return Utility(kind, tuple(score))


def agent_utility(net: CapacityNetwork, v: int, kind) -> Utility:
    kind = GameKind.parse(kind)
    m = connectivity_matrix(net)
    return utility_from_score(score_from_matrix(m, v, kind), net.n, kind)


def social_utility(net: CapacityNetwork, kind) -> Fraction:
    kind = GameKind.parse(kind)
    m = connectivity_matrix(net)
    n = net.n
    if kind is GameKind.AVG:
        return Fraction(sum(map(sum, m)), n * (n - 1))
    return Fraction(min(m[i][j] for i in range(n) for j in range(i + 1, n)))


def utility_report(net: CapacityNetwork, kind) -> dict:
    kind = GameKind.parse(kind)
    return {
        "game": kind.value,
        "n": net.n,
        "k": net.k,
        "agents": [
            {"agent": v, "name": net.name(v), "utility": agent_utility(net, v, kind).to_json()}
            for v in range(net.n)
        ],
        "social_utility": format_fraction(social_utility(net, kind)),
    }
