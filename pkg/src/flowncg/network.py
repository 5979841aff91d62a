"""Strategy profiles and the capacitated networks they induce.

Every agent owns its outgoing edges. Flow and cut computations never look at
edge direction: they use the undirected view in which the capacity of a pair
``{v, x}`` is ``c(v, x) + c(x, v)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Tuple

__all__ = [
    "InfeasibleError",
    "Strategy",
    "StrategyProfile",
    "CapacityNetwork",
    "build_network",
    "network_from_edges",
    "degree",
    "apply_strategy",
]


class InfeasibleError(ValueError):
    """A strategy or profile violates the feasibility rules."""

    def __init__(self, message: str, agent: Optional[int] = None):
        if agent is not None:
            message = f"agent {agent}: {message}"
        super().__init__(message)
        self.agent = agent


@dataclass(frozen=True)
class Strategy:
    """Capacities bought by one agent, as sorted ``(target, capacity)`` pairs.

    The sorted pair tuple doubles as the tie-break key for best responses.
    """

    owner: int
    purchases: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        purchases = tuple(sorted((int(t), int(c)) for t, c in self.purchases))
        object.__setattr__(self, "purchases", purchases)
        seen = set()
        for target, cap in purchases:
            if target == self.owner:
                raise InfeasibleError("self-loop purchase", self.owner)
            if target in seen:
                raise InfeasibleError(f"target {target} listed twice", self.owner)
            if cap < 1:
                raise InfeasibleError(
                    f"capacity {cap} to {target} is not a positive integer", self.owner
                )
            seen.add(target)

    @classmethod
    def from_mapping(cls, owner: int, purchases: Mapping[int, int]) -> "Strategy":
        return cls(owner, tuple((t, c) for t, c in purchases.items() if c != 0))

    @property
    def total(self) -> int:
        return sum(c for _, c in self.purchases)

    def capacity(self, target: int) -> int:
        for t, c in self.purchases:
            if t == target:
                return c
        return 0

    def as_dict(self) -> dict:
        return dict(self.purchases)

    def check(self, n: int, k: int) -> None:
        """Raise :class:`InfeasibleError` unless feasible for ``n`` agents, budget ``k``."""
        for target, _ in self.purchases:
            if not 0 <= target < n:
                raise InfeasibleError(f"target {target} out of range 0..{n - 1}", self.owner)
        if self.total > k:
            raise InfeasibleError(f"spends {self.total} > budget {k}", self.owner)

    def __str__(self):
        inner = ", ".join(f"({t},{c})" for t, c in self.purchases)
        return "{" + inner + "}"


@dataclass(frozen=True)
class StrategyProfile:
    n: int
    k: int
    strategies: Tuple[Strategy, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if self.n < 2:
            raise InfeasibleError(f"need at least two agents, got n={self.n}")
        if not 1 <= self.k < self.n:
            raise InfeasibleError(f"budget k={self.k} must satisfy 1 <= k < n={self.n}")
        if len(self.strategies) != self.n:
            raise InfeasibleError(
                f"expected {self.n} strategies, got {len(self.strategies)}"
            )
        for v, s in enumerate(self.strategies):
            if s.owner != v:
                raise InfeasibleError(f"strategy at position {v} is owned by {s.owner}", v)
            s.check(self.n, self.k)

    @classmethod
    def empty(cls, n: int, k: int) -> "StrategyProfile":
        return cls(n, k, tuple(Strategy(v) for v in range(n)))

    def replace(self, v: int, strategy: Strategy) -> "StrategyProfile":
        if strategy.owner != v:
            raise InfeasibleError(f"strategy is owned by {strategy.owner}, not {v}", v)
        strategies = list(self.strategies)
        strategies[v] = strategy
        return StrategyProfile(self.n, self.k, tuple(strategies))


@dataclass(frozen=True)
class CapacityNetwork:
    """The directed owned-edge network of a profile plus its undirected view.

    ``labels`` is optional display metadata (e.g. ``v, x, y, z``); it takes no
    part in equality or hashing.
    """

    profile: StrategyProfile
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.profile.n or len(set(labels)) != len(labels):
                raise InfeasibleError("labels must be unique, one per node")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def k(self) -> int:
        return self.profile.k

    @property
    def strategies(self) -> Tuple[Strategy, ...]:
        return self.profile.strategies

    @cached_property
    def edges(self) -> Tuple[Tuple[int, int, int], ...]:
        """Directed edges ``(owner, target, capacity)`` in owner/target order."""
        return tuple(
            (s.owner, t, c) for s in self.profile.strategies for t, c in s.purchases
        )

    @cached_property
    def directed(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.n
        rows = [[0] * n for _ in range(n)]
        for v, t, c in self.edges:
            rows[v][t] = c
        return tuple(tuple(r) for r in rows)

    @cached_property
    def undirected(self) -> Tuple[Tuple[int, ...], ...]:
        d = self.directed
        n = self.n
        return tuple(tuple(d[i][j] + d[j][i] for j in range(n)) for i in range(n))

    @cached_property
    def undirected_key(self) -> Tuple[int, ...]:
        """Upper triangle of the undirected capacity matrix, row by row."""
        u = self.undirected
        return tuple(u[i][j] for i in range(self.n) for j in range(i + 1, self.n))

    @property
    def total_capacity(self) -> int:
        return sum(c for _, _, c in self.edges)

    def capacity(self, u: int, v: int) -> int:
        """Undirected capacity of ``{u, v}``."""
        return self.undirected[u][v]

    def node(self, ref) -> int:
        """Resolve a node id or label to its integer id."""
        if isinstance(ref, int):
            if not 0 <= ref < self.n:
                raise ValueError(f"node {ref} out of range 0..{self.n - 1}")
            return ref
        text = str(ref)
        if self.labels is not None and text in self.labels:
            return self.labels.index(text)
        try:
            return self.node(int(text))
        except ValueError:
            raise ValueError(f"unknown node {ref!r}") from None

    def name(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def with_strategy(self, v: int, strategy: Strategy) -> "CapacityNetwork":
        return CapacityNetwork(self.profile.replace(v, strategy), self.labels)


def build_network(profile: StrategyProfile, labels: Optional[Sequence[str]] = None) -> CapacityNetwork:
    return CapacityNetwork(profile, tuple(labels) if labels is not None else None)


def network_from_edges(
    n: int,
    k: int,
    edges: Iterable[Tuple[int, int, int]],
    labels: Optional[Sequence[str]] = None,
) -> CapacityNetwork:
    """Build a network from ``(owner, target, capacity)`` triples.

    Repeated ``(owner, target)`` pairs are summed, which is how cycle unions
    accumulate capacity. Zero capacities are dropped.
    """
    buys = [dict() for _ in range(n)]
    for owner, target, cap in edges:
        if not 0 <= owner < n:
            raise InfeasibleError(f"owner {owner} out of range 0..{n - 1}")
        buys[owner][target] = buys[owner].get(target, 0) + cap
    strategies = tuple(Strategy.from_mapping(v, b) for v, b in enumerate(buys))
    return build_network(StrategyProfile(n, k, strategies), labels)


def degree(net: CapacityNetwork, v: int) -> int:
    """Sum of capacities of all edges incident to ``v``, in either direction."""
    return sum(net.undirected[v])


def apply_strategy(net: CapacityNetwork, v: int, new: Strategy) -> CapacityNetwork:
    """Return the network where ``v`` plays ``new``; ``net`` itself is untouched."""
    return net.with_strategy(v, new)
