"""Exact max-flow / min-cut on the undirected view of a network.

An undirected edge of capacity ``c`` is modelled as two opposed arcs of
capacity ``c`` inside the flow solver. All arithmetic is integer.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

from .network import CapacityNetwork

__all__ = [
    "max_flow",
    "GomoryHuTree",
    "gomory_hu",
    "local_connectivity",
    "all_pairs_connectivity",
    "naive_all_pairs",
    "connectivity_matrix",
    "global_connectivity",
    "min_cut_partition",
    "cut_value",
    "edge_connectivity_of",
]

Matrix = Sequence[Sequence[int]]

# Python ints never overflow, but a capacity this large means the input is not
# a budget-bounded network and something upstream is broken.
_CAPACITY_LIMIT = 2**62


def _check_capacities(cap: Matrix) -> None:
    n = len(cap)
    for i in range(n):
        if len(cap[i]) != n:
            raise ValueError("capacity matrix must be square")
        for j in range(n):
            c = cap[i][j]
            if c < 0 or c != cap[j][i]:
                raise ValueError(f"capacity ({i},{j}) must be symmetric and non-negative")
    if sum(map(sum, cap)) >= _CAPACITY_LIMIT:
        raise OverflowError("total capacity exceeds the supported range")


def max_flow(cap: Matrix, s: int, t: int) -> Tuple[int, FrozenSet[int]]:
    """Maximum ``s``-``t`` flow on a symmetric capacity matrix (Edmonds-Karp).

    Returns the flow value and the source side of a minimum cut, i.e. the
    nodes still reachable from ``s`` in the final residual graph.
    """
    if s == t:
        raise ValueError("source and sink must differ")
    n = len(cap)
    residual = [list(row) for row in cap]
    flow = 0
    while True:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] < 0:
            u = queue.popleft()
            row = residual[u]
            for w in range(n):
                if parent[w] < 0 and row[w] > 0:
                    parent[w] = u
                    queue.append(w)
        if parent[t] < 0:
            return flow, frozenset(w for w in range(n) if parent[w] >= 0)
        push = None
        w = t
        while w != s:
            u = parent[w]
            r = residual[u][w]
            if push is None or r < push:
                push = r
            w = u
        w = t
        while w != s:
            u = parent[w]
            residual[u][w] -= push
            residual[w][u] += push
            w = u
        flow += push


def cut_value(cap: Matrix, side) -> int:
    """Total capacity crossing between ``side`` and its complement."""
    inside = set(side)
    n = len(cap)
    return sum(cap[i][j] for i in inside for j in range(n) if j not in inside)


@dataclass(frozen=True)
class GomoryHuTree:
    """Cut tree: node ``i > 0`` hangs below ``parent[i]`` with edge value ``weight[i]``.

    The minimum edge value on the tree path between two nodes equals their
    local edge connectivity. Node 0 is the root.
    """

    n: int
    parent: Tuple[int, ...]
    weight: Tuple[int, ...]

    @property
    def edges(self) -> List[Tuple[int, int, int]]:
        return [(i, self.parent[i], self.weight[i]) for i in range(1, self.n)]

    def _path_to_root(self, u: int) -> List[int]:
        path = [u]
        while path[-1] != 0:
            path.append(self.parent[path[-1]])
        return path

    def connectivity(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("connectivity of a node with itself is undefined")
        up = self._path_to_root(u)
        vp = self._path_to_root(v)
        on_v = set(vp)
        best = None
        for node in up:
            if node in on_v:
                meet = node
                break
            best = self.weight[node] if best is None else min(best, self.weight[node])
        for node in vp:
            if node == meet:
                break
            best = self.weight[node] if best is None else min(best, self.weight[node])
        return best

    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.n
        rows = [[0] * n for _ in range(n)]
        for u in range(n):
            for v in range(u + 1, n):
                rows[u][v] = rows[v][u] = self.connectivity(u, v)
        return tuple(tuple(r) for r in rows)


def gomory_hu(cap: Matrix) -> GomoryHuTree:
    """Gusfield's equivalent-flow tree from ``n - 1`` max-flow calls.

    Path minima reproduce every pairwise connectivity; tree edges are not
    guaranteed to induce the matching cuts, so callers that need a cut rerun
    the flow for the chosen pair.
    """
    _check_capacities(cap)
    n = len(cap)
    if n < 2:
        raise ValueError("need at least two nodes")
    parent = [0] * n
    weight = [0] * n
    for s in range(1, n):
        t = parent[s]
        value, side = max_flow(cap, s, t)
        weight[s] = value
        for i in range(s + 1, n):
            if i in side and parent[i] == t:
                parent[i] = s
    return GomoryHuTree(n, tuple(parent), tuple(weight))


def _as_matrix(n: int, key: Tuple[int, ...]) -> List[List[int]]:
    rows = [[0] * n for _ in range(n)]
    it = iter(key)
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = next(it)
    return rows


@lru_cache(maxsize=1 << 18)
def _cached_matrix(n: int, key: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    return gomory_hu(_as_matrix(n, key)).matrix()


def connectivity_matrix(net: CapacityNetwork) -> Tuple[Tuple[int, ...], ...]:
    """All-pairs local edge connectivity (diagonal zero), memoised on the undirected view."""
    return _cached_matrix(net.n, net.undirected_key)


def local_connectivity(net: CapacityNetwork, u: int, v: int) -> int:
    if u == v:
        raise ValueError("local connectivity needs two distinct nodes")
    value, _ = max_flow(net.undirected, u, v)
    return value


def all_pairs_connectivity(net: CapacityNetwork) -> GomoryHuTree:
    return gomory_hu(net.undirected)


def naive_all_pairs(net: CapacityNetwork) -> Tuple[Tuple[int, ...], ...]:
    """One max-flow per pair. Slow reference for the cut tree."""
    n = net.n
    rows = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            rows[u][v] = rows[v][u] = local_connectivity(net, u, v)
    return tuple(tuple(r) for r in rows)


def edge_connectivity_of(cap: Matrix) -> int:
    """Global edge connectivity of a symmetric capacity matrix."""
    if len(cap) < 2:
        raise ValueError("need at least two nodes")
    return min(gomory_hu(cap).weight[1:])


def global_connectivity(net: CapacityNetwork) -> int:
    m = connectivity_matrix(net)
    n = net.n
    return min(m[i][j] for i in range(n) for j in range(i + 1, n))


def _min_cut_of(cap: Matrix) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    tree = gomory_hu(cap)
    i = min(range(1, tree.n), key=lambda x: (tree.weight[x], x))
    _, side = max_flow(cap, i, tree.parent[i])
    other = frozenset(range(len(cap))) - side
    return side, other


def min_cut_partition(net: CapacityNetwork) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """A bipartition whose crossing capacity equals the global edge connectivity."""
    if net.n < 2:
        raise ValueError("need at least two nodes")
    return _min_cut_of(net.undirected)
