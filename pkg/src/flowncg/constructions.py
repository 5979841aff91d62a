"""Generators for the named networks.

Nodes are dense ids ``0..n-1``. Where a construction names its nodes
(``v_1..v_n``, ``c, a_i, b_i``, ...) the names are attached as labels, so the
id mapping travels with the exported JSON.
"""
from __future__ import annotations

from math import gcd
from typing import Callable, Dict, Tuple

from .network import CapacityNetwork, Strategy, network_from_edges

__all__ = [
    "build_opt",
    "build_directed_cycle",
    "build_min_game_worst_ne",
    "build_avg_game_circle_ne",
    "build_avg_game_star_ne",
    "build_figure1",
    "worst_ne_deviation",
    "CONSTRUCTIONS",
    "construct",
]

CYCLE_POLICIES = ("rotations", "repeat")


def _check(n: int, k: int, min_n: int = 2, min_k: int = 1) -> None:
    if n < min_n:
        raise ValueError(f"need n >= {min_n}, got n={n}")
    if not min_k <= k < n:
        raise ValueError(f"need {min_k} <= k < n, got n={n}, k={k}")


def build_opt(n: int, k: int, policy: str = "rotations") -> CapacityNetwork:
    """Union of ``k`` directed Hamiltonian cycles, each adding capacity 1.

    ``"rotations"`` uses the cycles ``i -> i + d`` for the first ``k`` offsets
    ``d`` coprime to ``n``; if there are fewer than ``k`` of them it falls back
    to ``"repeat"``, which adds the cycle ``i -> i + 1`` ``k`` times.
    """
    _check(n, k, min_n=3)
    if policy not in CYCLE_POLICIES:
        raise ValueError(f"unknown cycle policy {policy!r}; expected one of {CYCLE_POLICIES}")
    offsets = [d for d in range(1, n) if gcd(d, n) == 1]
    if policy == "repeat" or len(offsets) < k:
        offsets = [1] * k
    else:
        offsets = offsets[:k]
    edges = [(i, (i + d) % n, 1) for d in offsets for i in range(n)]
    return network_from_edges(n, k, edges)


def build_directed_cycle(n: int, k: int) -> CapacityNetwork:
    _check(n, k)
    return network_from_edges(n, k, [(i, (i + 1) % n, k) for i in range(n)])


def build_min_game_worst_ne(n: int, k: int) -> CapacityNetwork:
    """Chain whose edge connectivity is exactly ``k + 1``; labels ``v1..vn``.

    For ``1 <= i < k``: ``v_i -> v_{i+1}`` with capacity ``k - i + 1`` and
    ``v_{i+1} -> v_i`` with capacity ``i``. Then ``v_k -> v_n`` with capacity 1
    and ``v_{i+1} -> v_i`` with capacity ``k`` for ``k <= i < n``.
    """
    _check(n, k)
    v = lambda i: i - 1  # noqa: E731  1-based name -> id
    edges = []
    for i in range(1, k):
        edges.append((v(i), v(i + 1), k - (i - 1)))
        edges.append((v(i + 1), v(i), i))
    edges.append((v(k), v(n), 1))
    for i in range(k, n):
        edges.append((v(i + 1), v(i), k))
    return network_from_edges(n, k, edges, [f"v{i}" for i in range(1, n + 1)])


def build_avg_game_circle_ne(n: int, k: int) -> CapacityNetwork:
    """``k`` nodes on a capacity-``k`` cycle; every other node buys one unit to each."""
    if k < 2:
        raise ValueError(f"circle construction needs 2 <= k < n, got k={k}")
    _check(n, k, min_k=2)
    edges = [(i, (i + 1) % k, k) for i in range(k)]
    edges += [(j, i, 1) for j in range(k, n) for i in range(k)]
    return network_from_edges(n, k, edges, [f"v{i}" for i in range(1, n + 1)])


def build_avg_game_star_ne(n: int, k: int) -> CapacityNetwork:
    """Star-like network with centre ``c`` (id 0), ``a_1..a_{k-1}`` and ``b_1..b_{n-k}``."""
    _check(n, k)
    if n < k + 2:
        raise ValueError(f"star construction needs n >= k + 2, got n={n}, k={k}")
    c = 0
    a = [i for i in range(1, k)]
    b = [i for i in range(k, n)]
    edges = [(c, ai, 1) for ai in a] + [(c, b[0], 1)]
    edges += [(ai, c, k) for ai in a]
    for i in range(len(b) - 1):
        edges += [(b[i], c, k - 1), (b[i], b[i + 1], 1)]
    edges.append((b[-1], c, k))
    labels = ["c"] + [f"a{i}" for i in range(1, k)] + [f"b{i}" for i in range(1, n - k + 1)]
    return network_from_edges(n, k, [e for e in edges if e[2] > 0], labels)


def build_figure1() -> CapacityNetwork:
    """Four agents ``v, x, y, z`` with budget 2."""
    v, x, y, z = range(4)
    edges = [(v, x, 1), (v, z, 1), (x, v, 1), (x, z, 1), (y, x, 1), (y, z, 1), (z, y, 2)]
    return network_from_edges(4, 2, edges, ["v", "x", "y", "z"])


def worst_ne_deviation(n: int, k: int) -> Tuple[int, Strategy]:
    """Move of ``v_2`` in :func:`build_min_game_worst_ne` that improves in the average game.

    ``v_2`` drops its edge to ``v_1`` and buys capacity 1 to ``v_n`` instead.
    Needs ``k >= 2`` so that ``v_2`` owns an edge to ``v_1``.
    """
    if k < 2:
        raise ValueError("v2 owns no edge to v1 when k < 2")
    net = build_min_game_worst_ne(n, k)
    v1, v2, vn = 0, 1, n - 1
    buys = net.strategies[v2].as_dict()
    del buys[v1]
    buys[vn] = buys.get(vn, 0) + 1
    return v2, Strategy.from_mapping(v2, buys)


CONSTRUCTIONS: Dict[str, Callable[..., CapacityNetwork]] = {
    "opt": build_opt,
    "directed-cycle": build_directed_cycle,
    "min-worst-ne": build_min_game_worst_ne,
    "avg-circle-ne": build_avg_game_circle_ne,
    "avg-star-ne": build_avg_game_star_ne,
    "figure1": build_figure1,
}


def construct(name: str, n: int = None, k: int = None, policy: str = "rotations") -> CapacityNetwork:
    if name not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {name!r}; expected one of {sorted(CONSTRUCTIONS)}")
    if name == "figure1":
        return build_figure1()
    if n is None or k is None:
        raise ValueError(f"construction {name!r} needs --n and --k")
    if name == "opt":
        return build_opt(n, k, policy)
    return CONSTRUCTIONS[name](n, k)
