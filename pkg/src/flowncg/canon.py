"""Brute-force canonical forms for small labelled networks.

Nodes are first split into cells by an isomorphism-invariant signature, and
only permutations inside cells are tried. That keeps n = 6 cheap while the
result is still a true canonical form: two networks get the same encoding iff
they are isomorphic as owned, capacitated digraphs.
"""
from __future__ import annotations

from itertools import groupby, permutations, product
from typing import List, Sequence, Tuple

from .network import CapacityNetwork, network_from_edges

__all__ = [
    "canonical_order",
    "canonical_encoding",
    "canonical_form",
    "canonical_network",
    "relabel",
    "is_isomorphic",
]

MAX_NODES = 8


def _signature(d: Sequence[Sequence[int]], v: int):
    n = len(d)
    out = sorted(d[v][j] for j in range(n) if j != v)
    inc = sorted(d[j][v] for j in range(n) if j != v)
    return (sum(out), sum(inc), tuple(out), tuple(inc))


def _cells(d) -> List[List[int]]:
    n = len(d)
    sigs = {v: _signature(d, v) for v in range(n)}
    nodes = sorted(range(n), key=lambda v: (sigs[v], v))
    return [list(g) for _, g in groupby(nodes, key=lambda v: sigs[v])]


def canonical_order(net: CapacityNetwork) -> Tuple[int, ...]:
    """Node order (new position -> old id) giving the lexicographically least matrix."""
    if net.n > MAX_NODES:
        raise ValueError(f"brute-force canonical form is limited to n <= {MAX_NODES}")
    d = net.directed
    n = net.n
    best = None
    best_order = None
    for parts in product(*(permutations(c) for c in _cells(d))):
        order = [v for part in parts for v in part]
        enc = tuple(d[order[a]][order[b]] for a in range(n) for b in range(n))
        if best is None or enc < best:
            best = enc
            best_order = tuple(order)
    return best_order


def canonical_encoding(net: CapacityNetwork) -> Tuple[int, ...]:
    d = net.directed
    order = canonical_order(net)
    n = net.n
    return (n, net.k) + tuple(d[order[a]][order[b]] for a in range(n) for b in range(n))


def relabel(net: CapacityNetwork, order: Sequence[int]) -> CapacityNetwork:
    """Network whose node ``a`` is the old node ``order[a]``."""
    pos = {old: new for new, old in enumerate(order)}
    if sorted(pos) != list(range(net.n)):
        raise ValueError("order must be a permutation of the node ids")
    edges = [(pos[v], pos[t], c) for v, t, c in net.edges]
    return network_from_edges(net.n, net.k, edges)


def canonical_form(net: CapacityNetwork) -> Tuple[Tuple[int, ...], CapacityNetwork]:
    """Encoding and canonically relabelled network in one pass."""
    order = canonical_order(net)
    d = net.directed
    n = net.n
    enc = (n, net.k) + tuple(d[order[a]][order[b]] for a in range(n) for b in range(n))
    return enc, relabel(net, order)


def canonical_network(net: CapacityNetwork) -> CapacityNetwork:
    return relabel(net, canonical_order(net))


def is_isomorphic(a: CapacityNetwork, b: CapacityNetwork) -> bool:
    return a.n == b.n and a.k == b.k and canonical_encoding(a) == canonical_encoding(b)
