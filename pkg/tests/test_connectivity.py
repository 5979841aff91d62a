import itertools

import pytest
from hypothesis import given, settings

from flowncg.connectivity import (
    all_pairs_connectivity,
    connectivity_matrix,
    cut_value,
    global_connectivity,
    local_connectivity,
    max_flow,
    min_cut_partition,
    naive_all_pairs,
)
from flowncg.constructions import (
    build_avg_game_circle_ne,
    build_directed_cycle,
    build_figure1,
    build_min_game_worst_ne,
    build_opt,
)
from flowncg.network import Strategy, StrategyProfile, build_network, degree, network_from_edges

from oracles import brute_global, brute_local, brute_matrix, networks

V, X, Y, Z = range(4)


def test_four_node_flows_from_z():
    net = build_figure1()
    assert [local_connectivity(net, Z, t) for t in (V, X, Y)] == [3, 3, 4]


def test_isolated_pair():
    net = build_network(StrategyProfile.empty(2, 1))
    assert local_connectivity(net, 0, 1) == 0


def test_same_node_rejected():
    with pytest.raises(ValueError):
        local_connectivity(build_figure1(), 1, 1)
    with pytest.raises(ValueError):
        max_flow([[0, 1], [1, 0]], 0, 0)


@pytest.mark.parametrize("n,k", [(4, 2), (5, 3), (7, 2)])
def test_opt_all_pairs_2k(n, k):
    net = build_opt(n, k)
    for u, v in itertools.combinations(range(n), 2):
        assert local_connectivity(net, u, v) == 2 * k


def test_tree_answers_four_node_example():
    tree = all_pairs_connectivity(build_figure1())
    assert tree.connectivity(Z, Y) == 4
    assert len(tree.edges) == 3


def test_edgeless_tree():
    tree = all_pairs_connectivity(build_network(StrategyProfile.empty(5, 2)))
    assert all(w == 0 for _, _, w in tree.edges)


@pytest.mark.parametrize("n,k", [(3, 1), (5, 2), (6, 5)])
def test_directed_cycle_global(n, k):
    assert global_connectivity(build_directed_cycle(n, k)) == 2 * k


@pytest.mark.parametrize("n,k", [(3, 1), (5, 2), (6, 3), (7, 4)])
def test_min_worst_ne_global(n, k):
    assert global_connectivity(build_min_game_worst_ne(n, k)) == k + 1


def test_disconnected_global_and_cut():
    # two disjoint directed triangles
    edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1)]
    net = network_from_edges(6, 1, edges)
    assert global_connectivity(net) == 0
    side, other = min_cut_partition(net)
    assert {frozenset(side), frozenset(other)} == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}


@pytest.mark.parametrize(
    "net",
    [build_avg_game_circle_ne(6, 2), build_avg_game_circle_ne(7, 3), build_directed_cycle(5, 2),
     build_figure1(), build_min_game_worst_ne(6, 3)],
    ids=["circle-6-2", "circle-7-3", "cycle-5-2", "figure1", "worst-6-3"],
)
def test_min_cut_partition_matches_enumeration(net):
    side, other = min_cut_partition(net)
    assert side | other == frozenset(range(net.n)) and not side & other
    assert side and other
    value = cut_value(net.undirected, side)
    assert value == global_connectivity(net) == brute_global(net.undirected)


def test_circle_ne_is_exactly_k_connected():
    # tightness of the k lower bound for the average game
    for n, k in [(5, 2), (6, 2), (6, 3)]:
        assert brute_global(build_avg_game_circle_ne(n, k).undirected) == k


@settings(max_examples=150, deadline=None)
@given(networks(max_n=7))
def test_max_flow_equals_min_cut(net):
    cap = net.undirected
    for u, v in itertools.combinations(range(net.n), 2):
        assert local_connectivity(net, u, v) == brute_local(cap, u, v)


@settings(max_examples=150, deadline=None)
@given(networks(max_n=6))
def test_tree_agrees_with_naive_and_brute(net):
    tree = all_pairs_connectivity(net)
    assert tree.matrix() == naive_all_pairs(net) == connectivity_matrix(net)
    assert [list(r) for r in tree.matrix()] == brute_matrix(net.undirected)
    # spanning and acyclic: every node reaches the root
    for v in range(net.n):
        seen = set()
        while v != 0:
            assert v not in seen
            seen.add(v)
            v = tree.parent[v]


@settings(max_examples=100, deadline=None)
@given(networks())
def test_symmetry_degree_bound_triangle(net):
    m = connectivity_matrix(net)
    n = net.n
    for u, v in itertools.permutations(range(n), 2):
        assert m[u][v] == m[v][u]
        assert m[u][v] <= min(degree(net, u), degree(net, v))
    for u, v, w in itertools.permutations(range(n), 3):
        assert m[u][w] >= min(m[u][v], m[v][w])


@settings(max_examples=100, deadline=None)
@given(networks())
def test_global_is_min_pair_and_zero_iff_disconnected(net):
    m = connectivity_matrix(net)
    lam = global_connectivity(net)
    assert lam == min(m[i][j] for i, j in itertools.combinations(range(net.n), 2))
    assert lam == brute_global(net.undirected)
    # plain graph search for connectedness
    reach, todo = {0}, [0]
    while todo:
        u = todo.pop()
        for w in range(net.n):
            if net.undirected[u][w] and w not in reach:
                reach.add(w)
                todo.append(w)
    assert (lam == 0) == (len(reach) < net.n)


@settings(max_examples=60, deadline=None)
@given(networks(max_n=5))
def test_adding_capacity_is_monotone(net):
    before = connectivity_matrix(net)
    for v in range(net.n):
        s = net.strategies[v]
        if s.total >= net.k:
            continue
        for t in range(net.n):
            if t == v:
                continue
            buys = s.as_dict()
            buys[t] = buys.get(t, 0) + 1
            after = connectivity_matrix(net.with_strategy(v, Strategy.from_mapping(v, buys)))
            for i in range(net.n):
                for j in range(net.n):
                    assert after[i][j] >= before[i][j]


def test_asymmetric_matrix_rejected():
    from flowncg.connectivity import gomory_hu

    with pytest.raises(ValueError):
        gomory_hu([[0, 1], [2, 0]])
