import pytest

from flowncg.analysis import (
    AuditViolation,
    CensusTooLarge,
    audit_checks,
    audit_ne,
    enumerate_profiles,
    find_cluster,
    ne_census,
    profile_count,
)
from flowncg.connectivity import edge_connectivity_of
from flowncg.constructions import (
    build_avg_game_circle_ne,
    build_directed_cycle,
    build_min_game_worst_ne,
    build_opt,
)
from flowncg.games import GameKind
from flowncg.network import StrategyProfile, build_network, network_from_edges

from hypothesis import given, settings

from oracles import networks

AVG, MIN = GameKind.AVG, GameKind.MIN


@pytest.mark.parametrize("n,k,expected", [(4, 1, 256), (2, 1, 4), (4, 2, 10**4)])
def test_profile_counts(n, k, expected):
    assert profile_count(n, k) == expected
    if expected <= 10**4:
        profiles = list(enumerate_profiles(n, k))
        assert len(profiles) == len(set(profiles)) == expected


def test_census_refuses_large():
    with pytest.raises(CensusTooLarge) as err:
        list(enumerate_profiles(6, 3, max_profiles=1000))
    assert err.value.count == 56**6
    with pytest.raises(CensusTooLarge):
        ne_census(6, 3, AVG, max_profiles=1000)


def test_cluster_none_on_edgeless():
    assert find_cluster(build_network(StrategyProfile.empty(4, 1)), 1) is None


@pytest.mark.parametrize("n,k", [(4, 1), (5, 2), (6, 3)])
def test_opt_is_its_own_2k_cluster(n, k):
    assert find_cluster(build_opt(n, k), 2 * k) == frozenset(range(n))


def test_cluster_inside_weak_bridge():
    # a triangle of capacity-2 edges hanging off a path by a unit edge
    edges = [(0, 1, 2), (1, 2, 2), (2, 0, 2), (3, 0, 1), (4, 3, 1)]
    net = network_from_edges(5, 2, edges)
    assert find_cluster(net, 3) == frozenset({0, 1, 2})
    assert find_cluster(net, 5) is None


@settings(max_examples=60, deadline=None)
@given(networks(max_n=6))
def test_cluster_is_really_connected(net):
    for j in range(1, 2 * net.k + 1):
        c = find_cluster(net, j)
        if c is not None:
            nodes = sorted(c)
            sub = [[net.undirected[a][b] for b in nodes] for a in nodes]
            assert len(nodes) >= 2 and edge_connectivity_of(sub) >= j


@pytest.mark.parametrize("kind", [AVG, MIN])
def test_audit_cycle(kind):
    rep = audit_ne(build_directed_cycle(5, 2), kind)
    assert rep.ok and rep.edge_connectivity == 4


def test_audit_worst_min_ne():
    rep = audit_ne(build_min_game_worst_ne(6, 2), MIN)
    assert rep.edge_connectivity == 3


def test_audit_circle_avg_is_tight():
    rep = audit_ne(build_avg_game_circle_ne(6, 2), AVG)
    assert rep.edge_connectivity == 2
    assert rep.checks["edge_connectivity_at_least_k"]


def test_audit_rejects_non_ne():
    with pytest.raises(ValueError):
        audit_ne(build_avg_game_circle_ne(6, 2), MIN)


def test_audit_checks_flag_violations():
    rep = audit_checks(build_network(StrategyProfile.empty(3, 1)), MIN)
    assert not rep.ok
    assert not rep.checks["full_budget"] and not rep.checks["connected"]
    with pytest.raises(AuditViolation):
        raise AuditViolation(rep)


@pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (3, 2)])
def test_small_census(n, k):
    for kind in (AVG, MIN):
        c = ne_census(n, k, kind)
        assert c.opt == 2 * k
        assert c.pos == 1
        assert c.max_ne == 2 * k
        assert not c.audit_violations
        if kind is MIN:
            assert c.min_ne >= k + 1


def test_census_two_nodes():
    c = ne_census(2, 1, AVG)
    assert c.profiles == 4 and c.ne_labeled == 1 and c.opt == 2


def test_census_json_has_fraction_strings():
    data = ne_census(3, 2, AVG).to_json()
    assert data["poa"] == "4/3" and data["pos"] == "1"
    assert data["ne_isomorphism_classes"] == len(data["ne_networks"])


def test_census_independent_of_split():
    a = ne_census(4, 1, MIN, threads=1).to_json()
    b = ne_census(4, 1, MIN, threads=3).to_json()
    assert a == b
