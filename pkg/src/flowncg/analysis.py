"""Exhaustive small-instance experiments: equilibrium census, PoA/PoS, structural audits."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .canon import canonical_form
from .connectivity import _min_cut_of, connectivity_matrix, edge_connectivity_of
from .dynamics import _strategy_table, has_improving_move, is_nash, strategy_count
from .games import GameKind, format_fraction, social_utility
from .network import CapacityNetwork, StrategyProfile, build_network

__all__ = [
    "CensusTooLarge",
    "AuditViolation",
    "NeCensus",
    "AuditReport",
    "DEFAULT_MAX_PROFILES",
    "profile_count",
    "enumerate_profiles",
    "ne_census",
    "find_cluster",
    "audit_checks",
    "audit_ne",
]

DEFAULT_MAX_PROFILES = 10**8


class CensusTooLarge(ValueError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"{count} profiles exceed the limit of {limit}; refusing to enumerate")
        self.count = count
        self.limit = limit


class AuditViolation(AssertionError):
    def __init__(self, report: "AuditReport"):
        failed = [name for name, ok in report.checks.items() if not ok]
        super().__init__(f"equilibrium violates: {', '.join(failed)}")
        self.report = report


def profile_count(n: int, k: int) -> int:
    return strategy_count(n, k) ** n


def enumerate_profiles(
    n: int, k: int, max_profiles: int = DEFAULT_MAX_PROFILES
) -> Iterator[StrategyProfile]:
    """Every feasible profile exactly once (agent 0's strategy varies slowest)."""
    count = profile_count(n, k)
    if count > max_profiles:
        raise CensusTooLarge(count, max_profiles)
    tables = [[s for s, _ in _strategy_table(n, k, v)] for v in range(n)]
    for combo in itertools.product(*tables):
        yield StrategyProfile(n, k, combo)


# --------------------------------------------------------------------------
# clusters and audits


def _cluster_in(cap: Sequence[Sequence[int]], nodes: List[int], j: int) -> Optional[FrozenSet[int]]:
    if len(nodes) < 2:
        return None
    sub = [[cap[a][b] for b in nodes] for a in nodes]
    if edge_connectivity_of(sub) >= j:
        return frozenset(nodes)
    side, other = _min_cut_of(sub)
    parts = sorted(
        ([nodes[i] for i in sorted(side)], [nodes[i] for i in sorted(other)]),
        key=lambda p: (-len(p), p),
    )
    for part in parts:
        found = _cluster_in(cap, part, j)
        if found is not None:
            return found
    return None


def find_cluster(net: CapacityNetwork, j: int) -> Optional[FrozenSet[int]]:
    """A node set of size >= 2 whose induced undirected subgraph is ``j``-edge-connected.

    Splits along minimum cuts of value below ``j`` until a piece is
    ``j``-connected; returns ``None`` if only singletons remain.
    """
    if j < 1:
        raise ValueError(f"cluster threshold must be >= 1, got {j}")
    return _cluster_in(net.undirected, list(range(net.n)), j)


@dataclass
class AuditReport:
    game: GameKind
    edge_connectivity: int
    spend: Tuple[int, ...]
    cluster: Optional[FrozenSet[int]]
    checks: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "game": self.game.value,
            "edge_connectivity": self.edge_connectivity,
            "spend": list(self.spend),
            "cluster": sorted(self.cluster) if self.cluster is not None else None,
            "checks": dict(self.checks),
            "ok": self.ok,
        }


def audit_checks(net: CapacityNetwork, kind) -> AuditReport:
    """Evaluate the structural equilibrium properties without checking equilibrium."""
    kind = GameKind.parse(kind)
    n, k = net.n, net.k
    m = connectivity_matrix(net)
    lam = min(m[i][j] for i in range(n) for j in range(i + 1, n))
    spend = tuple(s.total for s in net.strategies)
    cluster = find_cluster(net, k + 1)
    checks = {
        "full_budget": all(x == k for x in spend),
        "connected": lam > 0,
        "cluster_k_plus_1": cluster is not None,
    }
    if kind is GameKind.MIN:
        checks["edge_connectivity_at_least_k_plus_1"] = lam >= k + 1
    elif k >= 2:
        checks["edge_connectivity_at_least_k"] = lam >= k
    return AuditReport(kind, lam, spend, cluster, checks)


def audit_ne(net: CapacityNetwork, kind) -> AuditReport:
    """Audit an equilibrium; raises ``ValueError`` if ``net`` is not one and
    :class:`AuditViolation` if any structural property fails."""
    kind = GameKind.parse(kind)
    nash, _ = is_nash(net, kind)
    if not nash:
        raise ValueError(f"network is not a Nash equilibrium of the {kind.value} game")
    report = audit_checks(net, kind)
    if not report.ok:
        raise AuditViolation(report)
    return report


# --------------------------------------------------------------------------
# census


@dataclass
class NeCensus:
    n: int
    k: int
    game: GameKind
    profiles: int
    ne_labeled: int
    ne_classes: List[CapacityNetwork]
    opt: Fraction
    min_ne: Optional[Fraction]
    max_ne: Optional[Fraction]
    audit_violations: List[dict] = field(default_factory=list)

    @property
    def poa(self) -> Optional[Fraction]:
        return self.opt / self.min_ne if self.min_ne else None

    @property
    def pos(self) -> Optional[Fraction]:
        return self.opt / self.max_ne if self.max_ne else None

    def to_json(self) -> dict:
        f = lambda x: None if x is None else format_fraction(x)  # noqa: E731
        return {
            "n": self.n,
            "k": self.k,
            "game": self.game.value,
            "profiles": self.profiles,
            "ne_labeled": self.ne_labeled,
            "ne_isomorphism_classes": len(self.ne_classes),
            "opt": f(self.opt),
            "min_ne": f(self.min_ne),
            "max_ne": f(self.max_ne),
            "poa": f(self.poa),
            "pos": f(self.pos),
            "audit_violations": self.audit_violations,
            "ne_networks": [
                {
                    "social_utility": f(social_utility(net, self.game)),
                    "edges": [list(e) for e in net.edges],
                }
                for net in self.ne_classes
            ],
        }

    CSV_FIELDS = (
        "n", "k", "game", "profiles", "ne_labeled", "ne_isomorphism_classes",
        "opt", "min_ne", "max_ne", "poa", "pos",
    )

    def csv_row(self) -> dict:
        data = self.to_json()
        return {key: data[key] for key in self.CSV_FIELDS}


def _census_chunk(args) -> dict:
    n, k, kind, first_indices = args
    kind = GameKind(kind)
    tables = [[s for s, _ in _strategy_table(n, k, v)] for v in range(n)]
    opt = None
    min_ne = max_ne = None
    labeled = 0
    classes: Dict[tuple, CapacityNetwork] = {}
    violations = []
    for i in first_indices:
        for rest in itertools.product(*tables[1:]):
            net = build_network(StrategyProfile(n, k, (tables[0][i],) + rest))
            su = social_utility(net, kind)
            if opt is None or su > opt:
                opt = su
            if any(has_improving_move(net, v, kind) for v in range(n)):
                continue
            labeled += 1
            min_ne = su if min_ne is None else min(min_ne, su)
            max_ne = su if max_ne is None else max(max_ne, su)
            enc, canon = canonical_form(net)
            classes.setdefault(enc, canon)
            report = audit_checks(net, kind)
            if not report.ok:
                violations.append({"edges": [list(e) for e in net.edges], **report.to_json()})
    return {
        "opt": opt,
        "min_ne": min_ne,
        "max_ne": max_ne,
        "labeled": labeled,
        "classes": classes,
        "violations": violations,
    }


def _merge(vals, fn):
    vals = [v for v in vals if v is not None]
    return fn(vals) if vals else None


def ne_census(
    n: int,
    k: int,
    kind,
    threads: int = 1,
    max_profiles: int = DEFAULT_MAX_PROFILES,
) -> NeCensus:
    """Enumerate every labelled profile and collect the Nash equilibria.

    ``opt`` is the best social utility over all profiles, found by the same
    enumeration rather than assumed. Work splits over agent 0's strategy; the
    merged result does not depend on ``threads``.
    """
    kind = GameKind.parse(kind)
    count = profile_count(n, k)
    if count > max_profiles:
        raise CensusTooLarge(count, max_profiles)
    first = list(range(strategy_count(n, k)))
    threads = max(1, int(threads))
    chunks = [(n, k, kind.value, first[i::threads]) for i in range(threads)]
    chunks = [c for c in chunks if c[3]]
    if len(chunks) == 1:
        parts = [_census_chunk(chunks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_census_chunk, chunks))
    classes: Dict[tuple, CapacityNetwork] = {}
    violations = []
    for p in parts:
        for enc, net in p["classes"].items():
            classes.setdefault(enc, net)
        violations.extend(p["violations"])
    violations.sort(key=lambda v: v["edges"])
    return NeCensus(
        n=n,
        k=k,
        game=kind,
        profiles=count,
        ne_labeled=sum(p["labeled"] for p in parts),
        ne_classes=[classes[e] for e in sorted(classes)],
        opt=_merge([p["opt"] for p in parts], max),
        min_ne=_merge([p["min_ne"] for p in parts], min),
        max_ne=_merge([p["max_ne"] for p in parts], max),
        audit_violations=violations,
    )
