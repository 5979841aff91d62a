"""Independent reference computations used only by the tests.

Nothing here calls the flow solver: connectivities come from enumerating
every bipartition, strategy spaces from filtering a full product.
"""
import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from flowncg.network import Strategy, StrategyProfile, build_network


def crossing(cap, mask):
    n = len(cap)
    return sum(
        cap[i][j]
        for i in range(n)
        if mask >> i & 1
        for j in range(n)
        if not mask >> j & 1
    )


def brute_local(cap, u, v):
    """Minimum capacity over all bipartitions with ``u`` inside and ``v`` outside."""
    n = len(cap)
    return min(
        crossing(cap, mask)
        for mask in range(1 << n)
        if mask >> u & 1 and not mask >> v & 1
    )


def brute_global(cap):
    n = len(cap)
    # fix node 0 inside to enumerate each of the 2^(n-1) - 1 proper cuts once
    return min(crossing(cap, mask) for mask in range(1, 1 << n, 2) if mask != (1 << n) - 1)


def brute_matrix(cap):
    n = len(cap)
    return [[0 if i == j else brute_local(cap, i, j) for j in range(n)] for i in range(n)]


def brute_avg_utility(cap, v):
    n = len(cap)
    return Fraction(sum(brute_local(cap, v, i) for i in range(n) if i != v), n - 1)


def brute_min_utility(cap, v):
    n = len(cap)
    lam = brute_global(cap)
    return (lam, sum(1 for i in range(n) if i != v and brute_local(cap, i, v) > lam))


def brute_strategies(n, k, owner):
    others = [j for j in range(n) if j != owner]
    out = []
    for caps in itertools.product(range(k + 1), repeat=n - 1):
        if sum(caps) <= k:
            out.append(Strategy(owner, tuple((j, c) for j, c in zip(others, caps) if c)))
    return out


def random_strategy(rng, n, k, owner):
    budget = rng.randint(0, k)
    buys = {}
    for _ in range(budget):
        t = rng.choice([j for j in range(n) if j != owner])
        buys[t] = buys.get(t, 0) + 1
    return Strategy.from_mapping(owner, buys)


def random_network(rng, n, k):
    return build_network(
        StrategyProfile(n, k, tuple(random_strategy(rng, n, k, v) for v in range(n)))
    )


@st.composite
def networks(draw, min_n=2, max_n=6):
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, n - 1))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_network(random.Random(seed), n, k)
