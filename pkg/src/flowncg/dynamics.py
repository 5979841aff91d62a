"""Best responses, equilibrium checks, improving-response dynamics and cycle search."""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, Optional, Tuple

from .canon import canonical_encoding, canonical_form
from .connectivity import _cached_matrix
from .games import GameKind, Utility, agent_utility, score_from_matrix, utility_from_score
from .network import CapacityNetwork, Strategy, StrategyProfile, build_network

__all__ = [
    "MoveRecord",
    "DynamicsOutcome",
    "IrcResult",
    "SCHEDULERS",
    "enumerate_strategies",
    "strategy_count",
    "best_response",
    "improving_moves",
    "has_improving_move",
    "is_nash",
    "run_dynamics",
    "replay",
    "verify_improving_cycle",
    "search_irc",
    "find_irc",
]

log = logging.getLogger(__name__)

SCHEDULERS = ("round-robin", "random", "first-improving")


@dataclass(frozen=True)
class MoveRecord:
    agent: int
    before: Strategy
    after: Strategy
    utility_before: Utility
    utility_after: Utility

    def to_json(self) -> dict:
        return {
            "agent": self.agent,
            "before": [list(p) for p in self.before.purchases],
            "after": [list(p) for p in self.after.purchases],
            "utility_before": self.utility_before.to_json(),
            "utility_after": self.utility_after.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict, kind) -> "MoveRecord":
        agent = data["agent"]
        return cls(
            agent,
            Strategy(agent, tuple(map(tuple, data["before"]))),
            Strategy(agent, tuple(map(tuple, data["after"]))),
            Utility.from_json(kind, data["utility_before"]),
            Utility.from_json(kind, data["utility_after"]),
        )


# --------------------------------------------------------------------------
# strategy spaces


def strategy_count(n: int, k: int) -> int:
    """Number of feasible strategies: weak compositions of 0..k into n - 1 parts."""
    return sum(comb(t + n - 2, n - 2) for t in range(k + 1))


@lru_cache(maxsize=None)
def _strategy_table(n: int, k: int, owner: int) -> Tuple[Tuple[Strategy, Tuple[int, ...]], ...]:
    others = [j for j in range(n) if j != owner]
    table = []

    def fill(i, left, caps):
        if i == len(others) - 1:
            caps = caps + (left,)
            row = [0] * n
            for j, c in zip(others, caps):
                row[j] = c
            purchases = tuple((j, c) for j, c in zip(others, caps) if c)
            table.append((Strategy(owner, purchases), tuple(row)))
            return
        for c in range(left + 1):
            fill(i + 1, left - c, caps + (c,))

    for total in range(k + 1):
        fill(0, total, ())
    return tuple(table)


def enumerate_strategies(n: int, k: int, owner: int) -> Iterator[Strategy]:
    """Every feasible strategy of ``owner`` exactly once, by increasing spend."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    for strategy, _ in _strategy_table(n, k, owner):
        yield strategy


@lru_cache(maxsize=None)
def _pair_index(n: int) -> Tuple[Tuple[int, ...], ...]:
    idx = [[-1] * n for _ in range(n)]
    pos = 0
    for i in range(n):
        for j in range(i + 1, n):
            idx[i][j] = idx[j][i] = pos
            pos += 1
    return tuple(tuple(r) for r in idx)


def _candidates(net: CapacityNetwork, v: int, kind: GameKind):
    """Yield ``(strategy, score)`` for every feasible strategy of ``v``."""
    n = net.n
    d = net.directed
    idx = _pair_index(n)[v]
    incoming = [d[j][v] for j in range(n)]
    base = list(net.undirected_key)
    for strategy, row in _strategy_table(n, net.k, v):
        key = base[:]
        for j in range(n):
            if j != v:
                key[idx[j]] = incoming[j] + row[j]
        yield strategy, score_from_matrix(_cached_matrix(n, tuple(key)), v, kind)


def _current_score(net: CapacityNetwork, v: int, kind: GameKind):
    return score_from_matrix(_cached_matrix(net.n, net.undirected_key), v, kind)


# --------------------------------------------------------------------------
# best responses and equilibria


def best_response(net: CapacityNetwork, v: int, kind) -> Tuple[Strategy, Utility]:
    """Exact best response of ``v`` with everyone else fixed.

    Ties go to the current strategy, then to the smallest
    ``(target, capacity)`` encoding, so equilibria are fixed points.
    """
    kind = GameKind.parse(kind)
    current = net.strategies[v]
    cur_score = _current_score(net, v, kind)
    best_score, best = None, None
    for strategy, score in _candidates(net, v, kind):
        if best_score is None or score > best_score or (
            score == best_score and strategy.purchases < best.purchases
        ):
            best_score, best = score, strategy
    if best_score == cur_score:
        best = current
    return best, utility_from_score(best_score, net.n, kind)


def improving_moves(net: CapacityNetwork, v: int, kind) -> List[Tuple[Strategy, Utility]]:
    """All strictly improving strategies of ``v`` in enumeration order."""
    kind = GameKind.parse(kind)
    cur = _current_score(net, v, kind)
    return [
        (s, utility_from_score(score, net.n, kind))
        for s, score in _candidates(net, v, kind)
        if score > cur
    ]


def has_improving_move(net: CapacityNetwork, v: int, kind) -> bool:
    kind = GameKind.parse(kind)
    cur = _current_score(net, v, kind)
    return any(score > cur for _, score in _candidates(net, v, kind))


def _best_move(net: CapacityNetwork, v: int, kind: GameKind) -> Optional[MoveRecord]:
    before = agent_utility(net, v, kind)
    after_strategy, after = best_response(net, v, kind)
    if after > before:
        return MoveRecord(v, net.strategies[v], after_strategy, before, after)
    return None


def is_nash(net: CapacityNetwork, kind) -> Tuple[bool, Optional[MoveRecord]]:
    """Exhaustive equilibrium check.

    On failure the witness is the best response of the lowest-id agent that
    can improve.
    """
    kind = GameKind.parse(kind)
    for v in range(net.n):
        if has_improving_move(net, v, kind):
            return False, _best_move(net, v, kind)
    return True, None


# --------------------------------------------------------------------------
# dynamics


@dataclass
class DynamicsOutcome:
    """Result of :func:`run_dynamics`.

    ``status`` is ``"ne"``, ``"revisited"`` or ``"step-limit"``. For a revisit,
    ``first_index`` is the trace position (0 = start) where the final state
    first occurred.
    """

    status: str
    start: CapacityNetwork
    network: CapacityNetwork
    trace: List[MoveRecord]
    first_index: Optional[int] = None


def _agent_order(n: int, scheduler: str, rng: random.Random) -> Iterator[int]:
    if scheduler == "round-robin":
        yield from itertools.cycle(range(n))
    elif scheduler == "random":
        while True:
            order = list(range(n))
            rng.shuffle(order)
            yield from order
    else:
        raise ValueError(f"unknown scheduler {scheduler!r}; expected one of {SCHEDULERS}")


def _random_improving_move(net: CapacityNetwork, v: int, kind: GameKind, rng) -> Optional[MoveRecord]:
    options = improving_moves(net, v, kind)
    if not options:
        return None
    strategy, after = options[rng.randrange(len(options))]
    return MoveRecord(v, net.strategies[v], strategy, agent_utility(net, v, kind), after)


def _first_improving_move(net: CapacityNetwork, v: int, kind: GameKind) -> Optional[MoveRecord]:
    cur = _current_score(net, v, kind)
    for strategy, score in _candidates(net, v, kind):
        if score > cur:
            nxt = net.with_strategy(v, strategy)
            return MoveRecord(v, net.strategies[v], strategy, agent_utility(net, v, kind), agent_utility(nxt, v, kind))
    return None


DYNAMICS_RULES = ("best", "first", "improving")


def run_dynamics(
    start: CapacityNetwork,
    kind,
    scheduler: str = "round-robin",
    step_limit: int = 1000,
    seed: int = 0,
    move_rule: str = "best",
) -> DynamicsOutcome:
    """Improving-response dynamics until equilibrium, a labelled repeat, or ``step_limit`` moves.

    The scheduled agent plays its best response (``move_rule="best"``) or a
    uniformly drawn improving move (``"improving"``) or the first improving
    strategy in enumeration order (``"first"``). Agents without an
    improving move are skipped; when no agent has one the run stops at an
    equilibrium. Everything random comes from ``random.Random(seed)``.
    """
    kind = GameKind.parse(kind)
    if scheduler not in SCHEDULERS:
        raise ValueError(f"unknown scheduler {scheduler!r}; expected one of {SCHEDULERS}")
    if move_rule not in DYNAMICS_RULES:
        raise ValueError(f"unknown move rule {move_rule!r}; expected one of {DYNAMICS_RULES}")
    rng = random.Random(seed)
    n = start.n
    net = start
    trace: List[MoveRecord] = []
    seen: Dict[StrategyProfile, int] = {start.profile: 0}
    settled: set = set()
    agents = None if scheduler == "first-improving" else _agent_order(n, scheduler, rng)

    def move_for(v):
        if move_rule == "best":
            return _best_move(net, v, kind)
        if move_rule == "first":
            return _first_improving_move(net, v, kind)
        return _random_improving_move(net, v, kind, rng)

    while True:
        if len(trace) >= step_limit:
            return DynamicsOutcome("step-limit", start, net, trace)
        move = None
        if agents is None:
            for v in range(n):
                if has_improving_move(net, v, kind):
                    move = move_for(v)
                    break
            if move is None:
                return DynamicsOutcome("ne", start, net, trace)
        else:
            if len(settled) == n:
                return DynamicsOutcome("ne", start, net, trace)
            v = next(agents)
            if v in settled:
                continue
            move = move_for(v)
            if move is None:
                settled.add(v)
                continue
            # a best response leaves the mover with nothing better to do
            settled = {v} if move_rule == "best" else set()
        net = net.with_strategy(move.agent, move.after)
        trace.append(move)
        if net.profile in seen:
            return DynamicsOutcome("revisited", start, net, trace, seen[net.profile])
        seen[net.profile] = len(trace)


def replay(start: CapacityNetwork, moves: List[MoveRecord], kind) -> List[CapacityNetwork]:
    """Apply ``moves`` in order, checking each is a strictly improving move.

    Returns the visited networks (start included). Raises ``ValueError`` at the
    first inconsistent move.
    """
    kind = GameKind.parse(kind)
    states = [start]
    net = start
    for i, m in enumerate(moves):
        if net.strategies[m.agent] != m.before:
            raise ValueError(f"move {i}: agent {m.agent} does not currently play {m.before}")
        before = agent_utility(net, m.agent, kind)
        nxt = net.with_strategy(m.agent, m.after)
        after = agent_utility(nxt, m.agent, kind)
        if before != m.utility_before or after != m.utility_after:
            raise ValueError(f"move {i}: recorded utilities do not match recomputation")
        if not after > before:
            raise ValueError(f"move {i}: not strictly improving ({before} -> {after})")
        net = nxt
        states.append(net)
    return states


def verify_improving_cycle(start: CapacityNetwork, moves: List[MoveRecord], kind) -> bool:
    if not moves:
        return False
    try:
        states = replay(start, moves, kind)
    except ValueError:
        return False
    return states[-1].profile == start.profile


# --------------------------------------------------------------------------
# improving-response cycle search


@dataclass
class IrcResult:
    """Outcome of :func:`search_irc`.

    ``status`` is ``"cycle"`` (``start`` and ``moves`` form a verified labelled
    cycle), ``"none"`` (the whole state space was explored and is acyclic) or
    ``"inconclusive"`` (the state budget ran out first).
    """

    status: str
    n: int
    k: int
    kind: GameKind
    states_explored: int
    start: Optional[CapacityNetwork] = None
    moves: List[MoveRecord] = field(default_factory=list)

    @property
    def cycle(self) -> Optional[List[MoveRecord]]:
        return self.moves if self.status == "cycle" else None


def _all_profiles(n: int, k: int) -> Iterator[StrategyProfile]:
    tables = [[s for s, _ in _strategy_table(n, k, v)] for v in range(n)]
    for combo in itertools.product(*tables):
        yield StrategyProfile(n, k, combo)


MOVE_RULES = ("improving", "best")


def _improving_neighbours(net: CapacityNetwork, kind: GameKind, rule: str = "improving"):
    for v in range(net.n):
        cur_v = _current_score(net, v, kind)
        if rule == "best":
            strategy, u = best_response(net, v, kind)
            if strategy != net.strategies[v]:
                yield v, strategy
            continue
        for strategy, score in _candidates(net, v, kind):
            if score > cur_v:
                yield v, strategy


def _unroll(rep: CapacityNetwork, keys: List[tuple], kind: GameKind, rule: str):
    """Turn a cycle of isomorphism classes into a labelled cycle of moves."""
    m = len(keys)
    net = rep
    states = [net]
    moves: List[MoveRecord] = []
    seen = {net.profile: 0}
    j = 0
    while True:
        target = keys[(j + 1) % m]
        for v, strategy in _improving_neighbours(net, kind, rule):
            nxt = net.with_strategy(v, strategy)
            if canonical_encoding(nxt) == target:
                moves.append(
                    MoveRecord(
                        v,
                        net.strategies[v],
                        strategy,
                        agent_utility(net, v, kind),
                        agent_utility(nxt, v, kind),
                    )
                )
                net = nxt
                break
        else:  # pragma: no cover - would mean the class graph is inconsistent
            raise RuntimeError("no labelled move realises the class cycle")
        j += 1
        if net.profile in seen:
            first = seen[net.profile]
            return states[first], moves[first:]
        seen[net.profile] = len(moves)
        states.append(net)


def search_irc(
    n: int, k: int, kind, max_states: int = 10**7, move_rule: str = "improving"
) -> IrcResult:
    """Depth-first search of the improving-move graph for a cycle.

    States are isomorphism classes of labelled networks. With
    ``move_rule="improving"`` every improving move of every agent is an edge;
    ``"best"`` keeps only each agent's best response (with the tie-break of
    :func:`best_response`), i.e. it looks for best-response cycles. A back edge
    closes a cycle of classes, which is then unrolled into a cycle of labelled
    states by repeating it until a labelled state recurs. ``max_states`` bounds
    the number of classes expanded.
    """
    kind = GameKind.parse(kind)
    if move_rule not in MOVE_RULES:
        raise ValueError(f"unknown move rule {move_rule!r}; expected one of {MOVE_RULES}")
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    color: Dict[tuple, int] = {}  # 1 = on stack, 2 = finished
    reps: Dict[tuple, CapacityNetwork] = {}

    def successors(key):
        net = reps[key]
        for v, strategy in _improving_neighbours(net, kind, move_rule):
            enc, canon = canonical_form(net.with_strategy(v, strategy))
            reps.setdefault(enc, canon)
            yield enc

    roots = itertools.chain(
        [StrategyProfile.empty(n, k)], _all_profiles(n, k)
    )
    for profile in roots:
        enc, canon = canonical_form(build_network(profile))
        if enc in color:
            continue
        if len(color) >= max_states:
            return IrcResult("inconclusive", n, k, kind, len(color))
        reps.setdefault(enc, canon)
        color[enc] = 1
        path = [enc]
        stack = [successors(enc)]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = 2
                stack.pop()
                continue
            c = color.get(nxt)
            if c == 1:
                keys = path[path.index(nxt):]
                start, moves = _unroll(reps[nxt], keys, kind, move_rule)
                log.info("cycle found after %d classes", len(color))
                return IrcResult("cycle", n, k, kind, len(color), start, moves)
            if c == 2:
                continue
            if len(color) >= max_states:
                return IrcResult("inconclusive", n, k, kind, len(color))
            color[nxt] = 1
            path.append(nxt)
            stack.append(successors(nxt))
    return IrcResult("none", n, k, kind, len(color))


def find_irc(
    k: int, kind, n_max: int = 6, max_states: int = 10**7, move_rule: str = "improving"
) -> IrcResult:
    """Try ``n = k + 1 .. n_max`` in turn, sharing one state budget."""
    kind = GameKind.parse(kind)
    used = 0
    result = None
    for n in range(max(k + 1, 2), n_max + 1):
        result = search_irc(n, k, kind, max_states - used, move_rule)
        used += result.states_explored
        if result.status == "cycle":
            return result
        if result.status == "inconclusive":
            break
    if result is None:
        raise ValueError(f"no n in range for k={k}, n_max={n_max}")
    return result
