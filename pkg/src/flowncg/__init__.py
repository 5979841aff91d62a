"""Flow-based network creation games.

Agents with a uniform integer budget buy capacitated edges; utilities are
max-flow values on the undirected view. The package evaluates both utility
models exactly, computes best responses, checks equilibria, runs dynamics,
builds the known equilibrium families and runs exhaustive small censuses.
"""
from .network import (
    CapacityNetwork,
    InfeasibleError,
    Strategy,
    StrategyProfile,
    apply_strategy,
    build_network,
    degree,
    network_from_edges,
)
from .connectivity import (
    GomoryHuTree,
    all_pairs_connectivity,
    global_connectivity,
    local_connectivity,
    min_cut_partition,
)
from .games import GameKind, Utility, agent_utility, compare, social_utility
from .dynamics import (
    DynamicsOutcome,
    IrcResult,
    MoveRecord,
    best_response,
    enumerate_strategies,
    find_irc,
    is_nash,
    run_dynamics,
    search_irc,
)
from .constructions import (
    build_avg_game_circle_ne,
    build_avg_game_star_ne,
    build_directed_cycle,
    build_figure1,
    build_min_game_worst_ne,
    build_opt,
)
from .analysis import audit_ne, enumerate_profiles, find_cluster, ne_census

__version__ = "0.1.0"
