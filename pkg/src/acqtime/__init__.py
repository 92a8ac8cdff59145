"""Acquaintance process on graphs.

Agents sit one per vertex; agents sharing an edge are acquainted, and
stay so.  Each round either swaps the occupants of a matching (the
standard model) or relocates everyone by a bijection (the free-placement
model).  This package bundles the process engine, constructive strategy
generators, exact solvers for tiny graphs, the bound formulas and a
reproducible experiment harness.
"""

from .bounds import (
    BoundsReport,
    compute_bounds_report,
    exposure_split,
    gnp_lower_threshold,
    log_one_over_q,
    reference_uppers,
    team_k,
    trivial_lower,
)
from .engine import (
    MODEL_MATCHING,
    MODEL_PLACEMENT,
    ProcessState,
    RunReport,
    Schedule,
    apply_matching,
    apply_placement,
    final_placement,
    init_state,
    matching_to_placement,
    pair_index,
    run_schedule,
    total_pairs,
)
from .errors import (
    AcqtimeError,
    DegenerateP,
    DisconnectedGraph,
    IllegalMatching,
    NoHamiltonianPath,
    NotABijection,
    PBelowThreshold,
    SizeMismatch,
    TooLarge,
    ZeroEdges,
)
from .exact import (
    PairTrace,
    cover_number,
    enumerate_connected_graphs,
    exact_ac,
    exact_bac,
    pair_trace,
)
from .experiments import (
    ExperimentConfig,
    ResultRow,
    cell_seed,
    resolve_p,
    rows_to_csv,
    run_cell,
    run_experiment,
    write_csv,
)
from .graphs import (
    Caterpillar,
    Graph,
    Tree,
    find_hamiltonian_path,
    find_spine,
    gnp_sample,
    is_connected,
    is_hamiltonian_path,
    largest_caterpillar,
    max_dist,
    random_caterpillar,
    random_tree,
    spanning_tree,
)
from .strategies import (
    RouteRequest,
    TeamPlan,
    caterpillar_strategy,
    general_graph_strategy,
    gnp_team_strategy,
    iter_caterpillar_strategy,
    iter_tree_strategy,
    oscillation_schedule,
    route_rounds,
    team_plan,
    tree_route,
    tree_strategy,
)

__version__ = "0.1.0"
