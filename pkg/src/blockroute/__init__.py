"""Block permutation routing of rigid patches on expander host graphs."""
from .blocks import BlockConfiguration, BlockTemplate, deformation_energy, place_blocks
from .errors import (
    BlockRouteError,
    BudgetInfeasibleError,
    ConfigError,
    ConvergenceError,
    GenerationError,
    HopInfeasibleError,
    PlacementError,
    QuotientDisconnectedError,
    RoutingError,
)
from .ft_budget import (
    FtBudget,
    FtParams,
    compose_syndrome_budget,
    k_max_chernoff,
    k_max_exact,
    k_max_report,
    logical_error_rate,
    operating_point_table,
    total_logical_error,
)
from .graphs import HostGraph, Hypergraph, bfs_distances, clique_expansion, generate_regular, set_distance
from .quotient import (
    QuotientGraph,
    build_quotient,
    lifted_conductance,
    min_degree_for_regime,
    regime_check,
    sweep_cut,
)
from .routing import (
    HopPlan,
    RoutingOutcome,
    ShortestPaths,
    check_matchings,
    check_paths,
    check_schedule,
    decompose_hop_into_matchings,
    plan_block_hop,
    schedule_greedy,
    valiant_route,
)
from .spectral import SpectralSummary, alon_boppana_reference, extreme_eigenvalues, spectral_ratio

__version__ = "0.1.0"
