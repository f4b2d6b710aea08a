"""Risk assessment under advanced persistent threats."""

from aptrisk._core import (
    AttackStrategy,
    Error,
    Graph,
    HillClimbOptions,
    IntegrationError,
    ModelError,
    ParseError,
    RaModel,
    RiskReport,
    ScsParams,
    Trajectory,
    UsageError,
    assess_risk,
    complete_graph,
    contiguous_usa,
    cycle_graph,
    degree_weights,
    epsilon_neighbors,
    expected_loss,
    four_node_graph,
    generate_scale_free,
    generate_small_world,
    grid_oracle,
    heuristic_strategy,
    hill_climb,
    integrate,
    path_graph,
    random_strategy,
    read_edge_list,
    report_json,
    resolve_graph,
    star_graph,
    write_edge_list,
)

__all__ = [
    "AttackStrategy",
    "Error",
    "Graph",
    "HillClimbOptions",
    "IntegrationError",
    "ModelError",
    "ParseError",
    "RaModel",
    "RiskReport",
    "ScsParams",
    "Trajectory",
    "UsageError",
    "assess_risk",
    "complete_graph",
    "contiguous_usa",
    "cycle_graph",
    "degree_weights",
    "epsilon_neighbors",
    "expected_loss",
    "four_node_graph",
    "generate_scale_free",
    "generate_small_world",
    "grid_oracle",
    "heuristic_strategy",
    "hill_climb",
    "integrate",
    "path_graph",
    "random_strategy",
    "read_edge_list",
    "report_json",
    "resolve_graph",
    "star_graph",
    "write_edge_list",
]
