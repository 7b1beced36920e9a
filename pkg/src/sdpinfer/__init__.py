"""Two-stage SDP approach to partial label recovery on graphs.

Subpackages cover graph families and statistics (:mod:`sdpinfer.graphs`),
the noisy observation model (:mod:`sdpinfer.generate`), the low-rank SDP
solver with a brute-force oracle (:mod:`sdpinfer.sdp`), KKT dual
certificates (:mod:`sdpinfer.certificate`), closed-form recovery bounds
(:mod:`sdpinfer.bounds`), and the Monte-Carlo experiment harness
(:mod:`sdpinfer.pipeline`).
"""

from sdpinfer.graphs import Graph, GraphStats, complete_graph, grid_graph, random_regular_graph, graph_stats
from sdpinfer.generate import Observation, sample_labels, observe_edges, observe_nodes
from sdpinfer.sdp import SolverConfig, SdpSolution, objective, solve_sdp, round_solution, brute_force_max
from sdpinfer.certificate import (
    SignedLaplacian,
    CertificateReport,
    signed_degree,
    signed_laplacian,
    lambda2,
    kkt_check,
    expected_signed_laplacian,
)
from sdpinfer.bounds import (
    RateInputs,
    ChernoffInputs,
    epsilon_rate,
    recovery_prob_bound,
    mixed_chernoff_bound,
    stage2_error_bound,
    stage2_error_bound_hoeffding,
    expander_conditions,
    validate_chernoff_monte_carlo,
)
from sdpinfer.pipeline import TrialResult, SweepSpec, SimulationTable, run_trial, run_sweep, emit_csv, emit_plot

__all__ = [
    "Graph",
    "GraphStats",
    "complete_graph",
    "grid_graph",
    "random_regular_graph",
    "graph_stats",
    "Observation",
    "sample_labels",
    "observe_edges",
    "observe_nodes",
    "SolverConfig",
    "SdpSolution",
    "objective",
    "solve_sdp",
    "round_solution",
    "brute_force_max",
    "SignedLaplacian",
    "CertificateReport",
    "signed_degree",
    "signed_laplacian",
    "lambda2",
    "kkt_check",
    "expected_signed_laplacian",
    "RateInputs",
    "ChernoffInputs",
    "epsilon_rate",
    "recovery_prob_bound",
    "mixed_chernoff_bound",
    "stage2_error_bound",
    "stage2_error_bound_hoeffding",
    "expander_conditions",
    "validate_chernoff_monte_carlo",
    "TrialResult",
    "SweepSpec",
    "SimulationTable",
    "run_trial",
    "run_sweep",
    "emit_csv",
    "emit_plot",
]
