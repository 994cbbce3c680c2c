"""Stochastic-geometry toolkit for coverage and handover analysis of
aerial terminals served by clustered ground base stations.

The package pairs closed-form / quadrature evaluators (`analytic`,
`mobility`) with brute-force Monte Carlo oracles (`montecarlo`) built on the
same geometric primitives (`geometry`, `channel`), plus a sweep CLI (`cli`).
"""

from .geometry import (
    ClusterGeometry,
    Environment,
    NetworkConfig,
    PointField,
    Window,
    expected_serving_count,
    hex_cluster_index,
    sample_bpp_serving_set,
    sample_ppp,
    serving_count_pmf,
)
from .channel import (
    FadingSpec,
    LinkGeometry,
    LosTable,
    blockage_step,
    los_probability,
    path_gain,
    sample_power_fading,
)
from .analytic import (
    GammaSurrogate,
    StaticScenario,
    ToeplitzEntries,
    conditional_coverage_toeplitz,
    coverage_static_comp_lb,
    coverage_static_comp_ub,
    coverage_static_gue,
    coverage_static_nearest,
    gamma_moment_match,
    log_laplace_interference,
)
from .mobility import (
    MobilityModel,
    Trajectory,
    handover_prob_comp,
    handover_prob_nearest_ub,
    handover_rate_comp,
    handover_rate_nearest,
    coverage_mobile_comp,
    coverage_mobile_nearest,
    mean_altitude,
    mean_cos_elevation,
    mean_transition_length,
    omega_factor,
    pdf_transition_length,
    sample_trajectory,
    steady_state_altitude_pdf,
)
from .montecarlo import (
    McEstimate,
    SirSample,
    coverage_estimate,
    mc_handover_count,
    mc_mobile_coverage,
    mc_sir_comp,
    mc_sir_gue,
    mc_sir_nearest,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterGeometry",
    "Environment",
    "FadingSpec",
    "GammaSurrogate",
    "LinkGeometry",
    "LosTable",
    "McEstimate",
    "MobilityModel",
    "NetworkConfig",
    "PointField",
    "SirSample",
    "StaticScenario",
    "ToeplitzEntries",
    "Trajectory",
    "Window",
    "blockage_step",
    "conditional_coverage_toeplitz",
    "coverage_estimate",
    "coverage_mobile_comp",
    "coverage_mobile_nearest",
    "coverage_static_comp_lb",
    "coverage_static_comp_ub",
    "coverage_static_gue",
    "coverage_static_nearest",
    "expected_serving_count",
    "gamma_moment_match",
    "handover_prob_comp",
    "handover_prob_nearest_ub",
    "handover_rate_comp",
    "handover_rate_nearest",
    "hex_cluster_index",
    "log_laplace_interference",
    "los_probability",
    "mc_handover_count",
    "mc_mobile_coverage",
    "mc_sir_comp",
    "mc_sir_gue",
    "mc_sir_nearest",
    "mean_altitude",
    "mean_cos_elevation",
    "mean_transition_length",
    "omega_factor",
    "path_gain",
    "pdf_transition_length",
    "sample_bpp_serving_set",
    "sample_ppp",
    "sample_trajectory",
    "serving_count_pmf",
    "steady_state_altitude_pdf",
    "__version__",
]
