"""Phase-space simulator for pumped, damped Bose-Hubbard networks.

The package integrates truncated-Wigner stochastic trajectories for small
atomic networks (cavity-like wells with coherent pumping and single-well
loss), accumulates symmetric-ordering moments, and evaluates quadrature
squeezing plus bipartite and tripartite entanglement and steering criteria.
A dense master-equation engine on a truncated Fock basis provides exact
small-system cross-validation.
"""

from .analytic import SteadyState, steady_loss_at_pumped, steady_numbers_loss_at_second
from .correlations import (
    CorrelationReport,
    CriterionCurve,
    classify,
    duan_simon,
    evaluate_report,
    obr,
    optimize_angle,
    quad_stats,
    reid_epr,
    squeezing,
    vlf_pair,
    vlf_triple,
)
from .dynamics import IntegratorConfig, TrajectoryState, run_meanfield, sample_vacuum, step
from .ensemble import (
    ErrorEstimate,
    GaussianMoments,
    MomentAccumulator,
    estimate_error,
    moments_at,
    population,
    population_series,
    replica_moments_at,
    run_ensemble,
)
from .model import (
    DampedWell,
    ParameterError,
    SystemSpec,
    TrimerConfig,
    drift,
    make_trimer,
    noise_amplitudes,
)
from .oracle import DensityMatrix, FockConfig, build_generators, evolve, moments_from_rho, run_oracle

__version__ = "0.1.0"
