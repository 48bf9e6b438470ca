"""magcoh: steady-state quantum coherence and its Barnett-effect nonreciprocity
in a driven photon-magnon-phonon system.

The pipeline is: closed-form steady state -> linearized drift/diffusion ->
stability -> Lyapunov covariance -> Gaussian relative-entropy coherence,
with a sweep engine that pairs opposite Barnett shifts into contrast ratios.
"""

__version__ = "0.1.0"

from .params import (
    CONSTANTS,
    BathOccupations,
    PhysicalConstants,
    PhysicalParams,
    baseline_params,
    bath_occupations,
    drive_amplitude,
    thermal_occupation,
)
from .steady import NonConvergenceError, SteadyState, simplified_ms, solve_steady, solve_steady_bare
from .model import (
    DEFAULT_ORDERING,
    LinearizedModel,
    QuadratureOrdering,
    build_diffusion,
    build_drift,
    effective_couplings,
    linearize,
    stability,
)
from .covariance import (
    CovarianceState,
    ResidualError,
    UnstableSystemError,
    displacement,
    integrate_lyapunov_ode,
    solve_lyapunov,
)
from .coherence import (
    CoherenceReport,
    coherence_report,
    entropy_F,
    mode_block,
    single_mode_coherence,
    symplectic_form,
    symplectic_spectrum,
    to_unit_convention,
    total_coherence,
)
from .sweep import (
    PairRecord,
    PointRecord,
    SweepAxis,
    SweepSpec,
    contrast_ratio,
    evaluate_pair,
    evaluate_point,
    figure_preset,
    run_sweep,
)
from .config import ConfigError, format_config, parse_config
from .dataset import emit_dataset

__all__ = [
    "BathOccupations",
    "CoherenceReport",
    "ConfigError",
    "CONSTANTS",
    "CovarianceState",
    "DEFAULT_ORDERING",
    "LinearizedModel",
    "NonConvergenceError",
    "PairRecord",
    "PhysicalConstants",
    "PhysicalParams",
    "PointRecord",
    "QuadratureOrdering",
    "ResidualError",
    "SteadyState",
    "SweepAxis",
    "SweepSpec",
    "UnstableSystemError",
    "baseline_params",
    "bath_occupations",
    "build_diffusion",
    "build_drift",
    "coherence_report",
    "contrast_ratio",
    "displacement",
    "drive_amplitude",
    "effective_couplings",
    "emit_dataset",
    "entropy_F",
    "evaluate_pair",
    "evaluate_point",
    "figure_preset",
    "format_config",
    "integrate_lyapunov_ode",
    "linearize",
    "mode_block",
    "parse_config",
    "run_sweep",
    "simplified_ms",
    "single_mode_coherence",
    "solve_lyapunov",
    "solve_steady",
    "solve_steady_bare",
    "stability",
    "symplectic_form",
    "symplectic_spectrum",
    "thermal_occupation",
    "to_unit_convention",
    "total_coherence",
]
