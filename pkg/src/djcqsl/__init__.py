"""Damped Jaynes-Cummings qubit channel: closed-form dynamics, quantum
speed-limit bounds, and non-Markovianity measures with a sweep CLI."""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend
from .bounds import BoundsReport, bounds_report, bounds_series, report_from_samples
from .errors import (
    DegeneratePathError,
    DjcqslError,
    GridResolutionError,
    InternalConsistencyError,
    InvalidInputError,
    NumericalDegeneracyError,
    RateSingularityError,
    UnsupportedStateError,
)
from .model import (
    ModelParams,
    PropagatorSample,
    RateSample,
    evolve,
    master_rhs,
    propagator,
    rates,
    state_derivative,
    stationary_state,
)
from .nonmarkov import (
    NonMarkovReport,
    blp_measure,
    blp_pair_oracle,
    count_sign_changes,
    nonmarkov_report,
    path_measure,
    sigma_series,
    sigma_tilde_series,
)
from .path import (
    PathSample,
    PathSamples,
    TimeGrid,
    arc_length,
    cumulative_norm_integrals,
    precession_path,
    sample_path,
)
from .qubit import (
    BlochVector,
    DensityMatrix,
    basis_state,
    bures_angle,
    bures_fidelity,
    hermitian_eigenvalues,
    matrix_norms,
    quantumness,
    trace_distance,
)
from .sweep import (
    AxisSpec,
    GridSpec,
    SweepTable,
    parse_grid_spec,
    parse_initial,
    run_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
