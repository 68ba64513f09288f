"""Speed-limit times and velocities evaluated on a sampled path.

Six lower bounds on the evolution time between the initial state and the
state reached at the chosen final time:

* ``tau_min``  - time at which the cumulative Bures arc length first equals
  the geodesic distance L between the endpoint states; its velocity L/tau_min
  depends on the final time only through the endpoint state.
* ``tau_av``   - L divided by the time-averaged Bures speed s(t)/t.
* ``tau_op/hs/tr`` - sin^2(L) divided by the time-averaged operator /
  Hilbert-Schmidt / trace norm of rho_dot (pure initial states only).
* ``tau_quant`` - sqrt(Q/2) divided by the time-averaged commutator norm,
  where Q is the quantumness of the endpoint pair.

When the endpoint distance (or Q) is below 1e-12 the corresponding bound is
defined as zero, resolving the 0/0 at t = 0 by its physical limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePathError,
    InternalConsistencyError,
    UnsupportedStateError,
)
from .model import ModelParams
from .path import (
    PathSamples,
    TimeGrid,
    arc_length,
    cumulative_norm_integrals,
    sample_path,
)
from .qubit import DensityMatrix

ZERO_DISTANCE_TOL = 1e-12
VALIDITY_SLACK = 1e-6


@dataclass(frozen=True)
class BoundsReport:
    """All six bound times (units 1/lambda) and velocities (units lambda)."""

    lambda_t_final: float
    bures_angle_L: float
    sin2_L: float
    quantumness_target: float    # sqrt(Q/2) for the endpoint pair
    tau_min: float
    tau_av: float
    tau_op: float
    tau_hs: float
    tau_tr: float
    tau_quant: float
    v_min: float
    v_av: float
    v_op: float
    v_hs: float
    v_tr: float
    v_quant: float

    def __post_init__(self):
        t = self.lambda_t_final
        slack = VALIDITY_SLACK * max(1.0, t)
        taus = (self.tau_min, self.tau_av, self.tau_op, self.tau_hs,
                self.tau_tr, self.tau_quant)
        if any(tau > t + slack for tau in taus):
            raise InternalConsistencyError(f"a bound exceeded the elapsed time: {taus} vs {t}")
        if not (self.tau_op >= self.tau_hs >= self.tau_tr):
            raise InternalConsistencyError("norm-bound ordering violated")
        # No ordering is enforced between tau_min and tau_av: tau_av divides
        # by the overall average speed, so a speed revival after the arc
        # length first reaches L (information backflow) can push tau_av
        # slightly below tau_min. Both remain valid lower bounds on t.
        vs = (self.v_min, self.v_av, self.v_op, self.v_hs, self.v_tr, self.v_quant)
        if any(v < 0.0 for v in vs):
            raise InternalConsistencyError("negative velocity")


def _first_crossing(t: np.ndarray, cumulative: np.ndarray, target: float) -> float:
    """Smallest time where the nondecreasing cumulative reaches ``target``,
    linearly interpolated inside the bracketing step."""
    j = int(np.searchsorted(cumulative, target))
    if j <= 0:
        return 0.0
    j = min(j, len(cumulative) - 1)
    rise = cumulative[j] - cumulative[j - 1]
    if rise <= 0.0:
        return float(t[j])
    return float(t[j - 1] + (target - cumulative[j - 1]) * (t[j] - t[j - 1]) / rise)


def tau_min(samples: PathSamples, lambda_t_final: float | None = None,
            s: np.ndarray | None = None) -> float:
    """Time to traverse, along the actual path, the endpoint geodesic length."""
    t = samples.lambda_t
    k = _final_index(samples, lambda_t_final)
    if s is None:
        s = arc_length(samples)
    L = float(samples.bures_angle_t[k])
    if L < ZERO_DISTANCE_TOL:
        return 0.0
    if s[k] < L - 1e-9:
        raise InternalConsistencyError(
            f"arc length {s[k]} shorter than the geodesic distance {L}"
        )
    return min(_first_crossing(t, s, L), float(t[k]))


def tau_av(samples: PathSamples, lambda_t_final: float | None = None,
           s: np.ndarray | None = None) -> tuple[float, float]:
    """(bound, average speed): L divided by the time-averaged Bures speed."""
    k = _final_index(samples, lambda_t_final)
    if s is None:
        s = arc_length(samples)
    t_final = float(samples.lambda_t[k])
    L = float(samples.bures_angle_t[k])
    v = s[k] / t_final if t_final > 0.0 else 0.0
    if L < ZERO_DISTANCE_TOL:
        return 0.0, v
    if v <= 0.0:
        raise DegeneratePathError("zero average speed with a finite endpoint distance")
    return L / v, v


def tau_norm_bounds(samples: PathSamples, lambda_t_final: float | None = None,
                    integrals=None) -> tuple[float, float, float, float, float, float]:
    """(tau_op, tau_hs, tau_tr, v_op, v_hs, v_tr) for a pure initial state."""
    if not samples.rho0.is_pure():
        raise UnsupportedStateError(
            "the operator/hs/trace-norm bounds are derived for pure initial "
            f"states; got det(rho0) = {samples.rho0.det():.3e}"
        )
    k = _final_index(samples, lambda_t_final)
    if integrals is None:
        integrals = cumulative_norm_integrals(samples)
    int_op, int_hs, int_tr, _ = integrals
    t_final = float(samples.lambda_t[k])
    L = float(samples.bures_angle_t[k])
    vs = tuple(arr[k] / t_final if t_final > 0.0 else 0.0
               for arr in (int_op, int_hs, int_tr))
    if L < ZERO_DISTANCE_TOL:
        return 0.0, 0.0, 0.0, *vs
    target = math.sin(L) ** 2
    if any(v <= 0.0 for v in vs):
        raise InternalConsistencyError("zero norm velocity with moving endpoint")
    return target / vs[0], target / vs[1], target / vs[2], *vs


def tau_quant(samples: PathSamples, lambda_t_final: float | None = None,
              integrals=None) -> tuple[float, float]:
    """(bound, velocity) from the endpoint quantumness and commutator norm."""
    k = _final_index(samples, lambda_t_final)
    if integrals is None:
        integrals = cumulative_norm_integrals(samples)
    int_comm = integrals[3]
    t_final = float(samples.lambda_t[k])
    v = int_comm[k] / t_final if t_final > 0.0 else 0.0
    q = float(samples.quantumness_t[k])
    if q < ZERO_DISTANCE_TOL:
        return 0.0, v
    if v <= 0.0:
        raise InternalConsistencyError("zero commutator velocity with nonzero quantumness")
    return math.sqrt(q / 2.0) / v, v


def _final_index(samples: PathSamples, lambda_t_final: float | None) -> int:
    if lambda_t_final is None:
        return len(samples) - 1
    t = samples.lambda_t
    k = int(np.argmin(np.abs(t - lambda_t_final)))
    local = t[min(k + 1, len(t) - 1)] - t[max(k - 1, 0)]
    if abs(t[k] - lambda_t_final) > max(0.75 * local, 1e-9):
        raise InternalConsistencyError(
            f"final time {lambda_t_final} not on the sampled grid (nearest {t[k]})"
        )
    return k


def bounds_report(p: ModelParams, rho0: DensityMatrix, lambda_t_final: float,
                  grid: TimeGrid | None = None, *,
                  check_resolution: bool = False) -> BoundsReport:
    """Sample one path and assemble every bound at its final time.

    With ``check_resolution`` the path is resampled on a once-refined grid and
    the two arc-length routes are required to agree there (raises
    ``GridResolutionError`` otherwise).
    """
    if grid is None:
        grid = TimeGrid.for_params(p, lambda_t_final)
    samples = sample_path(p, rho0, grid)
    if check_resolution:
        refined = sample_path(p, rho0, grid.refined())
        arc_length(refined, cross_check_rtol=1e-4)
    return report_from_samples(samples)


def report_from_samples(samples: PathSamples,
                        lambda_t_final: float | None = None) -> BoundsReport:
    k = _final_index(samples, lambda_t_final)
    t_final = float(samples.lambda_t[k])
    s = arc_length(samples)
    integrals = cumulative_norm_integrals(samples)
    L = float(samples.bures_angle_t[k])
    t_min = tau_min(samples, t_final, s)
    t_av, v_av = tau_av(samples, t_final, s)
    t_op, t_hs, t_tr, v_op, v_hs, v_tr = tau_norm_bounds(samples, t_final, integrals)
    t_q, v_q = tau_quant(samples, t_final, integrals)
    return BoundsReport(
        lambda_t_final=t_final,
        bures_angle_L=L,
        sin2_L=math.sin(L) ** 2,
        quantumness_target=math.sqrt(max(float(samples.quantumness_t[k]), 0.0) / 2.0),
        tau_min=t_min,
        tau_av=t_av,
        tau_op=t_op,
        tau_hs=t_hs,
        tau_tr=t_tr,
        tau_quant=t_q,
        v_min=L / t_min if t_min > 0.0 else 0.0,
        v_av=v_av,
        v_op=v_op,
        v_hs=v_hs,
        v_tr=v_tr,
        v_quant=v_q,
    )


def bounds_series(samples: PathSamples) -> dict[str, np.ndarray]:
    """Every bound and velocity at every grid time, vectorized.

    Restricting the cumulative arrays to an interior time reproduces exactly
    what a fresh run to that final time would give, so one long path yields
    the whole family of reports.
    """
    t = samples.lambda_t
    n = len(t)
    s = arc_length(samples)
    int_op, int_hs, int_tr, int_comm = cumulative_norm_integrals(samples)
    L = samples.bures_angle_t
    sin2 = np.sin(L) ** 2
    q_target = np.sqrt(np.maximum(samples.quantumness_t, 0.0) / 2.0)

    moved = L >= ZERO_DISTANCE_TOL
    safe_t = np.where(t > 0.0, t, 1.0)

    # first s-crossing of each endpoint distance, interpolated
    j = np.searchsorted(s, L)
    j = np.clip(j, 1, n - 1)
    rise = s[j] - s[j - 1]
    frac = np.where(rise > 0.0, (L - s[j - 1]) / np.where(rise > 0.0, rise, 1.0), 1.0)
    t_min = t[j - 1] + np.clip(frac, 0.0, 1.0) * (t[j] - t[j - 1])
    t_min = np.where(moved, np.minimum(t_min, t), 0.0)

    v_av = np.where(t > 0.0, s / safe_t, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_av = np.where(moved & (v_av > 0.0), L / v_av, 0.0)
        v_op = np.where(t > 0.0, int_op / safe_t, 0.0)
        t_op = np.where(moved & (v_op > 0.0), sin2 / v_op, 0.0)
        v_q = np.where(t > 0.0, int_comm / safe_t, 0.0)
        has_q = samples.quantumness_t >= ZERO_DISTANCE_TOL
        t_q = np.where(has_q & (v_q > 0.0), q_target / v_q, 0.0)
        v_min = np.where(t_min > 0.0, L / np.where(t_min > 0.0, t_min, 1.0), 0.0)
    return {
        "lambda_t": t,
        "bures_angle_L": L,
        "sin2_L": sin2,
        "quantumness_target": q_target,
        "tau_min": t_min,
        "tau_av": t_av,
        "tau_op": t_op,
        "tau_hs": t_op / math.sqrt(2.0),
        "tau_tr": t_op / 2.0,
        "tau_quant": t_q,
        "v_min": v_min,
        "v_av": v_av,
        "v_op": v_op,
        "v_hs": math.sqrt(2.0) * v_op,
        "v_tr": 2.0 * v_op,
        "v_quant": v_q,
    }
