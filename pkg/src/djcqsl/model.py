"""Closed-form reduced dynamics of the damped Jaynes-Cummings qubit.

A two-level system coupled to a zero-temperature bosonic reservoir with a
Lorentzian spectral density has an exactly solvable reduced evolution: the
whole channel is carried by one complex amplitude G(t) multiplying the
coherence, with |G(t)|^2 multiplying the excited population. After measuring
time in units of the spectral width (u = lambda t, hbar = 1) the dynamics
depends on exactly two dimensionless numbers, the effective coupling
gamma0/lambda and the detuning delta/lambda.

The decay rate gamma_t diverges at zeros of G (strong coupling), so nothing
here ever integrates the master equation: states, derivatives and all path
quantities come from G and dG/du directly. ``master_rhs`` exists to
cross-check that representation on the subdomain where the rate is finite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    RateSingularityError,
)
from .qubit import SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, DensityMatrix

# |G| at or below this is treated as a propagator zero: the decay rate is
# singular there and rate samples are flagged invalid.
G_SINGULAR_FLOOR = 1e-8
OMEGA_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """The two dimensionless numbers controlling the channel."""

    gamma0_over_lambda: float
    delta_over_lambda: float

    def __post_init__(self):
        g, d = self.gamma0_over_lambda, self.delta_over_lambda
        if not (math.isfinite(g) and math.isfinite(d)):
            raise InvalidInputError("model parameters must be finite")
        if g < 0.0:
            raise InvalidInputError(f"coupling gamma0/lambda = {g} must be >= 0")

    @property
    def alpha(self) -> complex:
        return complex(1.0, -self.delta_over_lambda)

    @property
    def omega_over_lambda(self) -> complex:
        """Complex rate sqrt(alpha^2 - 2 gamma0/lambda), principal branch."""
        return cmath.sqrt(self.alpha * self.alpha - 2.0 * self.gamma0_over_lambda)


@dataclass(frozen=True)
class PropagatorSample:
    lambda_t: float
    G: complex
    G_dot: complex           # dG / d(lambda t)
    omega_over_lambda: complex


@dataclass(frozen=True)
class RateSample:
    lambda_t: float
    gamma_t_over_lambda: float
    s_t_over_lambda: float   # Lamb-shift rate
    valid: bool              # False near zeros of G where the rates diverge


def propagator(p: ModelParams, lambda_t: float) -> PropagatorSample:
    """Evaluate G and dG/d(lambda t) at one time."""
    if lambda_t < 0.0:
        raise InvalidInputError(f"lambda_t = {lambda_t} must be >= 0")
    G, G_dot = _kernels.propagator_table(
        p.gamma0_over_lambda, p.delta_over_lambda, np.array([lambda_t])
    )
    return PropagatorSample(lambda_t, complex(G[0]), complex(G_dot[0]), p.omega_over_lambda)


def _gamma_closed_form(p: ModelParams, lambda_t: float) -> float:
    """gamma_t/lambda via the explicit sinh/cosh ratio (independent route)."""
    g = p.gamma0_over_lambda
    alpha = p.alpha
    om = p.omega_over_lambda
    x = om * lambda_t / 2.0
    if abs(om) < OMEGA_DEGENERATE_TOL:
        # removable: sinh(x)/om -> (u/2) sinhc(x) with sinhc -> 1
        s_over_om = lambda_t / 2.0
        return g * (2.0 * s_over_om / (1.0 + alpha * s_over_om)).real
    th = cmath.tanh(x)  # stable for any Re(x)
    return g * (2.0 * th / (om + alpha * th)).real


def rates(p: ModelParams, lambda_t: float) -> RateSample:
    """Time-dependent decay rate and Lamb-shift rate.

    gamma_t/lambda = -2 Re(G_dot/G) and s_t/lambda = -2 Im(G_dot/G); the decay
    rate is also evaluated through its explicit closed form and the two routes
    must agree wherever |G| is clear of zero.
    """
    sample = propagator(p, lambda_t)
    a = abs(sample.G)
    if a <= G_SINGULAR_FLOOR:
        ratio = sample.G_dot / sample.G if a > 0.0 else complex(math.nan, math.nan)
        return RateSample(lambda_t, -2.0 * ratio.real, -2.0 * ratio.imag, False)
    ratio = sample.G_dot / sample.G
    gamma = -2.0 * ratio.real
    closed = _gamma_closed_form(p, lambda_t)
    if abs(closed - gamma) > 1e-9 * max(1.0, abs(gamma)):
        raise InternalConsistencyError(
            f"decay-rate routes disagree at lambda_t={lambda_t}: {gamma} vs {closed}"
        )
    return RateSample(lambda_t, gamma, -2.0 * ratio.imag, True)


def evolve(p: ModelParams, rho0: DensityMatrix, lambda_t: float) -> DensityMatrix:
    """Apply the channel: population scales by |G|^2, coherence by G."""
    sample = propagator(p, lambda_t)
    try:
        return DensityMatrix(
            abs(sample.G) ** 2 * rho0.excited, sample.G * rho0.coherence
        )
    except InvalidInputError as exc:  # |G| <= 1 makes this unreachable
        raise InternalConsistencyError(f"channel output invalid: {exc}") from exc


def state_derivative(p: ModelParams, rho0: DensityMatrix, lambda_t: float) -> np.ndarray:
    """d rho_t / d(lambda t), a traceless Hermitian matrix, in closed form."""
    sample = propagator(p, lambda_t)
    pop_dot = 2.0 * (np.conj(sample.G) * sample.G_dot).real
    dee = pop_dot * rho0.excited
    dcoh = sample.G_dot * rho0.coherence
    return np.array([[dee, dcoh], [np.conj(dcoh), -dee]], dtype=complex)


def master_rhs(p: ModelParams, rho: DensityMatrix, lambda_t: float) -> np.ndarray:
    """Lindblad-form right-hand side with the time-dependent rates.

    The Lamb-shift Hamiltonian is (s_t/2) sigma_+ sigma_-; with that
    convention the right-hand side evaluated on the evolved state equals the
    channel derivative identically. Raises near zeros of G, where the rates
    are singular; use ``state_derivative`` there instead.
    """
    r = rates(p, lambda_t)
    if not r.valid:
        raise RateSingularityError(
            f"rates singular at lambda_t={lambda_t} (|G| <= {G_SINGULAR_FLOOR}); "
            "use state_derivative, which stays finite across zeros of G"
        )
    m = rho.matrix
    number_op = SIGMA_PLUS @ SIGMA_MINUS  # |e><e|
    hamiltonian = -0.5j * r.s_t_over_lambda * (number_op @ m - m @ number_op)
    jump = SIGMA_MINUS @ m @ SIGMA_PLUS
    dissipator = r.gamma_t_over_lambda * (
        jump - 0.5 * (number_op @ m + m @ number_op)
    )
    return hamiltonian + dissipator


def stationary_state() -> DensityMatrix:
    """The zero-temperature fixed point |z;-><z;-| reached from any state."""
    return DensityMatrix(0.0, 0.0 + 0.0j)
