"""Exact 2x2 complex linear algebra and qubit state-pair metrics.

Everything here is closed form: eigenvalues of a Hermitian 2x2 matrix come
from the characteristic polynomial, the Uhlmann-Bures fidelity of two qubit
states from the Hubner formula, so no iterative decomposition is ever used.
All clamping tolerances are fixed at 1e-12 (double precision on O(1)
quantities).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalDegeneracyError

HERMITICITY_TOL = 1e-10
CLAMP_TOL = 1e-12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |e><g|
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |g><e|
IDENTITY = np.eye(2, dtype=complex)


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 matrix, got shape {a.shape}")
    return a


def _require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    dev = max(
        abs(m[1, 0] - np.conj(m[0, 1])),
        abs(m[0, 0].imag),
        abs(m[1, 1].imag),
    )
    if dev > tol:
        raise InvalidInputError(f"matrix is not Hermitian within {tol} (deviation {dev:.3e})")


@dataclass(frozen=True)
class BlochVector:
    """Real three-vector r with |r| <= 1, bijective with a qubit state."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm() > 1.0 + CLAMP_TOL:
            raise InvalidInputError(f"Bloch vector has |r| = {self.norm():.15f} > 1")

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def to_density(self) -> "DensityMatrix":
        # rho = (I + r.sigma)/2, so rho_01 = (x - i y)/2
        return DensityMatrix((1.0 + self.z) / 2.0, complex(self.x, -self.y) / 2.0)


@dataclass(frozen=True)
class DensityMatrix:
    """Qubit state stored as (rho_ee, rho_eg); the rest follows by hermiticity
    and unit trace.

    ``excited`` is the population of the upper level |z;+> and ``coherence``
    the off-diagonal element <z;+|rho|z;->.
    """

    excited: float
    coherence: complex

    def __post_init__(self):
        p = self.excited
        if not (-CLAMP_TOL <= p <= 1.0 + CLAMP_TOL):
            raise InvalidInputError(f"population {p} outside [0, 1]")
        if p * (1.0 - p) - abs(self.coherence) ** 2 < -CLAMP_TOL:
            raise InvalidInputError("state is not positive semidefinite")

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix":
        a = _as_matrix(m)
        _require_hermitian(a)
        if abs(a[0, 0] + a[1, 1] - 1.0) > CLAMP_TOL:
            raise InvalidInputError(f"trace is {np.trace(a)}, expected 1")
        return cls(float(a[0, 0].real), complex(a[0, 1]))

    @classmethod
    def pure(cls, theta: float, phi: float) -> "DensityMatrix":
        """Pure state at colatitude theta / azimuth phi on the Bloch sphere."""
        return BlochVector(
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        ).to_density()

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.excited, self.coherence],
                [np.conj(self.coherence), 1.0 - self.excited],
            ],
            dtype=complex,
        )

    @property
    def bloch(self) -> BlochVector:
        c = self.coherence
        return BlochVector(2.0 * c.real, -2.0 * c.imag, 2.0 * self.excited - 1.0)

    def det(self) -> float:
        return self.excited * (1.0 - self.excited) - abs(self.coherence) ** 2

    def is_pure(self, tol: float = CLAMP_TOL) -> bool:
        return self.det() <= tol


def basis_state(label: str) -> DensityMatrix:
    """Pure eigenstate of a Pauli operator: one of x+, x-, y+, y-, z+, z-."""
    axes = {
        "x+": (1.0, 0.0, 0.0), "x-": (-1.0, 0.0, 0.0),
        "y+": (0.0, 1.0, 0.0), "y-": (0.0, -1.0, 0.0),
        "z+": (0.0, 0.0, 1.0), "z-": (0.0, 0.0, -1.0),
    }
    if label not in axes:
        raise InvalidInputError(f"unknown state label {label!r}; expected one of {sorted(axes)}")
    return BlochVector(*axes[label]).to_density()


MAXIMALLY_MIXED = DensityMatrix(0.5, 0.0 + 0.0j)


def hermitian_eigenvalues(m) -> tuple[float, float]:
    """Eigenvalues of a Hermitian 2x2 matrix, descending, in closed form.

    tr/2 +- sqrt((tr/2)^2 - det); the discriminant is a sum of squares so it
    never goes negative beyond rounding.
    """
    a = _as_matrix(m)
    _require_hermitian(a)
    half_tr = (a[0, 0].real + a[1, 1].real) / 2.0
    half_diff = (a[0, 0].real - a[1, 1].real) / 2.0
    disc = math.sqrt(half_diff * half_diff + abs(a[0, 1]) ** 2)
    return half_tr + disc, half_tr - disc


def matrix_norms(m) -> tuple[float, float, float]:
    """(operator, Hilbert-Schmidt, trace) norms of a Hermitian 2x2 matrix.

    The ordering op <= hs <= tr always holds; for traceless input the three
    are in exact ratios 1 : sqrt(2) : 2.
    """
    e1, e2 = hermitian_eigenvalues(m)
    op = max(abs(e1), abs(e2))
    hs = math.sqrt(e1 * e1 + e2 * e2)
    tr = abs(e1) + abs(e2)
    return op, hs, tr


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Half the trace norm of rho1 - rho2; in [0, 1], zero iff equal."""
    e1, e2 = hermitian_eigenvalues(rho1.matrix - rho2.matrix)
    return 0.5 * (abs(e1) + abs(e2))


# determinants below this are construction rounding noise on pure states;
# sqrt amplifies such noise to ~1e-7, so they are snapped to exactly zero
_PURE_DET_SNAP = 1e-14


def bures_fidelity(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Uhlmann-Bures fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)).

    Uses the qubit closed form sqrt(Tr(rho1 rho2) + 2 sqrt(det rho1 det rho2)),
    exact for 2x2 states. Reduces to sqrt(<psi|rho2|psi>) when rho1 is pure.
    """
    overlap = float(np.real(np.trace(rho1.matrix @ rho2.matrix)))
    d1, d2 = rho1.det(), rho2.det()
    d1 = 0.0 if d1 <= _PURE_DET_SNAP else d1
    d2 = 0.0 if d2 <= _PURE_DET_SNAP else d2
    radicand = overlap + 2.0 * math.sqrt(d1 * d2)
    if radicand < -CLAMP_TOL:
        raise NumericalDegeneracyError(f"fidelity radicand {radicand:.3e} below -{CLAMP_TOL}")
    return min(math.sqrt(max(radicand, 0.0)), 1.0)


def bures_angle(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """arccos of the Bures fidelity, the geodesic distance in [0, pi/2].

    Evaluated as atan2(sin L, cos L) with the cancellation-free identity
    sin^2 L = [|r1 - r2|^2 + (sqrt(d1) - sqrt(d2))^2]/4 in Bloch coordinates
    (d = 1 - |r|^2), so nearby states give the angle without the precision
    loss of acos near 1; identical states give exactly zero.
    """
    fid = bures_fidelity(rho1, rho2)
    b1, b2 = rho1.bloch, rho2.bloch
    d1, d2 = 4.0 * rho1.det(), 4.0 * rho2.det()
    rd1 = math.sqrt(d1) if d1 > 4.0 * _PURE_DET_SNAP else 0.0
    rd2 = math.sqrt(d2) if d2 > 4.0 * _PURE_DET_SNAP else 0.0
    sin2 = 0.25 * ((b1.x - b2.x) ** 2 + (b1.y - b2.y) ** 2 + (b1.z - b2.z) ** 2
                   + (rd1 - rd2) ** 2)
    return math.atan2(math.sqrt(sin2), fid)


def quantumness(rho_a: DensityMatrix, rho_b: DensityMatrix) -> float:
    """Twice the squared Hilbert-Schmidt norm of [rho_a, rho_b].

    Zero iff the states commute (are diagonal in a common basis); bounded by
    1 for qubit states. Symmetric in its arguments.
    """
    a, b = rho_a.matrix, rho_b.matrix
    comm = a @ b - b @ a
    return 2.0 * float(np.real(np.trace(comm.conj().T @ comm)))


def commutator_hs_norm(rho: DensityMatrix, other) -> float:
    """Hilbert-Schmidt norm of [rho, other] for Hermitian ``other``."""
    a = rho.matrix
    b = _as_matrix(other)
    comm = a @ b - b @ a
    return math.sqrt(float(np.real(np.trace(comm.conj().T @ comm))))
