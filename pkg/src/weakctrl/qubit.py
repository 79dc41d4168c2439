"""Exact state algebra for one and two qubits on dense complex matrices.

Pure states are length-2 complex vectors, density matrices are 2x2 (or 4x4
for a signal/meter pair) numpy arrays, Bloch vectors are (x, y, z) triples.
Validation is explicit through the ``validate_*`` helpers rather than baked
into every arithmetic call, so parameter sweeps stay cheap; tests validate,
hot loops don't.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

# Tolerances: algebraic identities vs. eigenvalue slack from rounding.
ATOL = 1e-12
EIG_SLACK = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = {"X": X, "Y": Y, "Z": Z}

# |+> and |-> in the logical basis; Z maps one to the other, which is what
# lets the phase-flip channel act nontrivially on the input pair.
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
KET_MINUS = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0)

MAXIMALLY_MIXED = 0.5 * I2


class ValidationError(ValueError):
    """A state or operator failed one of its structural invariants."""


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


def validate_pure(psi: np.ndarray, atol: float = ATOL) -> np.ndarray:
    """Check a pure-state vector (unit norm, length 2) and return it."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise ValidationError(f"pure state must be a length-2 vector, got shape {psi.shape}")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > atol:
        raise ValidationError(f"pure state norm^2 = {norm}, expected 1")
    return psi


def validate_density(rho: np.ndarray, atol: float = ATOL, eig_slack: float = EIG_SLACK) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a density matrix.

    Accepts any square dimension (2x2 single qubit, 4x4 joint state).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"density matrix must be square, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=atol):
        raise ValidationError("density matrix is not Hermitian")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > atol:
        raise ValidationError(f"density matrix trace = {trace}, expected 1")
    lowest = float(np.linalg.eigvalsh(rho)[0])
    if lowest < -eig_slack:
        raise ValidationError(f"density matrix has eigenvalue {lowest} < -{eig_slack}")
    return rho


def validate_unitary(u: np.ndarray, atol: float = ATOL) -> np.ndarray:
    """Check U U+ = 1 and return the operator."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"unitary must be square, got shape {u.shape}")
    deviation = float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
    if deviation > atol:
        raise ValidationError(f"operator deviates from unitarity by {deviation}")
    return u


def make_input_state(theta: float, sign: int) -> np.ndarray:
    """One of the two signal states cos(theta/2)|+> + sign*sin(theta/2)|->.

    theta in [0, pi/2] is half the Bloch-sphere angle between the pair; the
    overlap of the two states is cos(theta).  Their Bloch vectors are
    (cos(theta), 0, +/- sin(theta)).
    """
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return math.cos(theta / 2) * KET_PLUS + sign * math.sin(theta / 2) * KET_MINUS


def to_density(psi: np.ndarray) -> np.ndarray:
    """Rank-1 projector |psi><psi|."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def fidelity(psi: np.ndarray, rho: np.ndarray) -> float:
    """Overlap <psi|rho|psi> of a pure target with a (possibly mixed) state."""
    psi = validate_pure(psi)
    rho = validate_density(rho)
    value = complex(np.vdot(psi, rho @ psi))
    if abs(value.imag) > ATOL:
        raise ValidationError(f"fidelity has imaginary residue {value.imag}")
    return float(min(max(value.real, 0.0), 1.0))


def pure_overlap(psi: np.ndarray, rho: np.ndarray) -> float:
    """<psi|rho|psi> without validation or clipping.

    Used where rho may be a non-physical linear-inversion estimate.
    """
    return float(np.vdot(psi, np.asarray(rho) @ psi).real)


def bloch(rho: np.ndarray) -> BlochVector:
    """(tr rho X, tr rho Y, tr rho Z)."""
    rho = np.asarray(rho, dtype=complex)
    return BlochVector(
        float(np.trace(rho @ X).real),
        float(np.trace(rho @ Y).real),
        float(np.trace(rho @ Z).real),
    )


def density_from_bloch(r) -> np.ndarray:
    """Inverse of :func:`bloch`: (1 + x X + y Y + z Z) / 2."""
    x, y, z = (float(v) for v in r)
    norm = math.sqrt(x * x + y * y + z * z)
    if norm > 1.0 + EIG_SLACK:
        raise ValidationError(f"Bloch vector has length {norm} > 1")
    return 0.5 * (I2 + x * X + y * Y + z * Z)


def rotation_y(eta: float, sign: int) -> np.ndarray:
    """exp(sign * i * eta * Y); the inverse of ``rotation_y(eta, -sign)``.

    A real 2x2 rotation matrix; it turns Bloch vectors by 2*eta in the x-z
    plane (sign +1 carries +x toward +z).
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    c, s = math.cos(eta), math.sin(eta)
    return np.array([[c, sign * s], [-sign * s, c]], dtype=complex)


def apply_unitary(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """U rho U+ for a 2x2 or 4x4 operator of matching dimension."""
    u = np.asarray(u, dtype=complex)
    return u @ np.asarray(rho, dtype=complex) @ u.conj().T
