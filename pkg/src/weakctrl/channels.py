"""The dephasing channel and the tunable-strength two-outcome measurement.

The measurement is diagonal in the logical basis with operators

    M+ = diag(cos(chi/2), sin(chi/2)),   M- = diag(sin(chi/2), cos(chi/2))

so its POVM elements are (1 +/- cos(chi) Z) / 2.  cos(chi) is the
measurement strength: chi = 0 is a projective measurement, chi = pi/2
performs no measurement at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubit import MAXIMALLY_MIXED, Z

# Outcome probabilities below this are treated as exactly zero (the 0/0
# guard for projective measurement of an eigenstate).
DEGENERATE_PROB = 1e-15


def dephase(rho: np.ndarray, p: float) -> np.ndarray:
    """Phase-flip channel (1 - p) rho + p Z rho Z.

    Scales the x and y Bloch components by (1 - 2p) and leaves z alone.
    p is capped at 1/2, where the off-diagonals vanish entirely.
    """
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"noise probability must lie in [0, 1/2], got {p}")
    rho = np.asarray(rho, dtype=complex)
    return (1.0 - p) * rho + p * (Z @ rho @ Z)


@dataclass(frozen=True)
class KrausPair:
    """The two measurement operators at a given strength setting."""

    chi: float
    m_plus: np.ndarray
    m_minus: np.ndarray


@dataclass(frozen=True)
class MeasurementOutcome:
    sign: int
    probability: float
    post_state: np.ndarray
    degenerate: bool = False


def kraus_pair(chi: float) -> KrausPair:
    """Measurement operators at strength cos(chi), chi in [0, pi/2]."""
    if not 0.0 <= chi <= math.pi / 2:
        raise ValueError(f"chi must lie in [0, pi/2], got {chi}")
    c, s = math.cos(chi / 2), math.sin(chi / 2)
    m_plus = np.array([[c, 0.0], [0.0, s]])
    m_minus = np.array([[s, 0.0], [0.0, c]])
    m_plus.setflags(write=False)
    m_minus.setflags(write=False)
    return KrausPair(chi, m_plus, m_minus)


def povm_elements(pair: KrausPair) -> tuple[np.ndarray, np.ndarray]:
    """POVM elements M+ M for both outcomes; they sum to the identity."""
    return (pair.m_plus.T @ pair.m_plus, pair.m_minus.T @ pair.m_minus)


def measure(rho: np.ndarray, chi: float) -> tuple[MeasurementOutcome, MeasurementOutcome]:
    """Both outcome branches of the strength-cos(chi) measurement.

    Each branch carries its Born probability and renormalised post state.
    A zero-probability branch is returned with the maximally mixed state
    and ``degenerate=True``; callers skip such branches.
    """
    pair = kraus_pair(chi)
    rho = np.asarray(rho, dtype=complex)
    outcomes = []
    for sign, m in ((+1, pair.m_plus), (-1, pair.m_minus)):
        unnorm = m @ rho @ m  # m is real diagonal, so m == m+
        prob = float(np.trace(unnorm).real)
        if prob < DEGENERATE_PROB:
            outcomes.append(MeasurementOutcome(sign, 0.0, MAXIMALLY_MIXED, degenerate=True))
        else:
            outcomes.append(MeasurementOutcome(sign, prob, unnorm / prob))
    return outcomes[0], outcomes[1]


def sample_outcome(rho: np.ndarray, chi: float, rng: np.random.Generator) -> MeasurementOutcome:
    """Draw one outcome with Born probabilities from a caller-owned stream.

    Consumes exactly one uniform variate per call, so a fixed seed gives a
    reproducible outcome sequence.
    """
    plus, minus = measure(rho, chi)
    return plus if rng.random() < plus.probability else minus
