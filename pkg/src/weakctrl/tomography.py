"""Simulated coincidence-count tomography with plain linear inversion.

Six projective settings (both outcomes of the X, Y and Z bases) with the
integration time split equally across the three bases.  Counts are
Poissonian; reconstruction inverts the per-basis count asymmetries into
Bloch components.  Non-physical reconstructions (negative eigenvalue from
finite statistics) are reported as such, never silently projected;
eigenvalue clipping is available behind a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubit import EIG_SLACK, I2, PAULI, bloch, to_density

BASES = ("X", "Y", "Z")


class ReconstructionError(ValueError):
    """Counts are unusable for linear inversion (e.g. an empty basis)."""


@dataclass(frozen=True)
class MeasurementSetting:
    basis: str
    outcome: int

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}, got {self.basis!r}")
        if self.outcome not in (+1, -1):
            raise ValueError(f"outcome must be +1 or -1, got {self.outcome}")


SETTINGS = tuple(MeasurementSetting(b, o) for b in BASES for o in (+1, -1))


@dataclass(frozen=True)
class CountRecord:
    setting: MeasurementSetting
    counts: float  # integer for simulated data; float for expectation-level records
    duration: float

    def __post_init__(self):
        if self.counts < 0:
            raise ValueError(f"counts must be non-negative, got {self.counts}")


@dataclass(frozen=True)
class ReconstructedState:
    """Linear-inversion estimate; ``physical`` is False when the raw
    inversion has an eigenvalue below the rounding slack."""

    matrix: np.ndarray
    min_eigenvalue: float
    physical: bool


def setting_projector(setting: MeasurementSetting) -> np.ndarray:
    return 0.5 * (I2 + setting.outcome * PAULI[setting.basis])


def expectation_counts(rho: np.ndarray, rate: float, duration: float) -> list[CountRecord]:
    """Noise-free expected counter values for all six settings.

    Each basis gets duration/3; the two outcomes of a basis share that
    slot (both analyser ports count simultaneously).
    """
    if rate <= 0.0 or duration <= 0.0:
        raise ValueError("rate and duration must be positive")
    rho = np.asarray(rho, dtype=complex)
    per_basis = rate * duration / 3.0
    return [CountRecord(s, per_basis * float(np.trace(setting_projector(s) @ rho).real), duration)
            for s in SETTINGS]


def simulate_counts(rho: np.ndarray, rate: float, duration: float,
                    rng: np.random.Generator) -> list[CountRecord]:
    """Poisson draws around the expectation counters, in fixed setting order."""
    expected = expectation_counts(rho, rate, duration)
    means = np.array([max(r.counts, 0.0) for r in expected])
    draws = rng.poisson(means)
    return [CountRecord(r.setting, int(n), duration) for r, n in zip(expected, draws)]


def mix_ensemble_counts(counts_clean: list[CountRecord], counts_flipped: list[CountRecord],
                        p: float) -> list[CountRecord]:
    """Combine per-setting count rates of the clean and phase-flipped runs.

    The weighted sum (1-p) clean + p flipped is rounded to the nearest
    integer, mimicking combining measured rates rather than re-measuring
    the mixed ensemble.
    """
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"noise probability must lie in [0, 1/2], got {p}")
    if len(counts_clean) != len(counts_flipped):
        raise ValueError("count lists differ in length")
    mixed = []
    for clean, flipped in zip(counts_clean, counts_flipped):
        if clean.setting != flipped.setting:
            raise ValueError(f"setting mismatch: {clean.setting} vs {flipped.setting}")
        if clean.duration != flipped.duration:
            raise ValueError(f"duration mismatch for {clean.setting}")
        combined = round((1.0 - p) * clean.counts + p * flipped.counts)
        mixed.append(CountRecord(clean.setting, combined, clean.duration))
    return mixed


def _basis_totals(records: list[CountRecord]) -> dict[str, dict[int, float]]:
    table: dict[str, dict[int, float]] = {b: {} for b in BASES}
    for rec in records:
        table[rec.setting.basis][rec.setting.outcome] = \
            table[rec.setting.basis].get(rec.setting.outcome, 0.0) + rec.counts
    return table


def linear_inversion(records: list[CountRecord], clip: bool = False) -> ReconstructedState:
    """Bloch components from normalised count asymmetries, one per basis.

    ``clip=True`` additionally projects negative eigenvalues to zero and
    renormalises the returned matrix; the reported ``min_eigenvalue`` and
    ``physical`` flag always describe the raw inversion.
    """
    table = _basis_totals(records)
    r = []
    for b in BASES:
        if +1 not in table[b] or -1 not in table[b]:
            raise ReconstructionError(f"both outcomes of basis {b} are required")
        total = table[b][+1] + table[b][-1]
        if total <= 0:
            raise ReconstructionError(f"basis {b} has zero total counts")
        r.append((table[b][+1] - table[b][-1]) / total)
    rho = 0.5 * (I2 + r[0] * PAULI["X"] + r[1] * PAULI["Y"] + r[2] * PAULI["Z"])
    eigenvalues, vectors = np.linalg.eigh(rho)
    min_eig = float(eigenvalues[0])
    physical = min_eig >= -EIG_SLACK
    if clip and min_eig < 0.0:
        clipped = np.clip(eigenvalues, 0.0, None)
        clipped /= clipped.sum()
        rho = (vectors * clipped) @ vectors.conj().T
    return ReconstructedState(rho, min_eig, physical)


def fidelity_with_error(psi_target: np.ndarray, records: list[CountRecord],
                        n_resamples: int, rng: np.random.Generator) -> tuple[float, float]:
    """Parametric bootstrap of the fidelity against a pure target.

    Counts are resampled Poisson around the observed values, re-inverted
    and re-scored; the mean and standard deviation over the resamples are
    returned.  Resampled estimates use the raw (possibly non-physical)
    inversion, so individual values may stray slightly outside [0, 1].
    """
    if n_resamples < 100:
        raise ValueError(f"need at least 100 resamples, got {n_resamples}")
    # Validate the observed counts once (raises on an empty basis).
    linear_inversion(records)

    table = _basis_totals(records)
    observed = np.array([table[b][o] for b in BASES for o in (+1, -1)], dtype=float)
    draws = rng.poisson(observed, size=(n_resamples, 6)).astype(float)
    plus, minus = draws[:, 0::2], draws[:, 1::2]
    totals = plus + minus
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(totals > 0, (plus - minus) / totals, 0.0)
    target = np.array(bloch(to_density(psi_target)))
    f = 0.5 * (1.0 + r @ target)
    return float(f.mean()), float(f.std(ddof=1))
