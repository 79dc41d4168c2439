import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_pure(rng) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_density(rng) -> np.ndarray:
    # Mix a couple of random pure states for a full-rank sample.
    w = rng.uniform(0.1, 1.0, size=2)
    w /= w.sum()
    rho = np.zeros((2, 2), dtype=complex)
    for weight in w:
        v = random_pure(rng)
        rho += weight * np.outer(v, v.conj())
    return rho
