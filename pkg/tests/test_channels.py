import math

import numpy as np
import pytest

from weakctrl.channels import dephase, kraus_pair, measure, povm_elements, sample_outcome
from weakctrl.qubit import I2, Z, bloch, make_input_state, to_density, validate_density

from conftest import random_density


def test_dephase_noiseless_is_identity(rng):
    rho = random_density(rng)
    assert dephase(rho, 0.0) == pytest.approx(rho)


def test_dephase_half_kills_coherence():
    plus = to_density(np.array([1.0, 1.0]) / math.sqrt(2.0))
    assert dephase(plus, 0.5) == pytest.approx(0.5 * I2)


def test_dephase_scales_off_diagonals():
    # Oracle: direct matrix arithmetic on the input-state projector.
    rho = to_density(make_input_state(0.715, 1))
    out = dephase(rho, 0.145)
    assert out[0, 1] == pytest.approx(0.71 * rho[0, 1], abs=1e-15)
    assert out[1, 0] == pytest.approx(0.71 * rho[1, 0], abs=1e-15)
    assert np.diag(out) == pytest.approx(np.diag(rho))


@pytest.mark.parametrize("p", [-0.01, 0.51, 1.0])
def test_dephase_rejects_out_of_range(p):
    with pytest.raises(ValueError):
        dephase(0.5 * I2, p)


def test_dephase_bloch_contract(rng):
    for _ in range(50):
        rho = random_density(rng)
        p = rng.uniform(0.0, 0.5)
        x, y, z = bloch(rho)
        out = bloch(dephase(rho, p))
        assert out.x == pytest.approx((1 - 2 * p) * x, abs=1e-12)
        assert out.y == pytest.approx((1 - 2 * p) * y, abs=1e-12)
        assert out.z == pytest.approx(z, abs=1e-12)


def test_dephase_composition_rule(rng):
    for _ in range(50):
        rho = random_density(rng)
        p1, p2 = rng.uniform(0.0, 0.5, size=2)
        twice = dephase(dephase(rho, p1), p2)
        once = dephase(rho, p1 + p2 - 2 * p1 * p2)
        assert twice == pytest.approx(once, abs=1e-12)


def test_kraus_projective_limit():
    pair = kraus_pair(0.0)
    assert pair.m_plus == pytest.approx(np.diag([1.0, 0.0]))
    assert pair.m_minus == pytest.approx(np.diag([0.0, 1.0]))


def test_kraus_no_measurement_limit():
    pair = kraus_pair(math.pi / 2)
    assert pair.m_plus == pytest.approx(I2.real / math.sqrt(2.0))
    assert pair.m_minus == pytest.approx(I2.real / math.sqrt(2.0))


def test_povm_form_and_completeness(rng):
    for _ in range(100):
        chi = rng.uniform(0.0, math.pi / 2)
        pi_plus, pi_minus = povm_elements(kraus_pair(chi))
        assert pi_plus == pytest.approx(0.5 * (I2 + math.cos(chi) * Z).real, abs=1e-12)
        assert np.max(np.abs(pi_plus + pi_minus - I2)) < 1e-12


@pytest.mark.parametrize("chi", [-0.1, math.pi / 2 + 0.1])
def test_kraus_rejects_out_of_range(chi):
    with pytest.raises(ValueError):
        kraus_pair(chi)


def test_measure_projective_eigenstate_flags_dead_branch():
    plus, minus = measure(np.diag([1.0, 0.0]).astype(complex), 0.0)
    assert plus.probability == pytest.approx(1.0)
    assert plus.post_state == pytest.approx(np.diag([1.0, 0.0]))
    assert minus.degenerate and minus.probability == 0.0


def test_measure_symmetric_state_splits_evenly(rng):
    # Oracle: tr(POVM rho) by hand; |+><+| has no Z component.
    plus_state = to_density(np.array([1.0, 1.0]) / math.sqrt(2.0))
    for chi in rng.uniform(0.0, math.pi / 2, size=20):
        plus, minus = measure(plus_state, chi)
        assert plus.probability == pytest.approx(0.5, abs=1e-12)
        assert minus.probability == pytest.approx(0.5, abs=1e-12)


def test_measure_no_disturbance_at_zero_strength():
    plus_state = to_density(np.array([1.0, 1.0]) / math.sqrt(2.0))
    for oc in measure(plus_state, math.pi / 2):
        assert oc.post_state == pytest.approx(plus_state)


def test_measure_reconstructs_unconditional_map(rng):
    for _ in range(50):
        rho = random_density(rng)
        chi = rng.uniform(0.0, math.pi / 2)
        pair = kraus_pair(chi)
        plus, minus = measure(rho, chi)
        assert plus.probability + minus.probability == pytest.approx(1.0, abs=1e-12)
        validate_density(plus.post_state)
        validate_density(minus.post_state)
        recombined = (plus.probability * plus.post_state
                      + minus.probability * minus.post_state)
        unconditional = (pair.m_plus @ rho @ pair.m_plus
                         + pair.m_minus @ rho @ pair.m_minus)
        assert recombined == pytest.approx(unconditional, abs=1e-12)


def test_sample_outcome_deterministic_cases(rng):
    zero = np.diag([1.0, 0.0]).astype(complex)
    for _ in range(20):
        assert sample_outcome(zero, 0.0, rng).sign == 1


def test_sample_outcome_frequency():
    # Binomial statistics: 1e5 draws, 3 sigma = 3 * sqrt(0.25 / 1e5) ~ 0.0047.
    rng = np.random.default_rng(7)
    plus_state = to_density(np.array([1.0, 1.0]) / math.sqrt(2.0))
    hits = sum(sample_outcome(plus_state, 0.0, rng).sign == 1 for _ in range(100_000))
    assert abs(hits / 100_000 - 0.5) < 0.005


def test_sample_outcome_seed_reproducible():
    plus_state = to_density(np.array([1.0, 1.0]) / math.sqrt(2.0))
    seq1 = [sample_outcome(plus_state, 0.3, np.random.default_rng(11)).sign for _ in range(1)]
    runs = []
    for _ in range(2):
        gen = np.random.default_rng(11)
        runs.append([sample_outcome(plus_state, 0.3, gen).sign for _ in range(50)])
    assert runs[0] == runs[1]
    assert seq1[0] == runs[0][0]
