import math

import numpy as np
import pytest

from weakctrl.optimize import golden_section_max
from weakctrl.protocol import avg_fidelity_opt, chi_opt, eta_opt, fidelity_dn, fidelity_h
from weakctrl.sweep import (BruteForceOptimum, GridSpec, brute_force_protocol_opt,
                            crossover_curve, crossover_p_closed_form, find_max_improvement,
                            sweep)

HALF_PI = math.pi / 2


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(0.2, 0.1, 0.0, 0.5, 10, 10)  # theta_min > theta_max
    with pytest.raises(ValueError):
        GridSpec(0.0, HALF_PI, 0.0, 0.6, 10, 10)  # p out of domain
    with pytest.raises(ValueError):
        GridSpec(0.0, HALF_PI, 0.0, 0.5, 1, 10)  # too few points


def test_golden_section_finds_quadratic_max():
    x, val = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, 1e-8)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert val == pytest.approx(0.0, abs=1e-12)


def test_sweep_cells_satisfy_invariants():
    grid = GridSpec(0.0, HALF_PI, 0.0, 0.5, 40, 40)
    cells = sweep(grid)
    assert len(cells) == 1600
    for cell in cells:
        assert cell.f_diff == pytest.approx(
            cell.f_opt - max(cell.f_dn, cell.f_h), abs=1e-12)
        assert cell.f_diff >= -1e-12


def test_sweep_corner_cell_is_degenerate():
    grid = GridSpec(0.0, 0.1, 0.0, 0.1, 2, 2)
    cells = sweep(grid)
    corner = cells[0]
    assert corner.theta == 0.0 and corner.p == 0.0
    assert corner.degenerate
    assert corner.f_opt == pytest.approx(1.0, abs=1e-12)
    assert corner.f_diff == pytest.approx(0.0, abs=1e-12)
    assert sum(c.degenerate for c in cells) == 1


def test_sweep_is_row_major_and_deterministic():
    grid = GridSpec(0.1, 0.3, 0.1, 0.2, 3, 4)
    cells = sweep(grid)
    thetas = [c.theta for c in cells]
    ps = [c.p for c in cells]
    assert thetas == sorted(thetas)
    assert ps[:4] == sorted(ps[:4])
    assert sweep(grid) == cells


def test_find_max_improvement_reference_location():
    grid = GridSpec(0.0, HALF_PI, 0.0, 0.5, 200, 200)
    best = find_max_improvement(grid, refine_tolerance=1e-4)
    assert best.theta == pytest.approx(0.715, abs=0.005)
    assert best.p == pytest.approx(0.115, abs=0.005)
    assert best.f_diff == pytest.approx(0.026, abs=0.001)
    assert not best.on_boundary


def test_find_max_improvement_boundary_flag():
    # Restricted to p >= 0.4 the gain shrinks toward the p = 1/2 collapse
    # and the maximum sits on the lower-p edge.
    best = find_max_improvement(GridSpec(0.3, 1.2, 0.4, 0.5, 40, 20))
    assert best.on_boundary
    assert best.p == pytest.approx(0.4, abs=1e-6)
    assert best.f_diff < 0.005


def test_find_max_improvement_collapsed_grid():
    best = find_max_improvement(GridSpec(0.7, 0.7, 0.1, 0.1, 2, 2))
    assert best.theta == pytest.approx(0.7)
    assert best.p == pytest.approx(0.1)


def test_find_max_improvement_validates_tolerance():
    with pytest.raises(ValueError):
        find_max_improvement(GridSpec(0.0, 1.0, 0.0, 0.4, 5, 5), refine_tolerance=0.0)


def test_crossover_at_reference_angle():
    # Bisection against the closed form; both give p* ~ 0.115 here, the
    # noise level of the largest improvement.
    point = crossover_curve([0.715], tolerance=1e-10)[0]
    assert point.p_star == pytest.approx(0.11499883987725393, abs=1e-9)
    assert point.p_star == pytest.approx(crossover_p_closed_form(0.715), abs=1e-9)
    assert abs(fidelity_dn(0.715, point.p_star) - fidelity_h(0.715, point.p_star)) < 1e-9


def test_crossover_matches_closed_form_along_axis():
    thetas = np.linspace(0.05, HALF_PI - 0.05, 25)
    for pt in crossover_curve(thetas, tolerance=1e-10):
        assert pt.p_star == pytest.approx(crossover_p_closed_form(pt.theta), abs=1e-9)


def test_crossover_markers_at_degenerate_angles():
    for theta in (0.0, HALF_PI):
        assert crossover_curve([theta])[0].p_star is None


def test_below_crossover_do_nothing_wins():
    for theta in (0.3, 0.715, 1.2):
        p_star = crossover_p_closed_form(theta)
        for p in np.linspace(0.0, p_star * 0.95, 7):
            assert fidelity_dn(theta, p) > fidelity_h(theta, p)


def test_crossover_rejects_bad_theta():
    with pytest.raises(ValueError):
        crossover_curve([2.0])


def test_brute_force_matches_closed_forms():
    result = brute_force_protocol_opt(0.715, 0.145, resolution=1e-3)
    assert isinstance(result, BruteForceOptimum)
    assert result.chi == pytest.approx(chi_opt(0.715, 0.145), abs=2e-3)
    assert result.eta == pytest.approx(eta_opt(0.715, 0.145, chi_opt(0.715, 0.145)), abs=2e-3)
    assert result.fidelity == pytest.approx(avg_fidelity_opt(0.715, 0.145), abs=1e-5)


def test_brute_force_perfect_cases():
    assert brute_force_protocol_opt(0.9, 0.0, 5e-3).fidelity == pytest.approx(1.0, abs=1e-8)
    noise_immune = brute_force_protocol_opt(HALF_PI, 0.3, 5e-3)
    assert noise_immune.fidelity == pytest.approx(1.0, abs=1e-8)
    assert eta_opt(HALF_PI, 0.3, noise_immune.chi) == pytest.approx(0.0, abs=1e-12)


def test_brute_force_rejects_coarse_resolution():
    with pytest.raises(ValueError):
        brute_force_protocol_opt(0.7, 0.1, resolution=0.1)
