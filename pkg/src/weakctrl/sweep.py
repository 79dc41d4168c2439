"""Parameter-plane sweeps and brute-force optimisation.

The sweep evaluates the closed forms on a (theta, p) grid; the brute-force
scanner instead runs the exact density-matrix pipeline over a dense
(chi, eta) grid and therefore serves as an independent check on every
closed-form optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import protocol
from .optimize import golden_section_max
from .protocol import ProtocolParams, run_protocol_exact

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class GridSpec:
    theta_min: float
    theta_max: float
    p_min: float
    p_max: float
    n_theta: int
    n_p: int

    def __post_init__(self):
        if not (0.0 <= self.theta_min <= self.theta_max <= HALF_PI):
            raise ValueError("theta bounds must satisfy 0 <= min <= max <= pi/2")
        if not (0.0 <= self.p_min <= self.p_max <= 0.5):
            raise ValueError("p bounds must satisfy 0 <= min <= max <= 1/2")
        if self.n_theta < 2 or self.n_p < 2:
            raise ValueError("grids need at least 2 points per axis")

    def thetas(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.n_theta)

    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)


@dataclass(frozen=True)
class SweepCell:
    theta: float
    p: float
    chi_opt: float
    eta_opt: float
    f_opt: float
    f_dn: float
    f_h: float
    f_diff: float
    degenerate: bool = False


@dataclass(frozen=True)
class CrossoverPoint:
    """Noise level where the do-nothing and Helstrom schemes tie.

    ``p_star`` is None when the two fidelities never cross on (0, 1/2)
    (they coincide identically at theta = 0 or pi/2).
    """

    theta: float
    p_star: float | None


@dataclass(frozen=True)
class ImprovementMax:
    theta: float
    p: float
    f_diff: float
    on_boundary: bool


@dataclass(frozen=True)
class BruteForceOptimum:
    chi: float
    eta: float
    fidelity: float


def sweep_grids(grid: GridSpec) -> dict[str, np.ndarray]:
    """All sweep quantities as (n_theta, n_p) arrays (theta varies along rows)."""
    th = grid.thetas()[:, None]
    pp = grid.ps()[None, :]
    chi_star = protocol.chi_opt(th, pp)
    out = {
        "theta": np.broadcast_to(th, (grid.n_theta, grid.n_p)).copy(),
        "p": np.broadcast_to(pp, (grid.n_theta, grid.n_p)).copy(),
        "chi_opt": chi_star,
        "eta_opt": protocol.eta_opt(th, pp, chi_star),
        "f_opt": protocol.avg_fidelity_opt(th, pp),
        "f_dn": protocol.fidelity_dn(th, pp),
        "f_h": protocol.fidelity_h(th, pp),
        "degenerate": protocol.degenerate_corner(th, pp),
    }
    out["f_diff"] = out["f_opt"] - np.maximum(out["f_dn"], out["f_h"])
    return out


def sweep(grid: GridSpec) -> list[SweepCell]:
    """One cell per grid point, row-major (theta outer, p inner)."""
    g = sweep_grids(grid)
    cells = []
    for i in range(grid.n_theta):
        for j in range(grid.n_p):
            cells.append(SweepCell(
                theta=float(g["theta"][i, j]), p=float(g["p"][i, j]),
                chi_opt=float(g["chi_opt"][i, j]), eta_opt=float(g["eta_opt"][i, j]),
                f_opt=float(g["f_opt"][i, j]), f_dn=float(g["f_dn"][i, j]),
                f_h=float(g["f_h"][i, j]), f_diff=float(g["f_diff"][i, j]),
                degenerate=bool(g["degenerate"][i, j]),
            ))
    return cells


def _f_diff(theta: float, p: float) -> float:
    return protocol.avg_fidelity_opt(theta, p) - max(
        protocol.fidelity_dn(theta, p), protocol.fidelity_h(theta, p))


def find_max_improvement(grid: GridSpec, refine_tolerance: float = 1e-4) -> ImprovementMax:
    """Locate the largest gain of the optimal scheme over both limiting schemes.

    Coarse grid argmax followed by a nested golden-section refinement: the
    outer search runs over theta near the winning column, the inner one
    maximises over the grid's full p range at each theta.  The nesting
    matters because the improvement surface is a kinked ridge along the
    do-nothing/Helstrom crossover; per-cell sampling error there can put
    the coarse argmax several columns away from the true peak, and a
    plain coordinate search stalls on the ridge.  Refinement never leaves
    the grid bounds; maxima sitting on the grid edge are flagged.
    """
    if refine_tolerance <= 0.0:
        raise ValueError("refine_tolerance must be positive")
    g = sweep_grids(grid)
    i, j = np.unravel_index(int(np.argmax(g["f_diff"])), g["f_diff"].shape)
    thetas, ps = grid.thetas(), grid.ps()
    on_boundary = i in (0, grid.n_theta - 1) or j in (0, grid.n_p - 1)

    p_lo, p_hi = float(ps[0]), float(ps[-1])
    theta_lo = float(thetas[max(i - 10, 0)])
    theta_hi = float(thetas[min(i + 10, grid.n_theta - 1)])

    # The inner maximum sits on a kink, so its value error is linear in
    # the inner bracket width; run the inner search much tighter than the
    # outer one or the outer objective turns into a noisy plateau.
    inner_tol = max(refine_tolerance * 1e-4, 1e-12)

    def best_over_p(theta: float) -> tuple[float, float]:
        return golden_section_max(lambda q: _f_diff(theta, q), p_lo, p_hi, inner_tol)

    theta_star, _ = golden_section_max(
        lambda t: best_over_p(t)[1], theta_lo, theta_hi, refine_tolerance)
    p_star, value = best_over_p(theta_star)
    # The coarse cell wins if the refinement bracket missed the peak.
    if value < float(g["f_diff"][i, j]):
        theta_star, p_star, value = float(thetas[i]), float(ps[j]), float(g["f_diff"][i, j])
    return ImprovementMax(float(theta_star), float(p_star), float(value), on_boundary)


def crossover_p_closed_form(theta: float) -> float:
    """Noise level where 1 - p cos^2(th) meets the Helstrom fidelity."""
    c2 = math.cos(theta) ** 2
    return (1.0 - math.sqrt(math.sin(theta) ** 4 + c2)) / (2.0 * c2)


def crossover_curve(theta_list, tolerance: float = 1e-10) -> list[CrossoverPoint]:
    """Bisection for the do-nothing/Helstrom tie along each theta.

    Below the returned curve the do-nothing scheme beats the projective
    one.  Angles where the two fidelities never separate (theta = 0 or
    pi/2 up to rounding) yield ``p_star=None``.
    """
    points = []
    for theta in theta_list:
        theta = float(theta)
        if not 0.0 <= theta <= HALF_PI:
            raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
        gap = lambda p: protocol.fidelity_dn(theta, p) - protocol.fidelity_h(theta, p)
        lo, hi = 0.0, 0.5
        if not (gap(lo) > tolerance and gap(hi) < -tolerance):
            points.append(CrossoverPoint(theta, None))
            continue
        while hi - lo > tolerance:
            mid = 0.5 * (lo + hi)
            if gap(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        points.append(CrossoverPoint(theta, 0.5 * (lo + hi)))
    return points


def _exact_fidelity_surface(theta: float, p: float, chis: np.ndarray,
                            etas: np.ndarray) -> np.ndarray:
    """Average fidelity of the exact pipeline on a (chi, eta) grid.

    Same arithmetic as :func:`protocol.run_protocol_exact`, factored over
    the grid: the measurement stage only depends on chi and the correction
    stage only on eta, so each (input, outcome) branch contributes a
    bilinear form computed with one small matrix product.
    """
    from .channels import dephase
    from .qubit import make_input_state, to_density

    c, s = np.cos(chis / 2), np.sin(chis / 2)
    kraus = {+1: (c, s), -1: (s, c)}  # diagonal entries of M+ / M-

    # Correction for outcome o turns the Bloch vector by eta from the o
    # pole toward +x: the unitary rotation_y(eta/2, -o), written out as a
    # real rotation matrix over the eta grid.
    ch, sh = np.cos(etas / 2), np.sin(etas / 2)

    total = np.zeros((chis.size, etas.size))
    for sign in (+1, -1):
        psi = make_input_state(theta, sign)
        noisy = dephase(to_density(psi), p)
        for o in (+1, -1):
            d0, d1 = kraus[o]
            # Unnormalised post-measurement matrices, shape (n_chi, 2, 2).
            post = np.empty((chis.size, 2, 2), dtype=complex)
            post[:, 0, 0] = d0 * d0 * noisy[0, 0]
            post[:, 0, 1] = d0 * d1 * noisy[0, 1]
            post[:, 1, 0] = d1 * d0 * noisy[1, 0]
            post[:, 1, 1] = d1 * d1 * noisy[1, 1]
            # v = U_o(eta)^+ psi, shape (n_eta, 2), with the correction
            # U_o = rotation_y(eta/2, -o) = [[ch, -o*sh], [o*sh, ch]].
            v0 = ch * psi[0] + o * sh * psi[1]
            v1 = -o * sh * psi[0] + ch * psi[1]
            vmat = np.stack([np.conj(v0) * v0, np.conj(v0) * v1,
                             np.conj(v1) * v0, np.conj(v1) * v1])
            total += (post.reshape(chis.size, 4) @ vmat).real
    return 0.5 * total


def brute_force_protocol_opt(theta: float, p: float,
                             resolution: float = 1e-3) -> BruteForceOptimum:
    """Exhaustive (chi, eta) scan of the exact pipeline, then one
    golden-section pass per axis inside the winning cells."""
    if resolution > 1e-2:
        raise ValueError(f"resolution must be <= 1e-2 rad, got {resolution}")
    n = int(math.ceil(HALF_PI / resolution)) + 1
    chis = np.linspace(0.0, HALF_PI, n)
    etas = np.linspace(0.0, HALF_PI, n)
    surface = _exact_fidelity_surface(theta, p, chis, etas)
    i, j = np.unravel_index(int(np.argmax(surface)), surface.shape)

    def f_at(chi, eta):
        return run_protocol_exact(ProtocolParams(theta, p, chi, eta)).fidelity_avg

    chi_lo, chi_hi = chis[max(i - 2, 0)], chis[min(i + 2, n - 1)]
    eta_lo, eta_hi = etas[max(j - 2, 0)], etas[min(j + 2, n - 1)]
    eta_star = float(etas[j])
    chi_star, _ = golden_section_max(
        lambda x: f_at(x, eta_star), chi_lo, chi_hi, resolution / 20.0)
    eta_star, best = golden_section_max(
        lambda x: f_at(chi_star, x), eta_lo, eta_hi, resolution / 20.0)
    return BruteForceOptimum(chi_star, eta_star, best)
