"""Two-photon model of the postselected polarisation gate.

The signal and meter photons meet on a partially polarising beamsplitter
whose intensity reflectivities depend on polarisation (V = |0>, H = |1>).
With amplitude coefficients r_p = sqrt(R_p), t_p = sqrt(1 - R_p) and the
mode convention  a+ -> r c+ + t d+,  b+ -> t c+ - r d+  (reflection keeps
a photon on its spatial side), keeping only coincidence events gives

    |p>|q>  ->  -r_p r_q |p>|q> + t_p t_q |q>|p>.

Same-polarisation inputs therefore interfere to amplitude t_p^2 - r_p^2,
which vanishes on a 50:50 splitter (the Hong-Ou-Mandel dip).  Two ideal
loss elements then attenuate each photon's V amplitude by 1/sqrt(3).  At
R_H = 1/3, R_V = 1 the whole chain is the controlled-Z gate
diag(1, 1, 1, -1) with success amplitude 1/3 on every basis state.

Feeding the meter with cos(chi/2)|+> + sin(chi/2)|-> and reading it out
in the +/- basis turns the ideal gate into the tunable-strength signal
measurement of :mod:`weakctrl.channels`; with the measured reflectivities
of the manufactured splitter the same pipeline yields the imperfect
"experimental model" fidelity curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import dephase
from .optimize import golden_section_max
from .protocol import correction_unitary, eta_opt, avg_fidelity_analytic
from .qubit import (KET_MINUS, KET_PLUS, MAXIMALLY_MIXED, BlochVector, apply_unitary, bloch,
                    make_input_state, to_density)

HALF_PI = math.pi / 2

# Per-photon amplitude attenuation of the V component in the loss stage.
LOSS_ATTENUATION = 1.0 / math.sqrt(3.0)

DEGENERATE_PROB = 1e-12


@dataclass(frozen=True)
class Ppbs:
    """Intensity reflectivities of the central beamsplitter."""

    r_h: float
    r_v: float

    def __post_init__(self):
        if not 0.0 <= self.r_h <= 1.0:
            raise ValueError(f"r_h must lie in [0, 1], got {self.r_h}")
        if not 0.0 <= self.r_v <= 1.0:
            raise ValueError(f"r_v must lie in [0, 1], got {self.r_v}")


IDEAL_PPBS = Ppbs(r_h=1.0 / 3.0, r_v=1.0)
# Reflectivities measured on the manufactured splitter, about a percent
# off the design values.
MEASURED_PPBS = Ppbs(r_h=0.345, r_v=0.995)


@dataclass(frozen=True)
class MeterState:
    """Meter preparation cos(chi/2)|+> + sin(chi/2)|->."""

    chi: float

    def __post_init__(self):
        if not 0.0 <= self.chi <= HALF_PI:
            raise ValueError(f"chi must lie in [0, pi/2], got {self.chi}")

    def ket(self) -> np.ndarray:
        return math.cos(self.chi / 2) * KET_PLUS + math.sin(self.chi / 2) * KET_MINUS


@dataclass(frozen=True)
class PostselectedGate:
    """Non-unitary coincidence operator on signal (x) meter amplitudes.

    Basis order is |00>, |01>, |10>, |11> = VV, VH, HV, HH with the signal
    photon first.
    """

    operator: np.ndarray
    loss_attenuation: float = LOSS_ATTENUATION


@dataclass(frozen=True)
class GateOutcome:
    """One meter readout branch: joint success probability and signal state."""

    sign: int
    success_probability: float
    post_signal: np.ndarray
    degenerate: bool = False


def ppbs_conditional(ppbs: Ppbs) -> PostselectedGate:
    """Coincidence operator of the beamsplitter followed by the loss stage.

    The overall (unobservable) phase is fixed so the VV entry is positive.
    """
    r = {0: math.sqrt(ppbs.r_v), 1: math.sqrt(ppbs.r_h)}
    t = {0: math.sqrt(1.0 - ppbs.r_v), 1: math.sqrt(1.0 - ppbs.r_h)}
    op = np.zeros((4, 4), dtype=complex)
    for p in (0, 1):
        for q in (0, 1):
            op[2 * p + q, 2 * p + q] += -r[p] * r[q]   # both photons stay
            op[2 * q + p, 2 * p + q] += t[p] * t[q]    # both photons cross
    loss_1q = np.diag([LOSS_ATTENUATION, 1.0])
    op = np.kron(loss_1q, loss_1q) @ op
    if op[0, 0].real < 0.0:
        op = -op
    op.setflags(write=False)
    return PostselectedGate(operator=op)


def gate_measurement(rho_signal: np.ndarray, meter: MeterState,
                     gate: PostselectedGate) -> tuple[GateOutcome, GateOutcome]:
    """Run the signal through the gate and read the meter in the +/- basis.

    Returns both meter branches with their joint success probabilities
    (which include the postselection loss, e.g. a uniform 1/9 for the
    ideal gate).  Branches whose probability vanishes are flagged
    degenerate with a maximally mixed placeholder state.
    """
    phi = meter.ket()
    joint = np.kron(np.asarray(rho_signal, dtype=complex), to_density(phi))
    out = gate.operator @ joint @ gate.operator.conj().T
    out4 = out.reshape(2, 2, 2, 2)  # (signal row, meter row, signal col, meter col)
    results = []
    for sign, m in ((+1, KET_PLUS), (-1, KET_MINUS)):
        block = np.einsum("a,iajb,b->ij", m.conj(), out4, m)
        prob = float(np.trace(block).real)
        if prob < DEGENERATE_PROB:
            results.append(GateOutcome(sign, 0.0, MAXIMALLY_MIXED, degenerate=True))
        else:
            results.append(GateOutcome(sign, prob, block / prob))
    return results[0], results[1]


@dataclass(frozen=True)
class ModelPoint:
    """One strength setting of the gate-based pipeline."""

    chi: float
    cos_chi: float
    eta: float
    f_ideal: float
    f_model: float
    f_plus: float
    f_minus: float
    bloch_plus: BlochVector
    bloch_minus: BlochVector


def _model_fidelity(theta: float, p: float, chi: float, eta: float,
                    gate: PostselectedGate):
    """Average fidelity and per-input outputs of the gate-based pipeline.

    Outcome statistics are conditioned on coincidence success, separately
    for each input, matching how postselected data is normalised.
    """
    corrections = {o: correction_unitary(eta, o) for o in (+1, -1)}
    meter = MeterState(chi)
    fids, blochs = {}, {}
    for sign in (+1, -1):
        psi = make_input_state(theta, sign)
        noisy = dephase(to_density(psi), p)
        outcomes = gate_measurement(noisy, meter, gate)
        total = sum(oc.success_probability for oc in outcomes)
        f = 0.0
        out = np.zeros((2, 2), dtype=complex)
        for oc in outcomes:
            if oc.degenerate:
                continue
            weight = oc.success_probability / total
            corrected = apply_unitary(oc.post_signal, corrections[oc.sign])
            f += weight * float(np.vdot(psi, corrected @ psi).real)
            out += weight * corrected
        fids[sign] = f
        blochs[sign] = bloch(out)
    return 0.5 * (fids[+1] + fids[-1]), fids, blochs


def experimental_model_curve(theta: float, p: float, chi_list, ppbs: Ppbs,
                             reoptimize_eta: bool = False) -> list[ModelPoint]:
    """Gate-based pipeline at each strength in ``chi_list``.

    The correction angle is the ideal-theory optimum at each strength
    (the feed-forward is configured from theory, not refit to the
    hardware); pass ``reoptimize_eta=True`` to instead maximise the model
    fidelity over the correction angle for comparison.
    """
    gate = ppbs_conditional(ppbs)
    points = []
    for chi in chi_list:
        chi = float(chi)
        eta = eta_opt(theta, p, chi)
        if reoptimize_eta:
            eta, _ = golden_section_max(
                lambda e: _model_fidelity(theta, p, chi, e, gate)[0],
                0.0, HALF_PI, 1e-10)
        f_model, fids, blochs = _model_fidelity(theta, p, chi, eta, gate)
        points.append(ModelPoint(
            chi=chi, cos_chi=math.cos(chi), eta=eta,
            f_ideal=avg_fidelity_analytic(theta, p, chi),
            f_model=f_model, f_plus=fids[+1], f_minus=fids[-1],
            bloch_plus=blochs[+1], bloch_minus=blochs[-1],
        ))
    return points
