"""Command-line entry point for reproducible runs of the simulator.

Subcommands: ``protocol`` (one control-loop configuration, exact and
optionally Monte-Carlo), ``sweep`` (closed-form grid over the parameter
plane plus improvement maximum and crossover summary), ``experiment-model``
(gate-based pipeline with imperfect beamsplitter reflectivities) and
``tomography`` (simulated counts, linear inversion, bootstrap error bar).

Angles are radians unless ``--degrees`` is given.  Output is CSV by
default (JSON via ``--format json``), written atomically to ``--out`` or
to stdout.  Relative ``--out`` paths resolve against $WEAKCTRL_OUT_DIR
when it is set.  Exit codes: 0 success, 2 invalid parameters, 3 runtime
failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .output import ResultEnvelope, make_envelope, render_csv, render_json, write_atomic
from .photonic import MEASURED_PPBS, Ppbs, experimental_model_curve
from .protocol import (ProtocolParams, run_protocol_exact, run_protocol_mc, scheme_params)
from .qubit import Z, bloch, make_input_state, to_density
from .sweep import GridSpec, crossover_curve, find_max_improvement, sweep
from .tomography import fidelity_with_error, linear_inversion, mix_ensemble_counts, simulate_counts

ENV_OUT_DIR = "WEAKCTRL_OUT_DIR"
HALF_PI = math.pi / 2

PROTOCOL_COLUMNS = [
    "scheme", "theta", "p", "chi", "cos_chi", "eta",
    "f_plus", "f_minus", "f_avg",
    "p_out_plus_in_plus", "p_out_minus_in_plus",
    "p_out_plus_in_minus", "p_out_minus_in_minus",
    "bloch_plus_x", "bloch_plus_y", "bloch_plus_z",
    "bloch_minus_x", "bloch_minus_y", "bloch_minus_z",
    "mc_f_avg", "mc_stderr", "mc_f_plus", "mc_f_minus", "mc_shots",
]

SWEEP_COLUMNS = [
    "theta", "p", "chi_opt", "cos_chi_opt", "eta_opt",
    "f_opt", "f_dn", "f_h", "f_diff", "degenerate",
]

MODEL_COLUMNS = [
    "chi", "cos_chi", "eta", "f_ideal", "f_model", "f_plus", "f_minus",
    "bloch_plus_x", "bloch_plus_y", "bloch_plus_z",
    "bloch_minus_x", "bloch_minus_y", "bloch_minus_z",
]

TOMOGRAPHY_COLUMNS = [
    "basis", "outcome", "counts_clean", "counts_flipped", "counts_mixed", "duration",
]


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(ENV_OUT_DIR)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def cmd_protocol(args) -> ResultEnvelope:
    theta = _angle(args.theta, args.degrees)
    p = args.p
    if args.chi is not None or args.eta is not None:
        if args.chi is None or args.eta is None:
            raise ValueError("--chi and --eta must be given together")
        params = scheme_params(theta, p, "custom",
                               chi=_angle(args.chi, args.degrees),
                               eta=_angle(args.eta, args.degrees))
        scheme = "custom"
    else:
        scheme = args.scheme
        params = scheme_params(theta, p, scheme)
    result = run_protocol_exact(params)
    mc = [None] * 5
    if args.shots:
        if args.seed is None:
            raise ValueError("--shots needs --seed for reproducibility")
        est = run_protocol_mc(params, args.shots, np.random.default_rng(args.seed))
        mc = [est.fidelity_avg, est.stderr_avg, est.fidelity_plus, est.fidelity_minus,
              est.n_shots]
    bp, bm = bloch(result.output_plus), bloch(result.output_minus)
    row = [scheme, params.theta, params.p, params.chi, math.cos(params.chi), params.eta,
           result.fidelity_plus, result.fidelity_minus, result.fidelity_avg,
           result.outcome_probabilities[(+1, +1)], result.outcome_probabilities[(+1, -1)],
           result.outcome_probabilities[(-1, +1)], result.outcome_probabilities[(-1, -1)],
           bp.x, bp.y, bp.z, bm.x, bm.y, bm.z, *mc]
    config = {"theta": params.theta, "p": params.p, "chi": params.chi, "eta": params.eta,
              "scheme": scheme, "shots": args.shots, "seed": args.seed}
    return make_envelope("protocol", config, PROTOCOL_COLUMNS, [row],
                         tool_version=__version__)


def cmd_sweep(args) -> ResultEnvelope:
    grid = GridSpec(args.theta_min, args.theta_max, args.p_min, args.p_max,
                    args.n_theta, args.n_p)
    cells = sweep(grid)
    rows = [[c.theta, c.p, c.chi_opt, math.cos(c.chi_opt), c.eta_opt,
             c.f_opt, c.f_dn, c.f_h, c.f_diff, c.degenerate] for c in cells]
    best = find_max_improvement(grid, refine_tolerance=args.refine_tolerance)
    crossover = [(pt.theta, pt.p_star) for pt in crossover_curve(grid.thetas())]
    summary = {
        "argmax_theta": best.theta, "argmax_p": best.p,
        "argmax_f_diff": best.f_diff, "argmax_on_boundary": best.on_boundary,
        "crossover": crossover,
    }
    config = {"theta_min": grid.theta_min, "theta_max": grid.theta_max,
              "p_min": grid.p_min, "p_max": grid.p_max,
              "n_theta": grid.n_theta, "n_p": grid.n_p,
              "refine_tolerance": args.refine_tolerance}
    return make_envelope("sweep", config, SWEEP_COLUMNS, rows, summary=summary,
                         tool_version=__version__)


def _parse_cos_chi_list(text: str) -> list[float]:
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        value = float(token)
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"cos(chi) values must lie in [0, 1], got {value}")
        values.append(value)
    if not values:
        raise ValueError("empty cos(chi) list")
    return values


def cmd_experiment_model(args) -> ResultEnvelope:
    theta = _angle(args.theta, args.degrees)
    ppbs = Ppbs(args.rh, args.rv)
    if args.n_points:
        cos_list = list(np.linspace(0.0, 1.0, args.n_points))
    else:
        cos_list = _parse_cos_chi_list(args.cos_chi)
    chi_list = [math.acos(c) for c in cos_list]
    points = experimental_model_curve(theta, args.p, chi_list, ppbs,
                                      reoptimize_eta=args.reoptimize_eta)
    # Echo the requested strengths exactly (cos(acos(c)) re-rounds the endpoints).
    rows = [[pt.chi, cos_c, pt.eta, pt.f_ideal, pt.f_model, pt.f_plus, pt.f_minus,
             pt.bloch_plus.x, pt.bloch_plus.y, pt.bloch_plus.z,
             pt.bloch_minus.x, pt.bloch_minus.y, pt.bloch_minus.z]
            for cos_c, pt in zip(cos_list, points)]
    config = {"theta": theta, "p": args.p, "rh": args.rh, "rv": args.rv,
              "cos_chi": cos_list, "reoptimize_eta": args.reoptimize_eta}
    return make_envelope("experiment-model", config, MODEL_COLUMNS, rows,
                         tool_version=__version__)


def cmd_tomography(args) -> ResultEnvelope:
    theta = _angle(args.theta, args.degrees)
    psi = make_input_state(theta, args.sign)
    rho = to_density(psi)
    flipped = Z @ rho @ Z
    rng = np.random.default_rng(args.seed)
    counts_clean = simulate_counts(rho, args.rate, args.duration, rng)
    counts_flipped = simulate_counts(flipped, args.rate, args.duration, rng)
    mixed = mix_ensemble_counts(counts_clean, counts_flipped, args.p)
    recon = linear_inversion(mixed)
    fid, stderr = fidelity_with_error(psi, mixed, args.resamples, rng)
    rows = [[c.setting.basis, c.setting.outcome, c.counts, f.counts, m.counts, c.duration]
            for c, f, m in zip(counts_clean, counts_flipped, mixed)]
    b = bloch(recon.matrix)
    summary = {"bloch_x": b.x, "bloch_y": b.y, "bloch_z": b.z,
               "min_eigenvalue": recon.min_eigenvalue, "physical": recon.physical,
               "fidelity": fid, "fidelity_stderr": stderr,
               "n_resamples": args.resamples}
    config = {"theta": theta, "sign": args.sign, "p": args.p, "rate": args.rate,
              "duration": args.duration, "seed": args.seed, "resamples": args.resamples}
    return make_envelope("tomography", config, TOMOGRAPHY_COLUMNS, rows, summary=summary,
                         tool_version=__version__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakctrl",
        description="Feedback control of one qubit with variable-strength measurements.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--degrees", action="store_true",
                       help="interpret angle arguments as degrees")

    p = sub.add_parser("protocol", help="run one control-loop configuration")
    common(p)
    p.add_argument("--theta", type=float, default=0.715)
    p.add_argument("--p", type=float, default=0.145)
    p.add_argument("--scheme", choices=("dn", "helstrom", "optimal"), default="optimal")
    p.add_argument("--chi", type=float, default=None, help="explicit strength angle")
    p.add_argument("--eta", type=float, default=None, help="explicit correction angle")
    p.add_argument("--shots", type=int, default=None, help="add a Monte-Carlo estimate")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_protocol)

    p = sub.add_parser("sweep", help="closed-form grid over the (theta, p) plane")
    common(p)
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=HALF_PI)
    p.add_argument("--p-min", type=float, default=0.0)
    p.add_argument("--p-max", type=float, default=0.5)
    p.add_argument("--n-theta", type=int, default=200)
    p.add_argument("--n-p", type=int, default=200)
    p.add_argument("--refine-tolerance", type=float, default=1e-4)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("experiment-model",
                       help="gate-based pipeline with imperfect reflectivities")
    common(p)
    p.add_argument("--theta", type=float, default=0.715)
    p.add_argument("--p", type=float, default=0.145)
    p.add_argument("--rh", type=float, default=MEASURED_PPBS.r_h)
    p.add_argument("--rv", type=float, default=MEASURED_PPBS.r_v)
    p.add_argument("--cos-chi", default="0,0.93,1",
                   help="comma-separated strengths cos(chi)")
    p.add_argument("--n-points", type=int, default=None,
                   help="instead scan this many strengths uniformly over [0, 1]")
    p.add_argument("--reoptimize-eta", action="store_true",
                   help="refit the correction angle to the imperfect model")
    p.set_defaults(handler=cmd_experiment_model)

    p = sub.add_parser("tomography", help="simulated counts and linear inversion")
    common(p)
    p.add_argument("--theta", type=float, default=0.715)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--p", type=float, default=0.145)
    p.add_argument("--rate", type=float, default=100.0, help="coincidences per second")
    p.add_argument("--duration", type=float, default=360.0,
                   help="total integration time (default 60 s per setting)")
    p.add_argument("--resamples", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(handler=cmd_tomography)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        env = args.handler(args)
        text = render_json(env) if args.format == "json" else render_csv(env)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3
    out = _resolve_out(args.out)
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(text, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
