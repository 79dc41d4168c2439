"""The four figure kinds rendered from simulator CSV files.

contour-chi     optimal measurement strength cos(chi_opt) over (p, theta)
contour-fdiff   improvement over the better limiting scheme, with the
                dashed do-nothing/Helstrom crossover and the labelled max
fidelity-curve  ideal and as-built fidelity vs strength, three highlighted
                strengths, optional Monte-Carlo points with error bars
bloch           output Bloch vectors of both inputs per strength

Images are deterministic for identical inputs and style, and written
atomically (temp file + rename).
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import matplotlib
import numpy as np

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "weakfig"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schema import SchemaError, Table, check_table, parse_table  # noqa: E402

KINDS = ("contour-chi", "contour-fdiff", "fidelity-curve", "bloch")

CHI_LEVELS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
FDIFF_LEVELS = [0.005, 0.010, 0.015, 0.020, 0.025]


@dataclass(frozen=True)
class FigureJob:
    kind: str
    inputs: list
    output: str
    points: list = field(default_factory=list)  # extra inputs for fidelity-curve
    dpi: int = 150
    cmap: str = "viridis"
    title: str | None = None
    levels: list | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input file is required")


def _save_atomic(fig, path: str, dpi: int) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    suffix = os.path.splitext(path)[1] or ".png"
    if suffix not in (".png", ".svg"):
        raise ValueError(f"unsupported image format {suffix!r}; use .png or .svg")
    metadata = {"Date": None} if suffix == ".svg" else None
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=suffix)
    os.close(fd)
    # mkstemp creates 0600 files; restore the usual umask-driven mode.
    umask = os.umask(0)
    os.umask(umask)
    os.chmod(tmp, 0o666 & ~umask)
    try:
        fig.savefig(tmp, dpi=dpi, format=suffix[1:], metadata=metadata,
                    bbox_inches="tight")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def _sweep_grid(table: Table, column: str):
    thetas = np.array(sorted(set(table.column("theta"))))
    ps = np.array(sorted(set(table.column("p"))))
    values = np.asarray(table.column(column), dtype=float)
    if values.size != thetas.size * ps.size:
        raise SchemaError(
            f"rows do not form a full grid: {values.size} rows for "
            f"{thetas.size} x {ps.size} axis points")
    return thetas, ps, values.reshape(thetas.size, ps.size)


def _crossover_polyline(table: Table):
    """(theta, p*) samples: from the summary lines when present, otherwise
    interpolated from the sign change of f_dn - f_h along each grid row."""
    if table.crossover:
        pts = [(t, p) for t, p in table.crossover if not math.isnan(p)]
        return np.array(pts) if pts else np.empty((0, 2))
    thetas, ps, gap = _sweep_grid(table, "f_dn")
    _, _, f_h = _sweep_grid(table, "f_h")
    gap = gap - f_h
    pts = []
    for i, theta in enumerate(thetas):
        row = gap[i]
        sign_change = np.nonzero((row[:-1] > 0) & (row[1:] <= 0))[0]
        if sign_change.size:
            j = sign_change[0]
            frac = row[j] / (row[j] - row[j + 1])
            pts.append((theta, ps[j] + frac * (ps[j + 1] - ps[j])))
    return np.array(pts) if pts else np.empty((0, 2))


def _annotated_max(table: Table):
    if "argmax_theta" in table.summary and "argmax_p" in table.summary:
        return (float(table.summary["argmax_theta"]), float(table.summary["argmax_p"]),
                float(table.summary.get("argmax_f_diff", float("nan"))))
    thetas, ps, f_diff = _sweep_grid(table, "f_diff")
    i, j = np.unravel_index(int(np.argmax(f_diff)), f_diff.shape)
    return float(thetas[i]), float(ps[j]), float(f_diff[i, j])


def _render_contour(job: FigureJob, table: Table, column: str, levels,
                    label: str, with_crossover: bool):
    thetas, ps, values = _sweep_grid(table, column)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    filled = ax.contourf(ps, thetas, values, levels=64, cmap=job.cmap)
    lines = ax.contour(ps, thetas, values, levels=job.levels or levels,
                       colors="black", linewidths=0.6)
    ax.clabel(lines, fmt="%.3g", fontsize=7)
    fig.colorbar(filled, ax=ax, label=label)
    info = {}
    if with_crossover:
        polyline = _crossover_polyline(table)
        if polyline.size:
            ax.plot(polyline[:, 1], polyline[:, 0], "k--", linewidth=1.2,
                    label="do-nothing = Helstrom")
        theta_max, p_max, f_max = _annotated_max(table)
        ax.plot([p_max], [theta_max], marker="+", color="white",
                markersize=10, markeredgewidth=2)
        ax.annotate(f"max {f_max:.3f}\n({theta_max:.3f}, {p_max:.3f})",
                    xy=(p_max, theta_max), xytext=(p_max + 0.03, theta_max + 0.08),
                    color="white", fontsize=8)
        if polyline.size:
            ax.legend(loc="lower right", fontsize=7)
        info["annotated_max"] = (theta_max, p_max)
    ax.set_xlabel("noise probability p")
    ax.set_ylabel("state half-angle theta (rad)")
    ax.set_title(job.title or label)
    _save_atomic(fig, job.output, job.dpi)
    return info


def _render_fidelity_curve(job: FigureJob, table: Table):
    order = np.argsort(np.asarray(table.column("cos_chi"), dtype=float))
    cos_chi = np.asarray(table.column("cos_chi"), dtype=float)[order]
    f_ideal = np.asarray(table.column("f_ideal"), dtype=float)[order]
    f_model = np.asarray(table.column("f_model"), dtype=float)[order]

    fig, ax = plt.subplots(figsize=(5.6, 3.8))
    ax.plot(cos_chi, f_ideal, color="tab:blue", label="ideal")
    ax.plot(cos_chi, f_model, color="tab:grey", linestyle="--", label="as-built model")

    # The three named strengths: none, the ideal optimum, and full.
    highlight = sorted({0, int(np.argmax(f_ideal)), cos_chi.size - 1})
    ax.plot(cos_chi[highlight], f_model[highlight], "o", color="tab:red",
            markersize=6, label="highlighted strengths", zorder=5)

    for path in job.points:
        points = parse_table(path)
        check_table(points, "protocol", ["cos_chi", "mc_f_avg", "mc_stderr"])
        xs = np.asarray(points.column("cos_chi"), dtype=float)
        ys = np.asarray(points.column("mc_f_avg"), dtype=float)
        es = np.asarray(points.column("mc_stderr"), dtype=float)
        keep = ~(np.isnan(ys) | np.isnan(es))
        ax.errorbar(xs[keep], ys[keep], yerr=es[keep], fmt="s", color="black",
                    markersize=4, capsize=3, label=os.path.basename(path))

    ax.set_xlabel("measurement strength cos(chi)")
    ax.set_ylabel("average fidelity")
    ax.set_title(job.title or "fidelity vs measurement strength")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.25)
    _save_atomic(fig, job.output, job.dpi)
    return {"highlighted_strengths": [float(cos_chi[i]) for i in highlight]}


def _render_bloch(job: FigureJob, table: Table):
    cos_chi = np.asarray(table.column("cos_chi"), dtype=float)
    fig = plt.figure(figsize=(5.2, 5.2))
    ax = fig.add_subplot(projection="3d")
    u = np.linspace(0.0, 2.0 * np.pi, 25)
    v = np.linspace(0.0, np.pi, 13)
    ax.plot_wireframe(np.outer(np.cos(u), np.sin(v)), np.outer(np.sin(u), np.sin(v)),
                      np.outer(np.ones_like(u), np.cos(v)),
                      color="lightgrey", linewidth=0.3)
    colors = plt.get_cmap(job.cmap)(np.linspace(0.15, 0.85, cos_chi.size))
    n_vectors = 0
    for idx in range(cos_chi.size):
        for prefix, style in (("bloch_plus", "-"), ("bloch_minus", "--")):
            x = float(table.column(f"{prefix}_x")[idx])
            y = float(table.column(f"{prefix}_y")[idx])
            z = float(table.column(f"{prefix}_z")[idx])
            ax.quiver(0, 0, 0, x, y, z, color=colors[idx], linestyle=style,
                      arrow_length_ratio=0.08, linewidth=1.6)
            ax.text(x * 1.12, y * 1.12, z * 1.12, f"{cos_chi[idx]:.2f}",
                    fontsize=7, color=colors[idx])
            n_vectors += 1
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_box_aspect((1, 1, 1))
    ax.set_title(job.title or "output states (label: cos(chi))")
    _save_atomic(fig, job.output, job.dpi)
    return {"n_vectors": n_vectors}


def render(job: FigureJob) -> dict:
    """Render one figure job; returns kind-specific info for callers."""
    table = parse_table(job.inputs[0])
    if job.kind == "contour-chi":
        check_table(table, "sweep", ["theta", "p", "cos_chi_opt"])
        return _render_contour(job, table, "cos_chi_opt", CHI_LEVELS,
                               "optimal strength cos(chi)", with_crossover=False)
    if job.kind == "contour-fdiff":
        check_table(table, "sweep", ["theta", "p", "f_diff", "f_dn", "f_h"])
        return _render_contour(job, table, "f_diff", FDIFF_LEVELS,
                               "improvement over limiting schemes", with_crossover=True)
    if job.kind == "fidelity-curve":
        check_table(table, "experiment-model", ["cos_chi", "f_ideal", "f_model"])
        return _render_fidelity_curve(job, table)
    check_table(table, "experiment-model",
                ["cos_chi", "bloch_plus_x", "bloch_plus_y", "bloch_plus_z",
                 "bloch_minus_x", "bloch_minus_y", "bloch_minus_z"])
    return _render_bloch(job, table)
