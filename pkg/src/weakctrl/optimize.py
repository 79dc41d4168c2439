"""Derivative-free 1-D maximisation used by the sweep and gate-model code."""

from __future__ import annotations

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Maximise ``f`` on [lo, hi] by golden-section search.

    Assumes ``f`` is unimodal on the bracket; returns (argmax, value).
    Degenerate brackets (hi <= lo + tol) return the midpoint.
    """
    if hi < lo:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    if hi - lo <= tol:
        mid = 0.5 * (lo + hi)
        return mid, f(mid)
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
