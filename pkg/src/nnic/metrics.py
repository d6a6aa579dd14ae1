"""Quality/rate metrics: PSNR and the Bjontegaard delta metrics.

BD metrics fit a cubic polynomial through the four (PSNR, log rate)
points of each curve and integrate the difference over the overlapping
interval; if the plain cubic fit is ill-conditioned a piecewise monotone
cubic is used instead.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import interpolate


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB between two frames; inf if equal."""
    if a.width != b.width or a.height != b.height:
        raise ValueError("dimension mismatch")
    mse = float(((a.samples.astype(np.float64) - b.samples) ** 2).mean())
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


def _curve(points):
    pts = sorted((float(p), float(r)) for r, p in points)
    qual = np.array([p for p, _ in pts])
    rate = np.array([r for _, r in pts])
    if len(pts) != 4:
        raise ValueError("BD metrics need exactly 4 rate points per curve")
    if (rate <= 0).any():
        raise ValueError("rates must be positive")
    if (np.diff(qual) <= 0).any() or (np.diff(rate) <= 0).any():
        raise ValueError("degenerate curve: rate/quality not strictly monotonic")
    return qual, np.log(rate)


def _integrate(x, y, lo, hi) -> float:
    """Integral of the fitted y(x) over [lo, hi]."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", np.exceptions.RankWarning)
        try:
            poly = np.polyfit(x, y, 3)
            prim = np.polyint(poly)
            return float(np.polyval(prim, hi) - np.polyval(prim, lo))
        except np.exceptions.RankWarning:
            pass
    xs = np.linspace(lo, hi, 200)
    ys = interpolate.pchip_interpolate(x, y, xs)
    return float(np.trapezoid(ys, xs))


def _overlap(a, b):
    lo = max(a.min(), b.min())
    hi = min(a.max(), b.max())
    if hi <= lo:
        raise ValueError("non-overlapping curves")
    return lo, hi


def bd_rate(anchor, test) -> float:
    """Average rate difference of test vs anchor at equal quality, percent.

    Negative values mean the test curve needs fewer bits.
    """
    qa, ra = _curve(anchor)
    qt, rt = _curve(test)
    lo, hi = _overlap(qa, qt)
    avg = (_integrate(qt, rt, lo, hi) - _integrate(qa, ra, lo, hi)) / (hi - lo)
    return (math.exp(avg) - 1.0) * 100.0


def bd_psnr(anchor, test) -> float:
    """Average quality difference of test vs anchor at equal rate, dB."""
    qa, ra = _curve(anchor)
    qt, rt = _curve(test)
    lo, hi = _overlap(ra, rt)
    return (_integrate(rt, qt, lo, hi) - _integrate(ra, qa, lo, hi)) / (hi - lo)
