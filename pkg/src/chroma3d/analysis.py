"""Threshold and scaling estimation from sampling reports, plus decode timing.

All fits operate in log-log space. Quoted confidence intervals propagate the
sampling uncertainty only.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class CurvePoint:
    p_phys: float
    p_L: float
    eps: float


@dataclass(frozen=True)
class ThresholdEstimate:
    value: Optional[float]   # None when no crossing exists in the window
    lower: Optional[float]
    upper: Optional[float]

    @property
    def found(self) -> bool:
        return self.value is not None


def _as_curve(points) -> list[CurvePoint]:
    out = [p if isinstance(p, CurvePoint) else CurvePoint(*p) for p in points]
    out = sorted(out, key=lambda c: c.p_phys)
    if len({c.p_phys for c in out}) != len(out):
        raise ValueError("duplicate p_phys values in curve")
    return out


def _loglog_segments(curve: list[CurvePoint], shift: float = 0.0):
    """(log p, log pL) points with pL shifted by `shift` times eps."""
    pts = []
    for c in curve:
        y = c.p_L + shift * c.eps
        if c.p_phys > 0 and y > 0:
            pts.append((math.log(c.p_phys), math.log(y)))
    return pts


def _crossing_with_identity(pts) -> Optional[float]:
    """p where the interpolated log-log curve meets p_L = p_phys."""
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        f0, f1 = y0 - x0, y1 - x1
        if f0 == 0:
            return math.exp(x0)
        if f0 * f1 < 0 or f1 == 0:
            t = f0 / (f0 - f1)
            return math.exp(x0 + t * (x1 - x0))
    return None


def pseudothreshold(points) -> ThresholdEstimate:
    """Breakeven point of physical and logical error rates for one curve.

    Log-log linear interpolation between the two bracketing samples; the
    interval comes from repeating the estimate on the +-eps shifted curves.
    """
    curve = _as_curve(points)
    val = _crossing_with_identity(_loglog_segments(curve))
    if val is None:
        return ThresholdEstimate(None, None, None)
    lo = _crossing_with_identity(_loglog_segments(curve, shift=-1.0))
    hi = _crossing_with_identity(_loglog_segments(curve, shift=+1.0))
    bounds = sorted(x for x in (lo, hi) if x is not None)
    return ThresholdEstimate(
        val,
        bounds[0] if bounds else None,
        bounds[-1] if bounds else None,
    )


def _curve_intersection(pts_a, pts_b) -> Optional[float]:
    xs = sorted({x for x, _ in pts_a} | {x for x, _ in pts_b})

    def interp(pts, x):
        if x < pts[0][0] or x > pts[-1][0]:
            return None
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 <= x <= x1:
                if x1 == x0:
                    return y0
                t = (x - x0) / (x1 - x0)
                return y0 + t * (y1 - y0)
        return None

    prev = None
    for x in xs:
        ya, yb = interp(pts_a, x), interp(pts_b, x)
        if ya is None or yb is None:
            prev = None
            continue
        diff = ya - yb
        if prev is not None:
            x0, d0 = prev
            if d0 == 0:
                return math.exp(x0)
            if d0 * diff < 0 or diff == 0:
                t = d0 / (d0 - diff)
                return math.exp(x0 + t * (x - x0))
        prev = (x, diff)
    return None


def cross_threshold(points_low_d, points_high_d) -> ThresholdEstimate:
    """Crossing point of the failure-rate curves of two distances."""
    a = _as_curve(points_low_d)
    b = _as_curve(points_high_d)
    val = _curve_intersection(_loglog_segments(a), _loglog_segments(b))
    if val is None:
        return ThresholdEstimate(None, None, None)
    lo = _curve_intersection(_loglog_segments(a, -1.0), _loglog_segments(b, +1.0))
    hi = _curve_intersection(_loglog_segments(a, +1.0), _loglog_segments(b, -1.0))
    bounds = sorted(x for x in (lo, hi) if x is not None)
    return ThresholdEstimate(
        val,
        bounds[0] if bounds else None,
        bounds[-1] if bounds else None,
    )


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    slope_err: float
    intercept: float


def subthreshold_exponent(points) -> SlopeFit:
    """Weighted least-squares slope of log p_L against log p_phys.

    Points with non-positive p_L are excluded; fewer than three usable points
    is an error.
    """
    curve = _as_curve(points)
    xs, ys, ws = [], [], []
    for c in curve:
        if c.p_phys <= 0 or c.p_L <= 0:
            continue
        xs.append(math.log(c.p_phys))
        ys.append(math.log(c.p_L))
        sigma = c.eps / c.p_L if c.eps > 0 else 1.0
        ws.append(1.0 / sigma**2)
    if len(xs) < 3:
        raise ValueError("need at least three points with positive p_L")
    sw = sum(ws)
    xb = sum(w * x for w, x in zip(ws, xs)) / sw
    yb = sum(w * y for w, y in zip(ws, ys)) / sw
    sxx = sum(w * (x - xb) ** 2 for w, x in zip(ws, xs))
    sxy = sum(w * (x - xb) * (y - yb) for w, x, y in zip(ws, xs, ys))
    slope = sxy / sxx
    return SlopeFit(slope=slope, slope_err=math.sqrt(1.0 / sxx), intercept=yb - slope * xb)


# --------------------------------------------------------------------------
# runtime benchmarking
# --------------------------------------------------------------------------

def bench_decode(family: str, d_list: Sequence[int], repetitions: int = 5,
                 p_sample: float = 0.02, seed: int = 7) -> list[dict]:
    """Median wall time of one decoding path and of a full 12-path decode."""
    import numpy as np

    from .decoder import ALL_PATHS, Decoder
    from .lattice import build
    from .sampling import Sampler

    rows = []
    for d in d_list:
        lattice = build(family, d)
        sampler = Sampler(lattice)
        dec = Decoder(lattice)
        rng = np.random.Generator(np.random.Philox(key=[seed, d]))
        supports = [
            tuple(np.flatnonzero(rng.random(lattice.n) < p_sample))
            for _ in range(repetitions)
        ]
        defect_sets = [sampler.cell_defects_z(s) for s in supports]
        # warm the cached stage graphs and distance matrices
        for p in ALL_PATHS:
            dec.decode_path(defect_sets[0] or frozenset(), p)
        single, full = [], []
        for defects in defect_sets:
            t0 = time.perf_counter()
            for p in ALL_PATHS:
                dec.decode_path(defects, p)
            full.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            dec.decode_path(defects, ALL_PATHS[0])
            single.append(time.perf_counter() - t0)
        rows.append(
            {
                "family": family,
                "d": d,
                "n": lattice.n,
                "t_single_path": sorted(single)[len(single) // 2],
                "t_full_decode": sorted(full)[len(full) // 2],
                "repetitions": repetitions,
            }
        )
    return rows


def analysis_json(results: dict) -> str:
    return json.dumps({"format": "analysis.v1", **results}, sort_keys=True,
                      separators=(",", ":"), default=float)
