"""Scalar maps over the g-plane (g = 1/h) and their level curves.

Four metrics are supported:

``AbsZeta``     |zeta(h)|, the convergence rate of F_N towards its limit
``AbsMuPlus1``  |mu_+^{(1)}(h)|, the N -> infinity limit of |F_N^{(1)}|
``MaxF_i1``     max over i <= N <= n_max of |F_N^{(i)}| for one fixed i (default 1)
``MaxF_allI``   max over 1 <= i <= N <= n_max of |F_N^{(i)}|

Cells on the cut (real g < -1/4, i.e. h in (-4, 0)) are excluded.  Level
curves are traced on ln(metric) so levels are given as ln(gamma).
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import contourpy
import numpy as np

from ..errors import ConfigError
from ..mobius import (F_orbit, abs_F_fixed_i, max_abs_F_over_i, zeta_from_g)


class Metric(str, enum.Enum):
    ABS_ZETA = "AbsZeta"
    ABS_MU_PLUS_1 = "AbsMuPlus1"
    MAX_F_I1 = "MaxF_i1"
    MAX_F_ALL_I = "MaxF_allI"


MIN_TRACE_POINTS = 3

DEFAULT_LEVELS = {
    Metric.ABS_ZETA: [round(-2.0 + 0.2 * k, 10) for k in range(10)],
    Metric.ABS_MU_PLUS_1: [round(-1.5 + 0.1 * k, 10) for k in range(22)],
    Metric.MAX_F_I1: [round(0.2 * k, 10) for k in range(16)],
    Metric.MAX_F_ALL_I: [round(0.2 * k, 10) for k in range(16)],
}


@dataclass(frozen=True)
class Region:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(np.isfinite(vals)) or self.re_min >= self.re_max or self.im_min >= self.im_max:
            raise ConfigError(f"malformed region {vals}")

    def as_list(self):
        return [self.re_min, self.re_max, self.im_min, self.im_max]


@dataclass
class GridResult:
    region: Region
    resolution: tuple
    metric: Metric
    n_max: int
    i: int
    re: np.ndarray
    im: np.ndarray
    values: np.ndarray         # shape (ny, nx); NaN on excluded cells
    excluded_mask: np.ndarray  # shape (ny, nx)
    contours: list = field(default_factory=list)  # [(ln_gamma, [polyline (k, 2)])]

    @property
    def g(self):
        return self.re[None, :] + 1j * self.im[:, None]


def evaluate_metric(g, metric, n_max: int = 200, i: int = 1) -> np.ndarray:
    """Metric at arbitrary g values (no masking; cut points fall back to the recursion)."""
    metric = Metric(metric)
    g = np.asarray(g, dtype=complex)
    z = zeta_from_g(g)
    if metric is Metric.ABS_ZETA:
        return np.abs(z)
    if metric is Metric.ABS_MU_PLUS_1:
        return np.abs(1 - z)
    if metric is Metric.MAX_F_I1:
        out = abs_F_fixed_i(z, i, n_max).max(axis=-1)
    else:
        out = max_abs_F_over_i(z, n_max).max(axis=-1)
    bad = ~np.isfinite(out)
    if np.any(bad):
        # only happens where 1 + zeta^(2N+1) = 0, i.e. on the closed cut
        flat = out.reshape(-1)
        for k in np.flatnonzero(bad.reshape(-1)):
            flat[k] = _metric_by_recursion(1 / g.reshape(-1)[k], metric, n_max, i)
        out = flat.reshape(out.shape)
    return out


def _metric_by_recursion(h, metric, n_max, i):
    if metric is Metric.MAX_F_I1:
        return float(np.abs(F_orbit(i, h, n_max)).max())
    return max(float(np.abs(F_orbit(k, h, n_max)).max()) for k in range(1, n_max + 1))


def excluded_cells(re, im):
    dy = (im[-1] - im[0]) / (len(im) - 1)
    return (np.abs(im)[:, None] < dy / 2) & (re[None, :] < -0.25)


def _log_metric(func, pts):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(func(pts[:, 0] + 1j * pts[:, 1]))


def polish_vertices(lines, re, im, func, level, tol=2e-3, iters=40):
    """Move vertices along their grid edge until ``ln func`` equals ``level``.

    Marching squares places each vertex on a cell edge whose end values
    straddle the level, by linear interpolation.  Where the field is too rough
    for that (next to the cut) the vertex is re-placed by bisection on the same
    edge, so the polyline topology is unchanged.  Only vertices off by more
    than ``tol`` in ln are touched.
    """
    if not lines:
        return lines
    sizes = [len(ln) for ln in lines]
    pts = np.concatenate(lines).astype(float)
    err = _log_metric(func, pts) - level
    todo = np.flatnonzero(~(np.abs(err) <= tol))
    if todo.size:
        fx = (pts[todo, 0] - re[0]) / (re[1] - re[0])
        fy = (pts[todo, 1] - im[0]) / (im[1] - im[0])
        on_col = np.abs(fx - np.round(fx)) < 1e-9
        on_row = np.abs(fy - np.round(fy)) < 1e-9
        a, b = pts[todo].copy(), pts[todo].copy()
        vert, horiz = on_col & ~on_row, on_row & ~on_col
        j = np.clip(np.floor(fy[vert]).astype(int), 0, len(im) - 2)
        a[vert, 1], b[vert, 1] = im[j], im[j + 1]
        k = np.clip(np.floor(fx[horiz]).astype(int), 0, len(re) - 2)
        a[horiz, 0], b[horiz, 0] = re[k], re[k + 1]
        fa, fb = _log_metric(func, a) - level, _log_metric(func, b) - level
        ok = (vert | horiz) & (fa * fb <= 0)
        a, b, fa = a[ok], b[ok], fa[ok]
        for _ in range(iters):
            mid = 0.5 * (a + b)
            fm = _log_metric(func, mid) - level
            left = fa * fm <= 0
            b = np.where(left[:, None], mid, b)
            a = np.where(left[:, None], a, mid)
            fa = np.where(left, fa, fm)
        pts[todo[ok]] = 0.5 * (a + b)
    return np.split(pts, np.cumsum(sizes)[:-1])


def trace_contours(re, im, values, levels, func=None):
    """Level curves of ln(values) via contourpy's marching-squares generator.

    With ``func`` (the metric as a function of complex g) the vertices are
    polished onto their level, see :func:`polish_vertices`.
    """
    with np.errstate(divide="ignore"):
        z = np.ma.masked_invalid(np.log(values))
    # a single cell row/column cannot resolve a level curve
    if z.count() == 0 or min(z.shape) < MIN_TRACE_POINTS:
        return [(float(lv), []) for lv in levels]
    # corner_mask=False keeps every vertex on a grid edge (needed for polishing)
    gen = contourpy.contour_generator(re, im, z, line_type="Separate", corner_mask=False)
    out = []
    for lv in levels:
        lines = [np.asarray(p) for p in gen.lines(lv)]
        if func is not None:
            lines = polish_vertices(lines, re, im, func, lv)
        out.append((float(lv), lines))
    return out


def contour_grid(region: Region, resolution, metric, n_max: int = 200,
                 levels=None, i: int = 1, workers: int = 1) -> GridResult:
    metric = Metric(metric)
    nx, ny = (int(r) for r in resolution)
    if nx < 2 or ny < 2:
        raise ConfigError("resolution must be at least 2 x 2")
    if n_max < 1:
        raise ConfigError("n_max must be >= 1")
    if metric is Metric.MAX_F_I1 and not 1 <= i <= n_max:
        raise ConfigError(f"need 1 <= i <= n_max, got i={i}")
    re = np.linspace(region.re_min, region.re_max, nx)
    im = np.linspace(region.im_min, region.im_max, ny)
    mask = excluded_cells(re, im)
    g = re[None, :] + 1j * im[:, None]

    def row_block(rows):
        return evaluate_metric(g[rows], metric, n_max, i)

    step = max(1, 20000 // nx)
    blocks = [slice(k, min(k + step, ny)) for k in range(0, ny, step)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(row_block, blocks))
    else:
        parts = [row_block(b) for b in blocks]
    values = np.concatenate(parts, axis=0)
    values[mask] = np.nan

    if levels is None:
        levels = DEFAULT_LEVELS[metric]
    contours = trace_contours(re, im, values, levels,
                              func=lambda pts: evaluate_metric(pts, metric, n_max, i))
    return GridResult(region, (nx, ny), metric, n_max, i, re, im, values, mask, contours)
