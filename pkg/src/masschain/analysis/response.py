"""Frequency responses of the intermass transfer functions and their H-infinity norms.

On a stable chain the transfer functions are analytic in the closed right
half plane, so their H-infinity norm is the supremum of the modulus along the
imaginary axis.  We estimate that supremum with a log-spaced sweep and then
polish the largest local maxima by golden-section search in log frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..devices import DeviceSpec, g_of_s, h_of_s
from ..errors import ConfigError, InstabilityError
from ..mobius import F_closed_zeta, max_abs_F_over_i, zeta
from .stability import natural_frequency, stability_check

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Peak:
    value: float
    omega: float


def default_omegas(dev: DeviceSpec, m: float, n: int = 2000, span=(1e-3, 1e3)):
    wn = natural_frequency(dev, m)
    return np.geomspace(span[0] * wn, span[1] * wn, n)


def golden_max(f, a, b, tol=1e-10, max_iter=200):
    """Maximise a unimodal scalar function on [a, b]; returns (x, f(x))."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def refined_sup(func, omegas, max_peaks: int = 25) -> Peak:
    """Sup of ``func`` (vectorised over w) from a sweep plus local refinement.

    Only the ``max_peaks`` largest interior local maxima of the sweep are
    refined; the rest cannot beat the refined ones by more than the
    sweep resolution.
    """
    omegas = np.asarray(omegas, dtype=float)
    vals = np.asarray(func(omegas), dtype=float)
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    best = int(np.argmax(vals))
    peak = Peak(float(vals[best]), float(omegas[best]))
    inner = np.flatnonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    if inner.size == 0:
        return peak
    inner = inner[np.argsort(vals[inner])[::-1][:max_peaks]]
    x = np.log(omegas)

    def f(t):
        return float(func(np.array([math.exp(t)]))[0])

    for j in inner:
        t, v = golden_max(f, x[j - 1], x[j + 1])
        if v > peak.value:
            peak = Peak(v, math.exp(t))
    return peak


def _require_stable(dev, m):
    rep = stability_check(dev, m)
    if not rep.stable:
        where = ", ".join(f"w={w:.6g}" for w, _ in rep.crossings[:3])
        raise InstabilityError(f"{dev.label}: h(jw) enters (-4, 0) ({where or rep.status})")
    return rep


def hinf_norm(dev: DeviceSpec, m: float, i: int, N: int,
              n_grid: int = 2000, span=(1e-3, 1e3), check_stability: bool = True) -> float:
    """H-infinity norm of ``F_N^{(i)}(h(s))`` for the given device and mass."""
    if not 1 <= i <= N:
        raise ConfigError(f"need 1 <= i <= N, got i={i}, N={N}")
    if check_stability:
        _require_stable(dev, m)

    def absF(w):
        return np.abs(F_closed_zeta(zeta(h_of_s(dev, m, 1j * w)), i, N))

    return refined_sup(absF, default_omegas(dev, m, n_grid, span)).value


def max_over_chain(dev: DeviceSpec, m: float, omegas, Ns) -> np.ndarray:
    """``max_{i<=N} |F_N^{(i)}(h(jw))|``; one column per entry of ``Ns``."""
    Ns = np.asarray(Ns, dtype=int)
    if Ns.size == 0 or np.any(Ns < 1):
        raise ConfigError("need a non-empty list of chain lengths N >= 1")
    z = zeta(h_of_s(dev, m, 1j * np.asarray(omegas, dtype=float)))
    table = max_abs_F_over_i(z, int(Ns.max()))
    return table[..., Ns - 1]


def worst_case_hinf(dev: DeviceSpec, m: float, n_max: int = 200,
                    n_grid: int = 2000, span=(1e-3, 1e3)) -> Peak:
    """``sup_w max_{1<=i<=N<=n_max} |F_N^{(i)}(h(jw))|``."""
    _require_stable(dev, m)

    def f(w):
        z = zeta(h_of_s(dev, m, 1j * w))
        return max_abs_F_over_i(z, n_max).max(axis=-1)

    return refined_sup(f, default_omegas(dev, m, n_grid, span))


def nyquist_locus(dev: DeviceSpec, m: float, omegas) -> np.ndarray:
    """``g(jw) = Y(jw)/(jw m)`` on a positive frequency grid."""
    omegas = np.asarray(omegas, dtype=float)
    if np.any(omegas <= 0):
        raise ConfigError("Nyquist frequencies must be positive")
    return g_of_s(dev, m, 1j * omegas)
