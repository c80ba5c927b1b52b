"""Uniform-in-N bounds on the intermass H-infinity norms.

Two bands are treated separately:

* high band (w >= omega0): h(jw) stays on or outside an ellipse with foci
  -4 and 0, where ``sup_N |F_N^{(i)}|`` is controlled by ``|zeta|`` alone;
* low band (w < omega0): h(jw) -> 0, and the bound comes from the quadratic
  and cubic Taylor terms of h.

The global bound is the larger of the two.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..devices import DeviceSpec, TaylorConstants, h_of_s, taylor_constants
from ..errors import DegenerateConstantsError, HypothesesUnmetError, OnCutError
from ..mobius import abs_F_fixed_i, zeta
from .response import default_omegas
from .stability import natural_frequency, stability_check


def semi_major_axis(h):
    h = np.asarray(h, dtype=complex)
    return (np.abs(h) + np.abs(h + 4)) / 2


def zeta_modulus_from_axis(A):
    """``(A - sqrt(A^2-4))/2`` written as ``2/(A + sqrt(A^2-4))``."""
    return 2.0 / (A + math.sqrt(A * A - 4.0))


def ellipse_value(zm):
    return (1 + zm) * (1 + zm * zm) / (1 - zm ** 3)


def ellipse_bound(h) -> float:
    """Bound on ``sup_{N>=i} |F_N^{(i)}(h)|`` valid for every i, h off [-4, 0]."""
    A = float(semi_major_axis(h))
    if A <= 2 + 1e-14:
        raise OnCutError(f"h={complex(h)} lies on [-4, 0] (A={A!r})")
    return ellipse_value(zeta_modulus_from_axis(A))


def low_freq_bound(tc: TaylorConstants) -> float:
    w0 = tc.omega0
    rate = (tc.c2 - w0 * tc.c3) * math.pi * w0 / (8 * tc.c4 ** 2)
    if not rate > 0:
        raise DegenerateConstantsError(
            f"exponent argument {rate!r} <= 0; need c2 > omega0 * c3")
    return 2 * math.sqrt(tc.c1 + tc.c2 + tc.c3) * w0 / (-math.expm1(-rate))


@dataclass
class BoundReport:
    taylor: TaylorConstants
    low_freq_bound: float
    A0: float
    omega_A0: float
    zeta0_mod: float
    high_freq_bound: float
    global_bound: float
    empirical_sup: float
    empirical_omega: float

    @property
    def sound(self):
        return self.global_bound >= self.empirical_sup

    def to_dict(self):
        d = asdict(self)
        d["taylor"] = self.taylor.to_dict()
        d["sound"] = self.sound
        return d


def minimise_A(dev: DeviceSpec, m: float, omega0: float, n_grid: int = 2000):
    """``min_{w >= omega0} (|h| + |h+4|)/2`` on a log grid plus Brent refinement."""
    wn = natural_frequency(dev, m)
    hi = max(1e4 * wn, 10 * omega0)
    t = np.linspace(math.log(omega0), math.log(hi), n_grid)
    A = semi_major_axis(h_of_s(dev, m, 1j * np.exp(t)))
    j = int(np.argmin(A))
    best_t, best_A = t[j], float(A[j])
    lo_t, hi_t = t[max(j - 1, 0)], t[min(j + 1, n_grid - 1)]
    if hi_t > lo_t:
        res = minimize_scalar(
            lambda x: float(semi_major_axis(h_of_s(dev, m, 1j * math.exp(x)))),
            bounds=(lo_t, hi_t), method="bounded", options={"xatol": 1e-12})
        if res.fun < best_A:
            best_t, best_A = res.x, float(res.fun)
    return best_A, math.exp(best_t)


def empirical_sup(dev: DeviceSpec, m: float, i_max: int = 5, n_max: int = 200,
                  omegas=None):
    """Largest sampled ``|F_N^{(i)}(h(jw))|`` over i <= i_max, i <= N <= n_max."""
    if omegas is None:
        omegas = default_omegas(dev, m)
    z = zeta(h_of_s(dev, m, 1j * np.asarray(omegas)))
    best, where = 0.0, float(omegas[0])
    for i in range(1, min(i_max, n_max) + 1):
        per_w = abs_F_fixed_i(z, i, n_max).max(axis=-1)
        j = int(np.nanargmax(per_w))
        if per_w[j] > best:
            best, where = float(per_w[j]), float(omegas[j])
    return best, where


def global_bound(dev: DeviceSpec, m: float, omega1: float | None = None,
                 i_max: int = 5, n_max: int = 200) -> BoundReport:
    rep = stability_check(dev, m)
    if not rep.stable:
        raise HypothesesUnmetError("h(jw) enters (-4,0)")
    if rep.boundary_touches:
        raise HypothesesUnmetError("h(jw) touches -4")
    tc = taylor_constants(dev, m, omega1)
    low = low_freq_bound(tc)
    A0, wA = minimise_A(dev, m, tc.omega0)
    if A0 <= 2 + 1e-14:
        raise HypothesesUnmetError("h(jw) touches [-4,0] above omega0")
    zm = zeta_modulus_from_axis(A0)
    high = ellipse_value(zm)
    emp, w_emp = empirical_sup(dev, m, i_max, n_max)
    return BoundReport(tc, low, A0, wA, zm, high, max(low, high), emp, w_emp)
