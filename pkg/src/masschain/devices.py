"""Passive interconnection devices and the dimensionless maps h(s) and g(s).

Every device is reduced to a real-rational admittance ``Y(s) = num(s)/den(s)``
(coefficients in descending powers, numpy ``polyval`` order).  Then

    h(s) = s m / Y(s) = m s den(s) / num(s),     g(s) = 1 / h(s).

All parameters are SI: stiffness N/m, damping N s/m, inertance kg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (AdmittanceZeroError, ConfigError, HypothesesUnmetError,
                     PoleAtZeroError)

LAYOUTS = ("L1", "L2", "rational")

# Building model used for the device comparison (storey mass, storey spring).
TABLE_MASS = 1.0e5
TABLE_STIFFNESS = 1.7e8


@dataclass(frozen=True)
class DeviceSpec:
    """A passive two-terminal interconnection.

    ``L1`` is spring + damper in parallel (``Y = c + k/s``), ``L2`` adds an
    inerter (``Y = b s + c + k/s``).  ``rational`` takes the admittance
    numerator/denominator coefficients directly.
    """

    layout: str
    k: float = 0.0
    c: float = 0.0
    b: float = 0.0
    name: str = ""
    num: tuple = field(default=(), repr=False)
    den: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.layout not in LAYOUTS:
            raise ConfigError(f"unknown layout {self.layout!r}; expected one of {LAYOUTS}")
        if self.layout == "rational":
            if not self.num or not self.den:
                raise ConfigError("rational device needs num and den coefficients")
            object.__setattr__(self, "num", tuple(float(v) for v in self.num))
            object.__setattr__(self, "den", tuple(float(v) for v in self.den))
            return
        if not self.k > 0:
            raise ConfigError(f"stiffness k must be positive, got {self.k}")
        if self.c < 0:
            raise ConfigError(f"damping c must be non-negative, got {self.c}")
        if self.b < 0:
            raise ConfigError(f"inertance b must be non-negative, got {self.b}")
        if self.layout == "L1" and self.b != 0:
            raise ConfigError("layout L1 has no inerter; use L2 for b > 0")

    @property
    def label(self):
        return self.name or self.layout

    def admittance_poly(self):
        """``(num, den)`` of Y(s) as descending coefficient arrays."""
        if self.layout == "L1":
            return np.array([self.c, self.k]), np.array([1.0, 0.0])
        if self.layout == "L2":
            return np.array([self.b, self.c, self.k]), np.array([1.0, 0.0])
        return np.array(self.num), np.array(self.den)

    def scaled(self, alpha):
        """Same layout with k, c, b all multiplied by ``alpha``."""
        if self.layout == "rational":
            return DeviceSpec("rational", name=self.name,
                              num=tuple(alpha * v for v in self.num), den=self.den)
        return DeviceSpec(self.layout, alpha * self.k, alpha * self.c, alpha * self.b, self.name)


DEVICE_1 = DeviceSpec("L1", k=TABLE_STIFFNESS, c=4.0e6, name="Device 1")
DEVICE_2 = DeviceSpec("L1", k=TABLE_STIFFNESS, c=6.0e6, name="Device 2")
DEVICE_3 = DeviceSpec("L2", k=TABLE_STIFFNESS, c=6.0e6, b=1.0e5, name="Device 3")
TABLE_DEVICES = (DEVICE_1, DEVICE_2, DEVICE_3)


def _maybe_scalar(x, scalar):
    return complex(x[()]) if scalar else x


def admittance(dev: DeviceSpec, s):
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=complex)
    num, den = dev.admittance_poly()
    dval = np.polyval(den, s)
    if np.any(dval == 0):
        raise PoleAtZeroError("admittance has a pole at the requested s")
    if dev.layout == "L1":
        y = dev.c + dev.k / s
    elif dev.layout == "L2":
        y = dev.b * s + dev.c + dev.k / s
    else:
        y = np.polyval(num, s) / dval
    return _maybe_scalar(y, scalar)


def h_poly(dev: DeviceSpec, m: float):
    """``(num, den)`` of h(s) = m s den_Y(s) / num_Y(s)."""
    num, den = dev.admittance_poly()
    return m * np.polymul([1.0, 0.0], den), num


def h_of_s(dev: DeviceSpec, m: float, s):
    """Dimensionless ``h = s m / Y(s)``; finite at s = 0 when Y has a pole there."""
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=complex)
    hn, hd = h_poly(dev, m)
    dval = np.polyval(hd, s)
    if np.any(dval == 0):
        raise AdmittanceZeroError("Y(s) = 0, h(s) is infinite")
    return _maybe_scalar(np.polyval(hn, s) / dval, scalar)


def g_of_s(dev: DeviceSpec, m: float, s):
    """``g = Y(s) / (s m) = 1 / h(s)``."""
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=complex)
    if np.any(s == 0):
        raise PoleAtZeroError("g(s) has a pole at s = 0")
    return _maybe_scalar(admittance(dev, s) / (s * m), scalar)


@dataclass(frozen=True)
class PositiveRealCheck:
    ok: bool
    witness: float | None = None

    def __bool__(self):
        return self.ok


def is_positive_real_on_axis(dev: DeviceSpec, omegas) -> PositiveRealCheck:
    """Necessary condition only: ``Re Y(j w) >= 0`` (to a relative 1e-12) on the grid."""
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size == 0:
        raise ValueError("empty frequency grid")
    omegas = omegas[omegas != 0]
    y = admittance(dev, 1j * omegas)
    bad = np.flatnonzero(y.real < -1e-12 * np.abs(y))
    if bad.size:
        return PositiveRealCheck(False, float(omegas[bad[0]]))
    return PositiveRealCheck(True)


# --- low-frequency expansion -------------------------------------------------

@dataclass(frozen=True)
class TaylorConstants:
    """Constants of ``h(jw) = -c1 w^2 + j c2 w^3 + w^4 h1(jw)``, ``|h1| <= c3`` on [0, w1]."""

    c1: float
    c2: float
    c3: float
    c4: float
    omega0: float
    omega1: float
    h1_at_zero: complex = 0j

    def omega0_candidates(self):
        return {
            "one": 1.0,
            "omega1": self.omega1,
            "sqrt(2/(c1+c3))": math.sqrt(2.0 / (self.c1 + self.c3)),
            "c2/c3": self.c2 / self.c3 if self.c3 > 0 else math.inf,
            "sqrt(2*c4/c2)": math.sqrt(2.0 * self.c4 / self.c2),
        }

    def to_dict(self):
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4,
                "omega0": self.omega0, "omega1": self.omega1}


def _ascending(p):
    return np.trim_zeros(np.asarray(p, float), "f")[::-1]


def _series(num_asc, den_asc, order):
    """First ``order+1`` power-series coefficients of num/den about 0."""
    num = np.zeros(order + 1)
    n = min(len(num_asc), order + 1)
    num[:n] = num_asc[:n]
    den = np.zeros(order + 1)
    n = min(len(den_asc), order + 1)
    den[:n] = den_asc[:n]
    if den[0] == 0:
        raise HypothesesUnmetError("h(s) has a pole at s = 0")
    out = np.zeros(order + 1)
    for n in range(order + 1):
        out[n] = (num[n] - np.dot(out[:n], den[n:0:-1])) / den[0]
    return out


def h1_poly(dev: DeviceSpec, m: float):
    """``(num, den)`` (descending) of the quartic remainder h1(s) = (h - a2 s^2 - a3 s^3)/s^4.

    Built by exact polynomial subtraction so h1 can be evaluated near s = 0
    without cancellation.
    """
    hn, hd = h_poly(dev, m)
    hn_a, hd_a = _ascending(hn), _ascending(hd)
    a = _series(hn_a, hd_a, 3)
    T = np.array([0.0, 0.0, a[2], a[3]])
    size = max(len(hn_a), len(T) + len(hd_a) - 1)
    R = np.zeros(size)
    R[:len(hn_a)] += hn_a
    R[:len(T) + len(hd_a) - 1] -= np.convolve(T, hd_a)
    R = R[4:] if size > 4 else np.zeros(1)
    return R[::-1], hd_a[::-1], a


def taylor_constants(dev: DeviceSpec, m: float, omega1: float | None = None,
                     n_grid: int = 4096, safety: float = 1.01) -> TaylorConstants:
    """Low-frequency constants c1..c4, omega0 for the boundedness argument.

    ``omega1`` defaults to half of ``sqrt(k/m)``.  c3 is the maximum of
    ``|h1(jw)|`` over a log grid on ``[1e-6 omega1, omega1]`` together with the
    exact value at w = 0, inflated by ``safety``.
    """
    if dev.layout != "rational":
        if not dev.k > 0:
            raise HypothesesUnmetError("k <= 0: no spring in the interconnection")
        if not dev.c > 0:
            raise HypothesesUnmetError("Y1(0) = 0: no damping at zero frequency")
    if m <= 0:
        raise ConfigError("mass must be positive")
    r_num, r_den, a = h1_poly(dev, m)
    if abs(a[0]) > 1e-14 * max(1.0, abs(a[2])) or abs(a[1]) > 1e-14 * max(1.0, abs(a[2])):
        raise HypothesesUnmetError("h(s) does not vanish to second order at s = 0")
    c1, c2 = float(a[2]), float(-a[3])
    if not c1 > 0:
        raise HypothesesUnmetError("k <= 0: c1 = m/k is not positive")
    if not c2 > 0:
        raise HypothesesUnmetError("Y1(0) = 0: c2 is not positive")
    if omega1 is None:
        omega1 = 0.5 * math.sqrt(1.0 / c1)  # c1 = m/k
    if not omega1 > 0:
        raise ConfigError("omega1 must be positive")
    w = np.geomspace(1e-6 * omega1, omega1, n_grid)
    h1 = np.polyval(r_num, 1j * w) / np.polyval(r_den, 1j * w)
    h1_0 = complex(np.polyval(r_num, 0) / np.polyval(r_den, 0))
    c3 = safety * max(float(np.max(np.abs(h1))), abs(h1_0))
    c4 = math.sqrt(2.0 * (2 * c1 + c2 + 2 * c3))
    cands = [1.0, omega1, math.sqrt(2.0 / (c1 + c3)),
             c2 / c3 if c3 > 0 else math.inf, math.sqrt(2.0 * c4 / c2)]
    return TaylorConstants(c1, c2, c3, c4, min(cands), omega1, h1_0)
