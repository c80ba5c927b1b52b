"""Iterated Moebius-map representation of the intermass transfer functions.

For fixed ``h`` the sequence ``F_N^{(i)}`` (N = i-1, i, i+1, ...) is the orbit
of 0 under ``f_i(z) = (d_{i-2} z + h) / (z + d_i)``.  Conjugating ``f_i`` to
``z -> zeta**2 z`` gives the closed form

    F_N^{(i)} = mu_+^{(i)} (1 - zeta**(2(N-i+1))) / (1 + zeta**(2N+1)),

with ``zeta`` the small root of ``zeta**2 - (h+2) zeta + 1 = 0`` and
``mu_+^{(i)} = zeta**(i-1) (1 - zeta)`` the attracting fixed point.

Scalar functions accept Python numbers; the ``*_zeta`` kernels take numpy
arrays of ``zeta`` and are what the grid and frequency sweeps use.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .chain_core import ChainConfig, d_seq
from .errors import BreakdownError, DenominatorVanishesError

BREAKDOWN_RTOL = 1e-12
DENOM_ATOL = 1e-12
_LOG_TINY = np.log(1e-300)


class MapClass(str, enum.Enum):
    PARABOLIC = "Parabolic"
    ELLIPTIC = "Elliptic"
    LOXODROMIC = "Loxodromic"


@dataclass(frozen=True)
class FixedPointPair:
    i: int
    mu_plus: complex
    mu_minus: complex


@dataclass(frozen=True)
class MobiusData:
    h: complex
    zeta: complex
    mu_plus_1: complex
    classification: MapClass
    d: tuple = ()

    def to_dict(self):
        def c(z):
            return [z.real, z.imag]
        return {
            "h": c(self.h),
            "zeta": c(self.zeta),
            "abs_zeta": abs(self.zeta),
            "mu_plus_1": c(self.mu_plus_1),
            "abs_mu_plus_1": abs(self.mu_plus_1),
            "classification": self.classification.value,
            "d": [c(complex(v)) for v in self.d],
        }


@dataclass(frozen=True)
class SupResult:
    """``max_N |F_N^{(i)}|`` over ``N = i..N_max`` and where it was attained."""

    value: float
    argmax_N: int
    at_n_max: bool
    converges: bool


def _scalar_or_array(x, was_scalar):
    return complex(x[()]) if was_scalar else x


def zeta(h):
    """Root of ``z**2 - (h+2) z + 1`` with ``|z| <= 1``.

    On the cut ``h in [-4, 0]`` both roots have unit modulus and the one with
    ``Im(zeta) <= 0`` is returned.  ``h = inf`` maps to 0.
    """
    scalar = np.ndim(h) == 0
    h = np.asarray(h, dtype=complex)
    with np.errstate(all="ignore"):
        w = h + 2.0
        # h(h+4) == w**2 - 4 without the cancellation near h = 0 and h = -4
        q = np.sqrt(h * (h + 4.0))
        a, b = w + q, w - q
        z = np.where(np.abs(a) >= np.abs(b), 2.0 / a, 2.0 / b)
        cut = (h.imag == 0) & (h.real >= -4.0) & (h.real <= 0.0)
        if np.any(cut):
            hr = h.real[cut]
            z[cut] = (hr + 2.0 - 1j * np.sqrt(np.clip(-hr * (hr + 4.0), 0.0, None))) / 2.0
        z = np.where(np.isinf(h), 0.0, z)
    return _scalar_or_array(z, scalar)


def zeta_from_g(g):
    """``zeta(1/g)`` with ``g = 0`` (``h = inf``) mapped to 0."""
    g = np.asarray(g, dtype=complex)
    with np.errstate(all="ignore"):
        h = np.where(g == 0, np.inf, 1.0 / np.where(g == 0, 1.0, g))
    return zeta(h)


def zeta_power(z, n):
    """``z**n`` evaluated in polar form; underflows cleanly to 0 for |z| < 1."""
    z = np.asarray(z, dtype=complex)
    n = np.asarray(n)
    with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
        r = np.abs(z)
        mag = np.where(n == 0, 1.0, np.where(r == 0, 0.0, np.exp(n * np.log(np.where(r == 0, 1.0, r)))))
        out = mag * np.exp(1j * n * np.angle(z))
    return out


def classify_map(h) -> MapClass:
    h = complex(h)
    if h == 0 or h == -4:
        return MapClass.PARABOLIC
    if h.imag == 0 and -4 < h.real < 0:
        return MapClass.ELLIPTIC
    return MapClass.LOXODROMIC


def on_cut(h) -> bool:
    h = complex(h)
    return h.imag == 0 and -4 <= h.real <= 0


def mu_plus(i: int, h) -> complex:
    if i < 1:
        raise ValueError("i must be >= 1")
    z = zeta(h)
    return complex(zeta_power(z, i - 1)) * (1 - z)


def mu_minus(i: int, h) -> complex:
    mp = mu_plus(i, h)
    if mp == 0:
        return 0j
    return -complex(h) / mp


def fixed_points(i: int, h) -> FixedPointPair:
    return FixedPointPair(i, mu_plus(i, h), mu_minus(i, h))


def mobius_data(h, i_max: int = 0) -> MobiusData:
    h = complex(h)
    z = zeta(h)
    d = d_seq(h, i_max).values if i_max >= 1 else ()
    return MobiusData(h, z, 1 - z, classify_map(h), d)


def mobius_coeffs(i: int, h):
    """Normalised ``(a, b, c, d)`` of ``f_i`` (unit determinant)."""
    s = d_seq(h, max(i, 1))
    den = s[i - 1]
    return s[i - 2] / den, s.h / den, 1 / den, s[i] / den


def f_map(i: int, h, z):
    s = d_seq(h, max(i, 1))
    return (s[i - 2] * z + s.h) / (z + s[i])


def F_orbit(i: int, h, N_max: int) -> np.ndarray:
    """``F_N^{(i)}`` for ``N = i..N_max`` by iterating ``f_i`` from 0."""
    if N_max < i:
        raise ValueError("N_max must be >= i")
    s = d_seq(h, max(i, 1))
    a, h, d = s[i - 2], s.h, s[i]
    out = np.empty(N_max - i + 1, dtype=complex)
    F = 0j
    for k in range(out.size):
        den = F + d
        if den == 0 or abs(den) < BREAKDOWN_RTOL * max(abs(F), abs(d)):
            raise BreakdownError(f"f_{i} denominator vanishes at N={i + k}, h={h}")
        F = (a * F + h) / den
        out[k] = F
    return out


def F_recursive(cfg: ChainConfig, h) -> complex:
    return complex(F_orbit(cfg.i, h, cfg.N)[-1])


def F_closed_zeta(z, i, N):
    """Closed-form ``F_N^{(i)}`` from ``zeta``; broadcasts over all arguments."""
    z = np.asarray(z, dtype=complex)
    i = np.asarray(i)
    N = np.asarray(N)
    mu = zeta_power(z, i - 1) * (1 - z)
    with np.errstate(divide="ignore", invalid="ignore"):
        return mu * (1 - zeta_power(z, 2 * (N - i + 1))) / (1 + zeta_power(z, 2 * N + 1))


def F_closed(cfg: ChainConfig, h) -> complex:
    z = zeta(h)
    den = 1 + complex(zeta_power(z, 2 * cfg.N + 1))
    if abs(den) < DENOM_ATOL:
        raise DenominatorVanishesError(
            f"1 + zeta^(2N+1) vanishes for h={h}, N={cfg.N}")
    return complex(F_closed_zeta(z, cfg.i, cfg.N))


def _logabs(x):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(x))


def _even_powers(z, n):
    """``z**(2k)`` for k = 1..n by running product; ``z`` has a trailing axis of 1.

    Relative error grows like ``k * eps``, i.e. ~1e-13 at the chain lengths
    used here; much cheaper than a polar power per entry.
    """
    z2 = np.broadcast_to(z * z, z.shape[:-1] + (n,))
    with np.errstate(under="ignore"):
        return np.cumprod(z2, axis=-1)


def abs_F_fixed_i(z, i: int, n_max: int) -> np.ndarray:
    """``|F_N^{(i)}|`` for ``N = i..n_max``; shape ``z.shape + (n_max-i+1,)``."""
    z = np.asarray(z, dtype=complex)[..., None]
    L = np.maximum(_logabs(z), _LOG_TINY)
    p = _even_powers(z, n_max)               # z^(2k), k = 1..n_max
    with np.errstate(invalid="ignore", over="ignore"):
        logF = (_logabs(1 - z) + (i - 1) * L
                + _logabs(1 - p[..., :n_max - i + 1])
                - _logabs(1 + z * p[..., i - 1:]))
        return np.exp(logF)


def max_abs_F_over_i(z, n_max: int) -> np.ndarray:
    """``max_{1<=i<=N} |F_N^{(i)}|`` for ``N = 1..n_max``.

    Writing ``k = N-i+1`` the i-dependence factors as
    ``|zeta|**N * (|1 - zeta**(2k)| / |zeta|**k)``, so the max over i is a
    running max over k, done in log space so small ``|zeta|`` cannot overflow.
    Returns shape ``z.shape + (n_max,)``.
    """
    z = np.asarray(z, dtype=complex)[..., None]
    k = np.arange(1, n_max + 1)
    L = np.maximum(_logabs(z), _LOG_TINY)
    p = _even_powers(z, n_max)
    with np.errstate(invalid="ignore", over="ignore"):
        u = _logabs(1 - p) - k * L
        best = np.maximum.accumulate(u, axis=-1)
        logF = _logabs(1 - z) + k * L + best - _logabs(1 + z * p)
        return np.exp(logF)


def sup_F_over_N(i: int, h, N_max: int) -> SupResult:
    """Largest ``|F_N^{(i)}(h)|`` over ``i <= N <= N_max``.

    Off the cut the closed form is used, on ``[-4, 0]`` the recursion.  For
    elliptic ``h`` the sequence never settles, which ``converges`` records.
    """
    if N_max < i:
        raise ValueError("N_max must be >= i")
    cls = classify_map(h)
    if on_cut(h):
        vals = np.abs(F_orbit(i, h, N_max))
    else:
        vals = abs_F_fixed_i(zeta(h), i, N_max)
    k = int(np.argmax(vals))
    return SupResult(
        value=float(vals[k]),
        argmax_N=i + k,
        at_n_max=(i + k == N_max),
        converges=cls is not MapClass.ELLIPTIC,
    )
