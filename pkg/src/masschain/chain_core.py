"""Transfer functions of the mass chain evaluated from first principles.

The chain of ``N`` identical masses driven through its first connection obeys

    (h I_N - H_N) x = e_1 x_0,       h(s) = s Z(s) m,

with ``H_N`` the tridiagonal matrix built by :func:`build_H`.  Its leading
principal minors ``d_i(h) = det(h I_i - H_i)`` satisfy a three-term
recurrence, which is what everything else in the package is built on.
"""

from __future__ import annotations

import cmath

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import ConfigError, MagnitudeOverflowError, SingularSystemError

# |d_N| below this fraction of max_i |d_i| counts as singular.
SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class ChainConfig:
    """Chain length ``N``, intermass index ``i`` (1-based) and mass ``m`` [kg]."""

    N: int
    i: int
    m: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ConfigError(f"mass must be positive, got {self.m}")
        if not 1 <= self.i <= self.N:
            raise ConfigError(f"need 1 <= i <= N, got i={self.i}, N={self.N}")


@dataclass(frozen=True)
class DSequence:
    """The values ``d_{-1}, d_0, ..., d_imax`` at one ``h``.

    Index with the mathematical subscript: ``seq[-1]`` is ``d_{-1}`` (always 1),
    not the last element.
    """

    h: complex
    values: tuple

    @property
    def i_max(self):
        return len(self.values) - 2

    def __getitem__(self, i):
        if not -1 <= i <= self.i_max:
            raise IndexError(f"d_{i} not stored (range -1..{self.i_max})")
        return self.values[i + 1]

    def as_array(self):
        return np.asarray(self.values, dtype=complex)


def _is_exact(h):
    return isinstance(h, Rational) and not isinstance(h, bool)


def d_seq(h, i_max: int) -> DSequence:
    """Evaluate ``d_{-1}..d_{i_max}`` by ``d_i = (h+2) d_{i-1} - d_{i-2}``.

    Integer or :class:`fractions.Fraction` ``h`` gives exact values; anything
    else is evaluated in complex floating point and raises
    :class:`MagnitudeOverflowError` if the values leave the double range.
    """
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    if _is_exact(h):
        h = Fraction(h)
        vals = [Fraction(1), Fraction(1)]
        w = h + 2
        for _ in range(i_max):
            vals.append(w * vals[-1] - vals[-2])
        return DSequence(h, tuple(vals))

    h = complex(h)
    w = h + 2.0
    # plain Python complex is several times faster than numpy scalars here
    vals = [1 + 0j, 1 + 0j]
    a, b = vals
    for _ in range(i_max):
        a, b = b, w * b - a
        vals.append(b)
    if not all(cmath.isfinite(v) for v in vals):
        raise MagnitudeOverflowError(
            f"d_i(h) exceeds double range for h={h}, i_max={i_max}")
    return DSequence(h, tuple(vals))


def d_poly(i_max: int) -> list[list[int]]:
    """Integer coefficients (ascending powers of h) of ``d_{-1}..d_{i_max}``.

    ``d_poly(n)[i + 1]`` is the coefficient list of ``d_i``.
    """
    polys = [[1], [1]]
    for _ in range(i_max):
        a, b = polys[-1], polys[-2]
        # (h + 2) * a - b
        new = [0] * (len(a) + 1)
        for k, coef in enumerate(a):
            new[k] += 2 * coef
            new[k + 1] += coef
        for k, coef in enumerate(b):
            new[k] -= coef
        polys.append(new)
    return polys


def poly_eval(coeffs, h):
    """Horner evaluation of ascending coefficients; exact for exact ``h``."""
    acc = 0
    for coef in reversed(coeffs):
        acc = acc * h + coef
    return acc


def build_H(N: int) -> np.ndarray:
    """Tridiagonal chain matrix: diagonal (-2, ..., -2, -1), off-diagonals 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    H = np.diag(np.full(N, -2.0)) + np.diag(np.ones(N - 1), 1) + np.diag(np.ones(N - 1), -1)
    H[-1, -1] = -1.0
    return H


def _check_regular(seq: DSequence, N: int):
    dN = abs(seq[N])
    scale = max(abs(v) for v in seq.values)
    if dN < SINGULAR_RTOL * scale:
        raise SingularSystemError(
            f"d_{N}(h) = {seq[N]:.3g} is numerically zero at h={seq.h}")


def solve_chain_direct(h, N: int) -> np.ndarray:
    """Displacements ``x / x_0`` from a dense solve of ``(h I - H_N) x = e_1``."""
    h = complex(h)
    _check_regular(d_seq(h, max(N, 1)), N)
    A = h * np.eye(N) - build_H(N)
    rhs = np.zeros(N, dtype=complex)
    rhs[0] = 1.0
    return np.linalg.solve(A, rhs)


def intermass_tf_direct(h, cfg: ChainConfig) -> complex:
    """``T = (d_{N-i} - d_{N-i+1}) / d_N``, the map from x_0 to x_i - x_{i-1}."""
    N, i = cfg.N, cfg.i
    seq = d_seq(h, max(N, 1))
    _check_regular(seq, N)
    return (seq[N - i] - seq[N - i + 1]) / seq[N]


def p_identity(N: int, i: int, h, normalize: bool = False):
    """Polynomial whose vanishing is equivalent to the Moebius recursion for F.

    With ``normalize=True`` the value is divided by the largest of the three
    product magnitudes that make it up, each taken with its differences
    replaced by sums of moduli.  That is the scale of the rounding error, so
    the result can be compared against a relative tolerance even near h = 0
    where the differences cancel.
    """
    if not 1 <= i <= N:
        raise ValueError(f"need 1 <= i <= N, got i={i}, N={N}")
    d = d_seq(h, N)
    t1 = (d[N - i + 1] - d[N - i]) * (d[N - i] - d[N - i - 1] + d[N - 1] * d[i])
    t2 = d[N] * d[i - 2] * (d[N - i] - d[N - i - 1])
    t3 = d.h * d[N - 1] * d[N]
    p = t1 - t2 - t3
    if not normalize:
        return p
    a = [abs(v) for v in d.values]  # index k + 1 holds |d_k|
    n = N - i + 1
    scale = max(
        (a[n + 1] + a[n]) * (a[n] + a[n - 1] + a[N] * a[i + 1]),
        a[N + 1] * a[i - 1] * (a[n] + a[n - 1]),
        abs(t3),
    )
    return p / scale if scale else p
