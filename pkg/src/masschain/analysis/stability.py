"""Stability of the chain for every N: h(jw) must avoid the open interval (-4, 0).

For a rational device ``h(jw) = P(jw)/Q(jw)`` and ``Im h = Im(P conj Q)/|Q|^2``,
so the real frequencies where h is real are the real roots of a real
polynomial in w.  Those are found with ``numpy.roots`` rather than by
sampling, which would miss tangential touches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..devices import DeviceSpec, h_of_s, h_poly, is_positive_real_on_axis
from ..errors import ConfigError


@dataclass
class StabilityReport:
    stable: bool
    crossings: list = field(default_factory=list)
    # Closed-interval touches at h = -4 exactly; harmless for stability but
    # they break the boundedness hypotheses.
    boundary_touches: list = field(default_factory=list)
    # (w_lo, w_hi) bands where h is real and inside (-4, 0); lossless devices only.
    intervals: list = field(default_factory=list)
    status: str = "stable"
    diagnostics: str = ""

    def to_dict(self):
        def pt(c):
            return {"omega": c[0], "h": [c[1].real, c[1].imag]}
        return {
            "stable": self.stable,
            "status": self.status,
            "crossings": [pt(c) for c in self.crossings],
            "boundary_touches": [pt(c) for c in self.boundary_touches],
            "intervals": [list(iv) for iv in self.intervals],
            "diagnostics": self.diagnostics,
        }


def _on_axis(p_desc):
    """Coefficients (descending in w) of p(jw) for a real polynomial p(s)."""
    p = np.asarray(p_desc, dtype=float)
    n = len(p) - 1
    return np.array([c * 1j ** (n - k) for k, c in enumerate(p)], dtype=complex)


def _positive_real_roots(poly, scale):
    poly = np.trim_zeros(np.asarray(poly, float), "f")
    if poly.size <= 1:
        return np.array([])
    r = np.roots(poly)
    if not np.all(np.isfinite(r)):
        raise np.linalg.LinAlgError("root finder returned non-finite values")
    tol = 1e-7 * np.maximum(np.abs(r), scale)
    r = np.sort(r[(np.abs(r.imag) <= tol) & (r.real > 1e-9 * scale)].real)
    if r.size == 0:
        return r
    # a multiple root (tangential touch) comes back split by ~sqrt(eps); merge it
    groups = np.split(r, np.flatnonzero(np.diff(r) > 1e-6 * r[1:]) + 1)
    return np.array([g.mean() for g in groups])


def natural_frequency(dev: DeviceSpec, m: float) -> float:
    if dev.layout != "rational":
        return math.sqrt(dev.k / m)
    hn, hd = h_poly(dev, m)
    # h ~ (m/k) s^2 near 0
    a2 = hn[-3] / hd[-1] if len(hn) >= 3 and hd[-1] != 0 else 0.0
    return math.sqrt(1.0 / a2) if a2 > 0 else 1.0


def stability_check(dev: DeviceSpec, m: float) -> StabilityReport:
    wn = natural_frequency(dev, m)
    pr = is_positive_real_on_axis(dev, np.geomspace(1e-6, 1e6, 4001) * wn)
    if not pr:
        raise ConfigError(f"admittance is not positive real: Re Y(jw) < 0 at w = {pr.witness:.6g}")

    hn, hd = h_poly(dev, m)
    P, Q = _on_axis(hn), _on_axis(hd)
    # for real w, conj(Q(jw)) is the polynomial with conjugated coefficients
    prod = np.polymul(P, np.conj(Q))
    im_poly, re_poly = prod.imag, prod.real
    qq = np.polymul(Q, np.conj(Q)).real  # |Q(jw)|^2
    coeff_scale = np.max(np.abs(prod)) or 1.0

    def h_at(w):
        return complex(h_of_s(dev, m, 1j * w))

    report = StabilityReport(stable=True)
    try:
        if np.max(np.abs(im_poly)) <= 1e-12 * coeff_scale:
            # lossless: h(jw) real for every w; find where it lies in (-4, 0)
            edges = np.concatenate([
                _positive_real_roots(re_poly, wn),
                _positive_real_roots(np.polyadd(re_poly, 4 * qq), wn),
                _positive_real_roots(qq, wn),
            ])
            edges = np.unique(np.concatenate([[0.0], edges, [np.inf]]))
            for lo, hi in zip(edges[:-1], edges[1:]):
                mid = 2 * lo + wn if np.isinf(hi) else 0.5 * (lo + hi)
                hv = h_at(mid)
                if -4 < hv.real < 0:
                    report.intervals.append((float(lo), float(hi)))
                    report.crossings.append((float(mid), hv))
        else:
            for w in _positive_real_roots(im_poly, wn):
                if np.polyval(qq, w) == 0:
                    continue
                hv = h_at(w)
                hr = hv.real
                if abs(hr + 4) <= 1e-9 * 4:
                    report.boundary_touches.append((float(w), complex(hr)))
                elif -4 < hr < 0:
                    report.crossings.append((float(w), complex(hr)))
    except np.linalg.LinAlgError as exc:
        report.stable = False
        report.status = "undetermined"
        report.diagnostics = f"root finding failed: {exc}"
        return report

    if report.crossings:
        report.stable = False
        report.status = "unstable"
    return report
