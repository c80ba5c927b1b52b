import math

import numpy as np
import pytest

from masschain.analysis.stability import natural_frequency, stability_check
from masschain.devices import TABLE_MASS, DeviceSpec, h_of_s
from masschain.errors import ConfigError

m = TABLE_MASS
k = 1.7e8


def test_table_devices_stable(table_device):
    rep = stability_check(table_device, m)
    assert rep.stable and rep.status == "stable"
    assert rep.crossings == [] and rep.boundary_touches == []


def test_pure_spring_unstable_band():
    rep = stability_check(DeviceSpec("L1", k=k), m)
    assert not rep.stable and rep.status == "unstable"
    # h = -m w^2/k lies in (-4, 0) exactly for 0 < w < 2 sqrt(k/m)
    assert len(rep.intervals) == 1
    lo, hi = rep.intervals[0]
    assert lo == 0 and hi == pytest.approx(2 * math.sqrt(k / m), rel=1e-9)
    for w, h in rep.crossings:
        assert -4 < h.real < 0 and abs(h.imag) < 1e-12


def test_spring_inerter_crossings_are_real_witnesses():
    dev = DeviceSpec("L2", k=k, b=1e5)
    rep = stability_check(dev, m)
    assert not rep.stable
    for w, h in rep.crossings:
        hv = h_of_s(dev, m, 1j * w)
        assert abs(hv.imag) < 1e-9 and -4 < hv.real < 0


def tank_device(k=1.0, c=1.0, b2=1.0, k2=1.0):
    """Spring k in parallel with a damper c in series with an inerter-spring tank.

    The tank blocks all force at w0 = sqrt(k2/b2), so there Re Y = 0 and
    h(j w0) = -m w0^2/k is real: a tangential touch of the real axis.
    """
    num = (c * b2, k * b2, k * c + c * k2, k * k2)
    den = (b2, c, k2, 0.0)
    return DeviceSpec("rational", num=num, den=den)


def test_tangential_touch_found_by_polynomial_roots():
    dev = tank_device()
    # sampling never sees Im h = 0 unless a grid point lands on w0 = 1
    w = np.geomspace(1e-3, 1e3, 100000)
    assert np.all(h_of_s(dev, 1.0, 1j * w).imag > 0)
    rep = stability_check(dev, 1.0)
    assert not rep.stable
    assert len(rep.crossings) == 1
    wc, hc = rep.crossings[0]
    assert wc == pytest.approx(1.0, rel=1e-6)
    assert hc.real == pytest.approx(-1.0, rel=1e-6)


def test_tangential_touch_outside_interval_is_stable():
    # w0 = 3 gives h(j w0) = -9, outside (-4, 0)
    rep = stability_check(tank_device(b2=1.0, k2=9.0), 1.0)
    assert rep.stable


def test_negative_damping_rejected():
    with pytest.raises(ConfigError):
        stability_check(DeviceSpec("rational", num=(-1.0, k), den=(1.0, 0.0)), m)


def test_report_dict():
    d = stability_check(DeviceSpec("L1", k=k), m).to_dict()
    assert d["stable"] is False and len(d["crossings"]) == 1
    assert set(d) >= {"stable", "status", "crossings", "intervals"}


def test_natural_frequency():
    assert natural_frequency(DeviceSpec("L1", k=4.0, c=1.0), 1.0) == 2.0
    dev = DeviceSpec("rational", num=(1.0, 4.0), den=(1.0, 0.0))
    assert natural_frequency(dev, 1.0) == pytest.approx(2.0)
