import math

import numpy as np
import pytest
from scipy import ndimage

from masschain.analysis.contours import (DEFAULT_LEVELS, Metric, Region,
                                         contour_grid, evaluate_metric,
                                         excluded_cells, trace_contours)
from masschain.errors import ConfigError
from masschain.mobius import F_orbit, zeta

FIG_REGION = Region(-1.5, 0.5, -1.0, 1.0)


def test_abs_zeta_tends_to_one_near_cut():
    eps = np.array([1e-1, 1e-2, 1e-3, 1e-4])
    vals = evaluate_metric(-0.5 + 1j * eps, Metric.ABS_ZETA)
    assert np.all(np.diff(vals) > 0) and vals[-1] > 0.999


def test_abs_mu_plus_peak():
    assert evaluate_metric(-0.25 + 0j, Metric.ABS_MU_PLUS_1) == pytest.approx(2.0, abs=1e-12)


def test_abs_mu_plus_decreases_along_rays():
    r = np.geomspace(1e-4, 3, 400)
    for th in np.linspace(0.05, np.pi - 0.05, 7):
        v = evaluate_metric(-0.25 + r * np.exp(1j * th), Metric.ABS_MU_PLUS_1)
        assert np.all(np.diff(v) < 0) and v[0] < 2


def test_metric_at_infinity_of_h():
    # g = 0: zeta = 0, F_N^(1) = 1 for every N
    assert evaluate_metric(0j, Metric.MAX_F_I1, 50) == pytest.approx(1.0)
    assert evaluate_metric(0j, Metric.ABS_ZETA) == 0


def test_max_over_i_dominates_fixed_i(rng):
    g = rng.normal(size=200) + 1j * rng.normal(size=200)
    allI = evaluate_metric(g, Metric.MAX_F_ALL_I, 60)
    for i in (1, 2, 7):
        assert np.all(evaluate_metric(g, Metric.MAX_F_I1, 60, i) <= allI * (1 + 1e-12))


def test_metric_matches_orbit(rng):
    for g in rng.normal(size=10) + 1j * rng.normal(size=10):
        ref = np.abs(F_orbit(2, 1 / g, 80)).max()
        assert evaluate_metric(g, Metric.MAX_F_I1, 80, 2) == pytest.approx(ref, rel=1e-9)


def test_cut_points_use_recursion():
    # on the cut, 1 + zeta^(2N+1) can vanish; the value must stay finite
    g = 1 / (-1.0 + 0j)  # h = -1 has zeta^3 = -1
    assert np.isfinite(evaluate_metric(g, Metric.MAX_F_I1, 1))


def test_excluded_cells_policy():
    re = np.linspace(-1, 1, 9)
    im = np.linspace(-1, 1, 9)
    mask = excluded_cells(re, im)
    assert mask.sum() == np.sum(re < -0.25)
    assert np.all(mask[4, re < -0.25]) and not mask[4, re >= -0.25].any()
    # g = -1/4 itself is kept
    re = np.linspace(-0.5, 0.0, 3)
    assert not excluded_cells(re, np.linspace(-1, 1, 3))[1, 1]


def test_degenerate_grid():
    res = contour_grid(FIG_REGION, (2, 2), Metric.ABS_MU_PLUS_1)
    assert res.values.shape == (2, 2)
    assert all(len(lines) == 0 for _, lines in res.contours)


def test_validation():
    with pytest.raises(ConfigError):
        contour_grid(FIG_REGION, (1, 5), Metric.ABS_ZETA)
    with pytest.raises(ConfigError):
        contour_grid(FIG_REGION, (5, 5), Metric.MAX_F_I1, n_max=3, i=4)
    with pytest.raises(ConfigError):
        Region(1.0, -1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Metric("nope")


def test_workers_do_not_change_values():
    a = contour_grid(FIG_REGION, (60, 50), Metric.MAX_F_ALL_I, n_max=40, workers=1)
    b = contour_grid(FIG_REGION, (60, 50), Metric.MAX_F_ALL_I, n_max=40, workers=4)
    assert np.array_equal(a.values, b.values, equal_nan=True)


def test_trace_simple_circle():
    x = np.linspace(-2, 2, 81)
    r = np.hypot(x[None, :], x[:, None])
    (lv, lines), = trace_contours(x, x, np.exp(r), [1.0])
    assert len(lines) == 1
    assert np.allclose(np.hypot(*lines[0].T), 1.0, atol=5e-3)


@pytest.mark.parametrize("metric,n_max", [(Metric.ABS_ZETA, 200), (Metric.ABS_MU_PLUS_1, 200),
                                          (Metric.MAX_F_I1, 200)])
def test_vertices_lie_on_their_level(metric, n_max):
    res = contour_grid(FIG_REGION, (400, 400), metric, n_max)
    checked = 0
    for lv, lines in res.contours:
        for line in lines:
            g = line[:, 0] + 1j * line[:, 1]
            vals = evaluate_metric(g, metric, n_max)
            assert np.all(np.abs(vals / math.exp(lv) - 1) <= 0.02)
            checked += len(g)
    assert checked > 1000


def test_mu_plus_superlevel_sets_nested_and_connected():
    res = contour_grid(FIG_REGION, (201, 201), Metric.ABS_MU_PLUS_1)
    vals = np.nan_to_num(res.values, nan=np.inf)  # the cut is "high"
    j = np.argmin(np.abs(res.re + 0.25))
    k = np.argmin(np.abs(res.im))
    prev = None
    for lv in DEFAULT_LEVELS[Metric.ABS_MU_PLUS_1]:
        sup = vals >= math.exp(lv)
        if not sup.any():
            continue
        _, n = ndimage.label(sup)
        assert n == 1
        assert sup[k, j]
        if prev is not None:
            assert np.all(prev[sup])
        prev = sup


def test_level_one_region_of_first_index_is_outermost():
    re = np.linspace(-2.5, 0.5, 151)
    im = np.linspace(-1.5, 1.5, 151)
    g = re[None, :] + 1j * im[:, None]
    off = ~excluded_cells(re, im)
    m1 = evaluate_metric(g, Metric.MAX_F_I1, 200, 1)
    for i in range(2, 6):
        mi = evaluate_metric(g, Metric.MAX_F_I1, 200, i)
        assert not np.any(off & (mi > 1) & (m1 <= 1))


def test_grid_result_g_and_mask():
    res = contour_grid(FIG_REGION, (11, 21), Metric.ABS_ZETA)
    assert res.g.shape == (21, 11)
    assert np.all(np.isnan(res.values[res.excluded_mask]))
    assert np.all(np.isfinite(res.values[~res.excluded_mask]))
    assert np.allclose(res.values[~res.excluded_mask],
                       np.abs(zeta(1 / res.g[~res.excluded_mask])))
