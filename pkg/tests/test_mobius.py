import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dist_to_cut, h_off_cut, random_h_off_cut, zeta_oracle
from masschain.chain_core import ChainConfig, d_seq, intermass_tf_direct
from masschain.errors import BreakdownError, DenominatorVanishesError
from masschain.mobius import (F_closed, F_closed_zeta, F_orbit, F_recursive,
                              MapClass, abs_F_fixed_i, classify_map, f_map,
                              fixed_points, max_abs_F_over_i, mobius_coeffs,
                              mobius_data, mu_minus, mu_plus, sup_F_over_N,
                              zeta, zeta_from_g, zeta_power)

GOLDEN_SMALL = (3 - math.sqrt(5)) / 2


# --- zeta ----------------------------------------------------------------------

def test_zeta_parabolic_points():
    assert zeta(0) == 1
    assert zeta(-4) == -1


def test_zeta_tie_rule_at_minus_two():
    assert zeta(-2) == pytest.approx(-1j, abs=1e-15)


def test_zeta_at_one():
    assert zeta(1) == pytest.approx(GOLDEN_SMALL, abs=1e-15)
    assert zeta(1) == pytest.approx(0.3819660, abs=1e-7)


def test_zeta_infinite_h():
    assert zeta(np.inf) == 0
    assert zeta_from_g(0) == 0


def test_zeta_vectorised_matches_scalar(rng):
    h = random_h_off_cut(rng, 50)
    z = zeta(h)
    assert z.shape == (50,)
    assert np.allclose(z, [zeta(v) for v in h], rtol=0, atol=0)


@given(h_off_cut)
def test_zeta_matches_quadratic_roots(h):
    assert abs(zeta(h) - zeta_oracle(h)) < 1e-9 * max(1.0, abs(zeta_oracle(h)))


@given(h_off_cut)
def test_zeta_inside_unit_disc_off_cut(h):
    assert abs(zeta(h)) < 1


@given(st.builds(complex, st.floats(-50, 50), st.floats(-50, 50)))
def test_multiplier_law(h):
    z = zeta(h)
    if z == 0:
        return
    assert abs(z + 1 / z - (h + 2)) <= 1e-12 * max(1.0, abs(h + 2))


@given(st.floats(-4, 0))
def test_zeta_on_cut_is_unimodular_lower(hr):
    z = zeta(hr)
    assert abs(abs(z) - 1) < 1e-12
    assert z.imag <= 0


def test_zeta_near_zero_has_no_cancellation():
    # |zeta| = 1 - sqrt(h) + O(h) for small positive h
    for h in (1e-8, 1e-12, 1e-16):
        z = zeta(h)
        assert abs(1 - z - math.sqrt(h)) < 2 * h


def test_zeta_power_underflow_and_zero():
    assert zeta_power(0.5, 5000) == 0
    assert zeta_power(0j, 0) == 1
    assert zeta_power(0.9j, 3) == pytest.approx((0.9j) ** 3, rel=1e-14)


# --- classification and fixed points ------------------------------------------

@pytest.mark.parametrize("h,cls", [(-4, MapClass.PARABOLIC), (0, MapClass.PARABOLIC),
                                   (-3.5, MapClass.ELLIPTIC), (0.1 + 0.1j, MapClass.LOXODROMIC),
                                   (-2 + 1e-9j, MapClass.LOXODROMIC), (-5, MapClass.LOXODROMIC)])
def test_classify(h, cls):
    assert classify_map(h) is cls


def test_classification_by_trace():
    # normalised trace a+d = (h+2); parabolic iff (a+d)^2 = 4
    for h in (-4, -3.5, -1, 0, 0.1 + 0.1j, 2.0):
        a, b, c, d = mobius_coeffs(3, h)
        tr2 = (a + d) ** 2
        cls = classify_map(h)
        if abs(tr2.imag) < 1e-14 and abs(tr2.real - 4) < 1e-12:
            assert cls is MapClass.PARABOLIC
        elif abs(tr2.imag) < 1e-14 and 0 <= tr2.real < 4:
            assert cls is MapClass.ELLIPTIC
        else:
            assert cls is MapClass.LOXODROMIC


def test_mu_plus_at_one():
    assert mu_plus(1, 1) == pytest.approx(0.6180340, abs=1e-7)
    assert mu_plus(2, 1) == pytest.approx(0.2360680, abs=1e-7)


def test_mu_plus_two_solves_fixed_point_equation():
    # z = (d_0 z + h)/(z + d_2) with d_0 = 1, d_2 = 5 at h = 1: z^2 + 4z - 1 = 0
    assert mu_plus(2, 1) == pytest.approx(-2 + math.sqrt(5), rel=1e-14)


def test_normalised_coefficients_have_unit_determinant(rng):
    for h in random_h_off_cut(rng, 40):
        for i in (1, 2, 7, 20):
            a, b, c, d = mobius_coeffs(i, h)
            assert abs(a * d - b * c - 1) < 1e-10


@given(h_off_cut, st.integers(1, 30))
def test_fixed_point_residual(h, i):
    fp = fixed_points(i, h)
    for mu in (fp.mu_plus, fp.mu_minus):
        res = f_map(i, h, mu) - mu
        assert abs(res) <= 1e-10 * max(abs(mu), 1e-300) + 1e-300


@given(h_off_cut, st.integers(1, 30))
def test_ratio_law(h, i):
    z = zeta(h)
    ratio = mu_plus(i, h) / mu_minus(i, h)
    assert abs(ratio + z ** (2 * i - 1)) <= 1e-10 * max(abs(ratio), 1e-300) + 1e-300


@given(h_off_cut)
def test_fixed_points_decrease_and_are_capped(h):
    mods = [abs(mu_plus(i, h)) for i in range(1, 12)]
    assert mods[0] < 2
    assert all(b < a for a, b in zip(mods, mods[1:]) if a > 1e-290)


@given(st.floats(-4, 0, exclude_min=True, exclude_max=True))
def test_fixed_points_constant_modulus_on_cut(hr):
    mods = [abs(mu_plus(i, hr)) for i in range(1, 12)]
    assert max(mods) - min(mods) < 1e-12
    assert mods[0] <= 2


def test_cap_attained_only_at_minus_four():
    assert abs(mu_plus(1, -4)) == 2
    assert abs(mu_plus(1, -4 + 1e-6j)) < 2


def test_mu_minus_at_zero_h():
    assert mu_minus(1, 0) == 0


def test_mobius_data_dict():
    d = mobius_data(0.1 + 0.1j, 3).to_dict()
    assert d["classification"] == "Loxodromic"
    assert len(d["d"]) == 5


# --- F_N^{(i)} -----------------------------------------------------------------

def test_one_step_from_zero():
    assert F_recursive(ChainConfig(1, 1), 1.0) == pytest.approx(0.5)
    assert F_closed(ChainConfig(1, 1), 1.0) == pytest.approx(0.5, rel=1e-14)
    for i in (2, 5):
        assert F_recursive(ChainConfig(i, i), 1.5) == pytest.approx(1.5 / d_seq(1.5, i)[i])


def test_zero_h_gives_zero():
    for N, i in [(1, 1), (10, 4)]:
        assert F_recursive(ChainConfig(N, i), 0.0) == 0


def test_recursion_matches_direct_example():
    h = 2 + 1j
    cfg = ChainConfig(10, 3)
    assert F_recursive(cfg, h) == pytest.approx(-intermass_tf_direct(h, cfg), rel=1e-9)


def test_closed_matches_recursion_near_cut():
    h = -0.01 + 0.001j
    cfg = ChainConfig(200, 1)
    assert F_closed(cfg, h) == pytest.approx(F_recursive(cfg, h), rel=1e-8)


@given(h_off_cut, st.integers(1, 40), st.data())
@settings(max_examples=150)
def test_three_paths_agree(h, N, data):
    i = data.draw(st.integers(1, N))
    cfg = ChainConfig(N, i)
    fc, fr, td = F_closed(cfg, h), F_recursive(cfg, h), intermass_tf_direct(h, cfg)
    scale = max(abs(fc), 1e-300)
    assert abs(fc - fr) <= 1e-8 * scale
    assert abs(fc + td) <= 1e-8 * scale


def test_limit_is_mu_plus(rng):
    for h in random_h_off_cut(rng, 30):
        if abs(zeta(h)) > 0.9:
            continue
        for i in (1, 3):
            assert abs(abs(F_closed(ChainConfig(400, i), h)) - abs(mu_plus(i, h))) < 1e-6


def test_closed_form_denominator_zero():
    # 1 + zeta^3 = 0 for zeta = exp(-i pi/3), i.e. h = 2 cos(pi/3) - 2 = -1
    with pytest.raises(DenominatorVanishesError):
        F_closed(ChainConfig(1, 1), -1.0)


def test_orbit_breakdown():
    # h = -1, i = 1: f_1(0) = -1, then denominator F + d_1 = -1 + 0 vanishes
    with pytest.raises(BreakdownError):
        F_orbit(1, -1.0, 5)


def test_closed_form_broadcasts():
    z = zeta(np.array([1.0, 2 + 1j]))
    out = F_closed_zeta(z[:, None], np.array([1, 2]), 5)
    assert out.shape == (2, 2)
    assert out[1, 1] == pytest.approx(F_closed(ChainConfig(5, 2), 2 + 1j), rel=1e-13)


# --- vectorised maxima ---------------------------------------------------------

@given(h_off_cut)
@settings(max_examples=40)
def test_fixed_i_kernel_matches_closed_form(h):
    z = zeta(h)
    vals = abs_F_fixed_i(z, 3, 25)
    ref = [abs(F_closed_zeta(z, 3, N)) for N in range(3, 26)]
    assert np.allclose(vals, ref, rtol=1e-10, atol=1e-300)


@given(h_off_cut)
@settings(max_examples=40)
def test_running_max_matches_brute_force(h):
    z = zeta(h)
    n_max = 30
    fast = max_abs_F_over_i(z, n_max)
    for N in range(1, n_max + 1):
        brute = max(abs(F_closed_zeta(z, i, N)) for i in range(1, N + 1))
        assert fast[N - 1] == pytest.approx(brute, rel=1e-10)


def test_running_max_tiny_zeta_no_overflow():
    out = max_abs_F_over_i(np.array([1e-200 + 0j]), 50)
    assert np.all(np.isfinite(out))
    assert out[-1] == pytest.approx(1.0, rel=1e-12)


def test_sup_over_N_examples():
    assert sup_F_over_N(1, 0.0, 10).value == 0
    r = sup_F_over_N(1, 1.0, 200)
    assert math.isfinite(r.value) and r.value >= abs(mu_plus(1, 1.0)) - 1e-15
    assert r.converges
    cut = sup_F_over_N(1, -2.0 + 0j, 50)
    assert not cut.converges


def test_sup_matches_orbit(rng):
    for h in random_h_off_cut(rng, 20):
        r = sup_F_over_N(2, h, 60)
        assert r.value == pytest.approx(np.abs(F_orbit(2, h, 60)).max(), rel=1e-9)
        assert 2 <= r.argmax_N <= 60


def test_distance_helper_sanity():
    assert dist_to_cut(-2 + 0.5j) == 0.5
    assert dist_to_cut(1) == 1
    assert dist_to_cut(-5) == 1
    assert cmath.isclose(zeta_oracle(1), GOLDEN_SMALL)
