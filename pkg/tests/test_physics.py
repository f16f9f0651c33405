"""Closed-form physics pieces against oracles and stated examples."""

import math

import numpy as np
import pytest

from nvsensor import physics
from nvsensor.physics import (GAMMA_E, GAMMA_GD, HBAR, KAPPA_ANGULAR,
                              MU0_OVER_4PI, OMEGA0, PhysicalConstants,
                              RelaxationBreakdown, SensorConfig,
                              SpinBathParams, batch_relaxation,
                              default_constants, default_defect_bath,
                              default_gd_bath, dipolar_prefactor_value,
                              fluctuation_rate, lorentzian_psd,
                              msq_transverse_field, relaxation_rate,
                              shell_inverse_r6_integral)
from oracles import mc_shell_inv_r6

CONSTANTS = default_constants()
GD = default_gd_bath()
DF = default_defect_bath()


def test_dipolar_prefactor_from_first_principles():
    # (mu0/4pi)^2 (hbar gamma_gd)^2 S(S+1) kappa, converted to T^2 nm^6
    s = 3.5
    moment = MU0_OVER_4PI * HBAR * GAMMA_GD * 1e27  # T nm^3
    expected = moment * moment * s * (s + 1.0) * KAPPA_ANGULAR
    value = dipolar_prefactor_value()
    assert abs(value - expected) <= 1e-12 * expected
    assert abs(value - 3.617e-5) < 1e-8 * 1e3  # magnitude sanity
    assert CONSTANTS.dipolar_prefactor == value


def test_shell_integral_centered_closed_form():
    rs = 14.0
    assert shell_inverse_r6_integral(0.0, rs) == pytest.approx(
        4.0 * math.pi / rs ** 4, rel=1e-12)


def test_shell_integral_off_center_value():
    # (pi rs / 2a) [(rs-a)^-4 - (rs+a)^-4]
    a, rs = 5.0, 14.0
    expected = (math.pi * rs / (2.0 * a)) * ((rs - a) ** -4 - (rs + a) ** -4)
    assert shell_inverse_r6_integral(a, rs) == pytest.approx(expected,
                                                             rel=1e-12)


def test_shell_integral_monte_carlo_oracle():
    rng = np.random.default_rng(21)
    for a_frac in (0.0, 0.35, 0.8):
        rs = rng.uniform(8.0, 20.0)
        a = a_frac * rs
        closed = shell_inverse_r6_integral(a, rs)
        est, se = mc_shell_inv_r6(a, rs, rng, rel_se_target=0.005,
                                  max_samples=16_000_000)
        assert abs(est - closed) < max(4.0 * se, 0.02 * closed)


def test_shell_integral_diverges_near_surface():
    rs = 14.0
    assert shell_inverse_r6_integral(13.9, rs) > \
        1e3 * shell_inverse_r6_integral(0.0, rs)


def test_shell_integral_continuous_at_series_switch():
    # the centered series takes over below a = 1e-6 rs; no jump there
    rs = 14.0
    a = 1e-6 * rs
    below = shell_inverse_r6_integral(a * 0.999, rs)
    above = shell_inverse_r6_integral(a * 1.001, rs)
    assert abs(below - above) < 1e-9 * above


def test_shell_integral_increasing_in_offset():
    rs = 11.0
    grid = np.linspace(0.0, 0.95 * rs, 80)
    vals = [shell_inverse_r6_integral(a, rs) for a in grid]
    assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))


def test_shell_integral_domain_errors():
    with pytest.raises(ValueError):
        shell_inverse_r6_integral(-0.1, 10.0)
    with pytest.raises(ValueError):
        shell_inverse_r6_integral(10.0, 10.0)
    with pytest.raises(ValueError):
        shell_inverse_r6_integral(0.0, 0.0)


def test_msq_field_linear_in_density():
    one = msq_transverse_field(0.1, 3.0, 14.0, CONSTANTS)
    two = msq_transverse_field(0.2, 3.0, 14.0, CONSTANTS)
    assert two == pytest.approx(2.0 * one, rel=1e-12)
    assert msq_transverse_field(0.0, 3.0, 14.0, CONSTANTS) == 0.0


def test_msq_field_matches_discrete_spin_sum():
    # centered probe: every spin on the shell sits at the same distance, so
    # the continuum result must equal (count on shell) * pref / rs^6
    n, rs = 0.1, 14.0
    pref = CONSTANTS.dipolar_prefactor
    count = round(n * 4.0 * math.pi * rs * rs)
    discrete = count * pref / rs ** 6
    continuum = msq_transverse_field(n, 0.0, rs, CONSTANTS)
    assert abs(discrete - continuum) < 0.03 * continuum


def test_fluctuation_rate_examples():
    bath = SpinBathParams(intrinsic_rate=1e8, rate_density_coeff=3e9)
    assert fluctuation_rate(0.09, bath) == pytest.approx(1e9, rel=1e-12)
    assert fluctuation_rate(0.0, bath) == 1e8
    with pytest.raises(ValueError):
        fluctuation_rate(-0.1, bath)


def test_lorentzian_psd_value_and_peak():
    rate = 1e9
    expected = rate / (rate * rate + OMEGA0 * OMEGA0)
    assert lorentzian_psd(rate, OMEGA0) == pytest.approx(expected, rel=1e-12)
    # sup over rate at fixed omega is 1/(2 omega), reached at rate = omega
    peak = lorentzian_psd(OMEGA0, OMEGA0)
    assert peak == pytest.approx(1.0 / (2.0 * OMEGA0), rel=1e-12)
    for r in np.geomspace(1e6, 1e12, 60):
        assert lorentzian_psd(r, OMEGA0) <= peak * (1.0 + 1e-12)


def test_relaxation_parts_and_additivity():
    cfg = SensorConfig()
    out = relaxation_rate(cfg, GD, DF, CONSTANTS)
    assert out.gamma_bulk == pytest.approx(1.0 / cfg.t1_bulk, rel=1e-12)
    assert out.gamma_total == out.gamma_bulk + out.gamma_surface + out.gamma_gd
    assert out.t1 == pytest.approx(1.0 / out.gamma_total, rel=1e-12)
    assert out.gamma_gd > 0.0
    assert out.gamma_surface > 0.0

    bare = relaxation_rate(SensorConfig(gd_density=0.0), GD, DF, CONSTANTS)
    assert bare.gamma_gd == 0.0
    quiet = relaxation_rate(SensorConfig(defect_density=0.0), GD, DF,
                            CONSTANTS)
    assert quiet.gamma_surface == 0.0


def test_gd_rate_monotone_in_density():
    grid = np.linspace(0.0, 0.3, 100)
    rates = [relaxation_rate(SensorConfig(gd_density=n), GD, DF,
                             CONSTANTS).gamma_gd for n in grid]
    assert all(b > a for a, b in zip(rates, rates[1:]))


def test_gd_rate_decays_with_distance():
    near = relaxation_rate(SensorConfig(gd_standoff=1.0), GD, DF, CONSTANTS)
    far = relaxation_rate(SensorConfig(gd_standoff=3.0), GD, DF, CONSTANTS)
    assert far.gamma_gd < near.gamma_gd
    small = relaxation_rate(SensorConfig(diameter=15.0), GD, DF, CONSTANTS)
    large = relaxation_rate(SensorConfig(diameter=40.0), GD, DF, CONSTANTS)
    assert large.gamma_gd < small.gamma_gd


def test_off_center_probe_relaxes_faster():
    centered = relaxation_rate(SensorConfig(nv_offset=0.0), GD, DF, CONSTANTS)
    shifted = relaxation_rate(SensorConfig(nv_offset=10.0), GD, DF, CONSTANTS)
    assert shifted.gamma_gd > centered.gamma_gd
    assert shifted.gamma_surface > centered.gamma_surface


def test_batch_relaxation_matches_scalar():
    rng = np.random.default_rng(22)
    d = rng.uniform(10.0, 50.0, 150)
    a = rng.uniform(0.0, 0.4, 150) * d
    l = rng.uniform(0.5, 3.0, 150)
    n = rng.uniform(0.0, 0.25, 150)
    gb, gs, gg, gt = batch_relaxation(
        d, a, l, n, defect_density=1.0, t1_bulk=3e-3, gd_per_cdna=1.0,
        gd_bath=GD, defect_bath=DF, constants=CONSTANTS)
    for i in range(0, 150, 7):
        cfg = SensorConfig(diameter=d[i], nv_offset=a[i], gd_standoff=l[i],
                           gd_density=n[i])
        out = relaxation_rate(cfg, GD, DF, CONSTANTS)
        assert (gb[i], gs[i], gg[i]) == (out.gamma_bulk, out.gamma_surface,
                                         out.gamma_gd)
        assert gt[i] == out.gamma_total


def test_validation_errors():
    with pytest.raises(ValueError):
        PhysicalConstants(gamma_e=0.0, gamma_gd=GAMMA_GD, omega0=OMEGA0,
                          dipolar_prefactor=1e-5)
    with pytest.raises(ValueError):
        SensorConfig(diameter=-1.0)
    with pytest.raises(ValueError):
        SensorConfig(nv_offset=13.0)  # at or past the surface for d = 25
    with pytest.raises(ValueError):
        SensorConfig(gd_standoff=0.0)
    with pytest.raises(ValueError):
        SensorConfig(t1_bulk=0.0)
    with pytest.raises(ValueError):
        SpinBathParams(intrinsic_rate=-1.0)
    with pytest.raises(ValueError):
        RelaxationBreakdown(gamma_bulk=1.0, gamma_surface=1.0, gamma_gd=1.0,
                            gamma_total=4.0)


def test_breakdown_from_parts_is_exact():
    out = RelaxationBreakdown.from_parts(333.0, 561.0, 894.0)
    assert out.gamma_total == 333.0 + 561.0 + 894.0
