"""Compiled kernels against the pure-Python mirror, bit for bit."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from nvsensor import _kernels_py, kernels
from nvsensor.physics import (GAMMA_E, OMEGA0, default_constants,
                              default_defect_bath, default_gd_bath)

compiled = pytest.importorskip("nvsensor._kernels",
                               reason="compiled extension not built")

PREF = default_constants().dipolar_prefactor
GD = default_gd_bath()
DF = default_defect_bath()


def _random_inputs(rng, m=200):
    d = rng.uniform(5.0, 60.0, m)
    a = rng.uniform(0.0, 0.45, m) * d
    l = rng.uniform(0.3, 4.0, m)
    n = rng.uniform(0.0, 0.3, m)
    return d, a, l, n


def _gamma_args(d, a, l, n):
    return (d, a, l, n, 1.0, 3e-3, 1.0, PREF, GAMMA_E, OMEGA0,
            GD.intrinsic_rate, GD.rate_density_coeff,
            DF.intrinsic_rate, DF.rate_density_coeff, DF.standoff)


def test_backend_name():
    assert compiled.__backend__ == "compiled"
    assert _kernels_py.__backend__ == "python"
    assert kernels.BACKEND in ("compiled", "python")


def test_scalar_parity_exact():
    rng = np.random.default_rng(11)
    d, a, l, n = _random_inputs(rng)
    for i in range(d.size):
        args = _gamma_args(d[i], a[i], l[i], n[i])
        assert compiled.gamma_parts(*args) == _kernels_py.gamma_parts(*args)
        slope_args = (d[i], a[i], l[i], n[i], 1.0, PREF, GAMMA_E, OMEGA0,
                      GD.intrinsic_rate, GD.rate_density_coeff)
        assert compiled.dgamma_dn(*slope_args) == \
            _kernels_py.dgamma_dn(*slope_args)
        rs = 0.5 * d[i] + l[i]
        assert compiled.shell_inv_r6(a[i], rs) == \
            _kernels_py.shell_inv_r6(a[i], rs)
    for rate, omega in rng.uniform(1e6, 1e12, (50, 2)):
        assert compiled.lorentzian(rate, omega) == \
            _kernels_py.lorentzian(rate, omega)
    for dens, r0, c in zip(rng.uniform(0, 0.3, 50),
                           rng.uniform(1e6, 1e10, 50),
                           rng.uniform(0, 3e10, 50)):
        assert compiled.bath_rate(dens, r0, c) == \
            _kernels_py.bath_rate(dens, r0, c)


def test_optimal_tau_parity_exact():
    rng = np.random.default_rng(12)
    for _ in range(60):
        gamma = rng.uniform(3e2, 3e4)
        dgdn = rng.uniform(1e2, 1e5)
        c = rng.uniform(0.01, 0.4)
        p = rng.uniform(1.0, 1e4)
        t0 = rng.uniform(0.0, 1e-5)
        assert compiled.optimal_tau(gamma, dgdn, c, p, t0) == \
            _kernels_py.optimal_tau(gamma, dgdn, c, p, t0)
        tau = rng.uniform(1e-6, 1e-2)
        assert compiled.eta_at(tau, gamma, dgdn, c, p, t0) == \
            _kernels_py.eta_at(tau, gamma, dgdn, c, p, t0)


def test_batch_matches_scalar_exactly():
    rng = np.random.default_rng(13)
    d, a, l, n = _random_inputs(rng, 300)
    args = (d, a, l, n, 1.0, 3e-3, 1.0, PREF, GAMMA_E, OMEGA0,
            GD.intrinsic_rate, GD.rate_density_coeff,
            DF.intrinsic_rate, DF.rate_density_coeff, DF.standoff)
    gb = np.empty_like(d)
    gs = np.empty_like(d)
    gg = np.empty_like(d)
    kernels.batch_gamma(*args, gb, gs, gg)
    for i in range(d.size):
        parts = kernels.gamma_parts(*_gamma_args(d[i], a[i], l[i], n[i]))
        assert (gb[i], gs[i], gg[i]) == parts

    slope = np.empty_like(d)
    kernels.batch_dgamma_dn(d, a, l, n, 1.0, PREF, GAMMA_E, OMEGA0,
                            GD.intrinsic_rate, GD.rate_density_coeff, slope)
    for i in range(0, d.size, 17):
        assert slope[i] == kernels.dgamma_dn(
            d[i], a[i], l[i], n[i], 1.0, PREF, GAMMA_E, OMEGA0,
            GD.intrinsic_rate, GD.rate_density_coeff)

    gamma = gb + gs + gg
    tau = np.empty_like(d)
    eta = np.empty_like(d)
    kernels.batch_optimal_tau(gamma, slope, 0.03, 2.0, 2e-6, tau, eta)
    for i in range(0, d.size, 29):
        assert (tau[i], eta[i]) == kernels.optimal_tau(
            gamma[i], slope[i], 0.03, 2.0, 2e-6)


def test_optimal_tau_refines_grid():
    # the golden-section refinement may only improve on the coarse log grid
    gamma, dgdn, c, p, t0 = 1800.0, 8.9e3, 0.03, 2.0, 2e-6
    tau_opt, eta_opt = kernels.optimal_tau(gamma, dgdn, c, p, t0)
    grid = np.geomspace(1e-7, 10.0 / gamma, 200)
    grid_eta = min(kernels.eta_at(t, gamma, dgdn, c, p, t0) for t in grid)
    assert eta_opt <= grid_eta
    assert eta_opt == kernels.eta_at(tau_opt, gamma, dgdn, c, p, t0)
    assert 1e-7 <= tau_opt <= 10.0 / gamma


def test_eta_at_degenerate_inputs():
    assert math.isinf(kernels.eta_at(0.0, 1e3, 1e3, 0.1, 10.0, 0.0))
    assert math.isinf(kernels.eta_at(1e-4, 1e3, 0.0, 0.1, 10.0, 0.0))


def test_env_var_forces_python_backend():
    env = dict(os.environ, NVSENSOR_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from nvsensor.kernels import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
