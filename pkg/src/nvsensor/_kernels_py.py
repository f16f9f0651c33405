"""Pure-Python mirror of the compiled kernels.

Every scalar function repeats the compiled expression order exactly so the
two backends agree bit for bit on the same inputs wherever libm does. Batch
functions are plain loops; they exist so callers never branch on backend.
"""

import math

__backend__ = "python"

_TAU_FLOOR = 1e-7
_TAU_GRID = 200
_GOLDEN_RELTOL = 1e-3
_INVPHI = 0.6180339887498949


def shell_inv_r6(a, rs):
    if a < 1e-6 * rs:
        return 4.0 * math.pi / (rs * rs * rs * rs)
    dm = rs - a
    dp = rs + a
    return 0.5 * math.pi * rs / a * (1.0 / (dm * dm * dm * dm) - 1.0 / (dp * dp * dp * dp))


def bath_rate(density, r0, c):
    return r0 + c * math.sqrt(density)


def lorentzian(rate, omega):
    return rate / (rate * rate + omega * omega)


def _gamma_gd(d, a, l, n, rho, pref, ge2, omega0, gd_r0, gd_c):
    m = n * rho
    b2 = pref * m * shell_inv_r6(a, 0.5 * d + l)
    return ge2 * b2 * lorentzian(bath_rate(m, gd_r0, gd_c), omega0)


def _gamma_surface(d, a, sigma, pref, ge2, omega0, df_r0, df_c, df_standoff):
    b2 = pref * sigma * shell_inv_r6(a, 0.5 * d + df_standoff)
    return ge2 * b2 * lorentzian(bath_rate(sigma, df_r0, df_c), omega0)


def gamma_parts(d, a, l, n, sigma, t1_bulk, rho, pref, ge2, omega0,
                gd_r0, gd_c, df_r0, df_c, df_standoff):
    gb = 1.0 / t1_bulk
    gs = _gamma_surface(d, a, sigma, pref, ge2, omega0, df_r0, df_c, df_standoff)
    gg = _gamma_gd(d, a, l, n, rho, pref, ge2, omega0, gd_r0, gd_c)
    return gb, gs, gg


def dgamma_dn(d, a, l, n, rho, pref, ge2, omega0, gd_r0, gd_c):
    m = n * rho
    lin = ge2 * pref * rho * shell_inv_r6(a, 0.5 * d + l)
    r = bath_rate(m, gd_r0, gd_c)
    denom = r * r + omega0 * omega0
    s = r / denom
    if m == 0.0 or gd_c == 0.0:
        # one-sided limit at n=0: spectral chain contributes nothing
        return lin * s
    sprime = (omega0 * omega0 - r * r) / (denom * denom)
    return lin * (s + 0.5 * gd_c * math.sqrt(m) * sprime)


def eta_at(tau, gamma, dgdn, contrast, photons, dead):
    if tau <= 0.0 or dgdn <= 0.0:
        return math.inf
    decay = math.exp(-gamma * tau)
    pl = (1.0 - contrast) + contrast * decay
    dcounts = photons * contrast * tau * decay * dgdn
    if dcounts == 0.0:
        return math.inf
    return math.sqrt(photons * pl) / dcounts * math.sqrt(tau + dead)


def optimal_tau(gamma, dgdn, contrast, photons, dead):
    lo = _TAU_FLOOR
    hi = 10.0 / gamma
    if hi <= lo:
        hi = 2.0 * lo
    step = (math.log(hi) - math.log(lo)) / (_TAU_GRID - 1)
    best_eta = math.inf
    best_tau = lo
    best_j = 0
    for j in range(_TAU_GRID):
        tau = math.exp(math.log(lo) + j * step)
        eta = eta_at(tau, gamma, dgdn, contrast, photons, dead)
        if eta < best_eta:
            best_eta = eta
            best_tau = tau
            best_j = j
    a = math.exp(math.log(lo) + (best_j - 1 if best_j > 0 else 0) * step)
    b = math.exp(math.log(lo) + (best_j + 1 if best_j < _TAU_GRID - 1 else _TAU_GRID - 1) * step)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = eta_at(x1, gamma, dgdn, contrast, photons, dead)
    f2 = eta_at(x2, gamma, dgdn, contrast, photons, dead)
    while (b - a) > _GOLDEN_RELTOL * (0.5 * (a + b)):
        if f1 < f2:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - _INVPHI * (b - a)
            f1 = eta_at(x1, gamma, dgdn, contrast, photons, dead)
        else:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + _INVPHI * (b - a)
            f2 = eta_at(x2, gamma, dgdn, contrast, photons, dead)
        if f1 < best_eta:
            best_eta = f1
            best_tau = x1
        if f2 < best_eta:
            best_eta = f2
            best_tau = x2
    return best_tau, best_eta


def batch_gamma(d, a, l, n, sigma, t1_bulk, rho, pref, ge2, omega0,
                gd_r0, gd_c, df_r0, df_c, df_standoff,
                gb_out, gs_out, gg_out):
    for i in range(len(d)):
        gb_out[i] = 1.0 / t1_bulk
        gs_out[i] = _gamma_surface(d[i], a[i], sigma, pref, ge2, omega0,
                                   df_r0, df_c, df_standoff)
        gg_out[i] = _gamma_gd(d[i], a[i], l[i], n[i], rho, pref, ge2,
                              omega0, gd_r0, gd_c)


def batch_dgamma_dn(d, a, l, n, rho, pref, ge2, omega0, gd_r0, gd_c, out):
    for i in range(len(d)):
        out[i] = dgamma_dn(d[i], a[i], l[i], n[i], rho, pref, ge2, omega0,
                           gd_r0, gd_c)


def batch_optimal_tau(gamma, dgdn, contrast, photons, dead, tau_out, eta_out):
    for i in range(len(gamma)):
        tau_out[i], eta_out[i] = optimal_tau(gamma[i], dgdn[i], contrast,
                                             photons, dead)
