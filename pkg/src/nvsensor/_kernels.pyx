# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: shell geometry, relaxation rates, dark-time search.

Scalar functions mirror ``_kernels_py`` expression for expression; the batch
functions are plain loops over the scalar ones. No validation happens here,
callers are responsible for domain checks.
"""

from libc.math cimport exp, log, sqrt, INFINITY, M_PI

__backend__ = "compiled"

DEF TAU_FLOOR = 1e-7        # s, lower edge of the dark-time search bracket
DEF TAU_GRID = 200
DEF GOLDEN_RELTOL = 1e-3

cdef double INVPHI = 0.6180339887498949


cdef double c_shell_inv_r6(double a, double rs) nogil:
    cdef double dm, dp
    if a < 1e-6 * rs:
        return 4.0 * M_PI / (rs * rs * rs * rs)
    dm = rs - a
    dp = rs + a
    return 0.5 * M_PI * rs / a * (1.0 / (dm * dm * dm * dm) - 1.0 / (dp * dp * dp * dp))


cdef double c_bath_rate(double density, double r0, double c) nogil:
    return r0 + c * sqrt(density)


cdef double c_lorentzian(double rate, double omega) nogil:
    return rate / (rate * rate + omega * omega)


cdef double c_gamma_gd(double d, double a, double l, double n, double rho,
                       double pref, double ge2, double omega0,
                       double gd_r0, double gd_c) nogil:
    cdef double m = n * rho
    cdef double b2 = pref * m * c_shell_inv_r6(a, 0.5 * d + l)
    return ge2 * b2 * c_lorentzian(c_bath_rate(m, gd_r0, gd_c), omega0)


cdef double c_gamma_surface(double d, double a, double sigma,
                            double pref, double ge2, double omega0,
                            double df_r0, double df_c, double df_standoff) nogil:
    cdef double b2 = pref * sigma * c_shell_inv_r6(a, 0.5 * d + df_standoff)
    return ge2 * b2 * c_lorentzian(c_bath_rate(sigma, df_r0, df_c), omega0)


cdef double c_dgamma_dn(double d, double a, double l, double n, double rho,
                        double pref, double ge2, double omega0,
                        double gd_r0, double gd_c) nogil:
    cdef double m = n * rho
    cdef double lin = ge2 * pref * rho * c_shell_inv_r6(a, 0.5 * d + l)
    cdef double r = c_bath_rate(m, gd_r0, gd_c)
    cdef double denom = r * r + omega0 * omega0
    cdef double s = r / denom
    if m == 0.0 or gd_c == 0.0:
        # one-sided limit at n=0: spectral chain contributes nothing
        return lin * s
    cdef double sprime = (omega0 * omega0 - r * r) / (denom * denom)
    return lin * (s + 0.5 * gd_c * sqrt(m) * sprime)


cdef double c_eta_at(double tau, double gamma, double dgdn,
                     double contrast, double photons, double dead) nogil:
    cdef double decay, pl, dcounts
    if tau <= 0.0 or dgdn <= 0.0:
        return INFINITY
    decay = exp(-gamma * tau)
    pl = (1.0 - contrast) + contrast * decay
    dcounts = photons * contrast * tau * decay * dgdn
    if dcounts == 0.0:
        return INFINITY
    return sqrt(photons * pl) / dcounts * sqrt(tau + dead)


cdef void c_optimal_tau(double gamma, double dgdn, double contrast,
                        double photons, double dead,
                        double *tau_out, double *eta_out) nogil:
    cdef double lo = TAU_FLOOR
    cdef double hi = 10.0 / gamma
    cdef double step, tau, eta, best_tau, best_eta
    cdef double a, b, x1, x2, f1, f2
    cdef Py_ssize_t j, best_j
    if hi <= lo:
        hi = 2.0 * lo
    step = (log(hi) - log(lo)) / (TAU_GRID - 1)
    best_eta = INFINITY
    best_tau = lo
    best_j = 0
    for j in range(TAU_GRID):
        tau = exp(log(lo) + j * step)
        eta = c_eta_at(tau, gamma, dgdn, contrast, photons, dead)
        if eta < best_eta:
            best_eta = eta
            best_tau = tau
            best_j = j
    # golden-section refinement inside the bracketing grid cells
    a = exp(log(lo) + (best_j - 1 if best_j > 0 else 0) * step)
    b = exp(log(lo) + (best_j + 1 if best_j < TAU_GRID - 1 else TAU_GRID - 1) * step)
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1 = c_eta_at(x1, gamma, dgdn, contrast, photons, dead)
    f2 = c_eta_at(x2, gamma, dgdn, contrast, photons, dead)
    while (b - a) > GOLDEN_RELTOL * (0.5 * (a + b)):
        if f1 < f2:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - INVPHI * (b - a)
            f1 = c_eta_at(x1, gamma, dgdn, contrast, photons, dead)
        else:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + INVPHI * (b - a)
            f2 = c_eta_at(x2, gamma, dgdn, contrast, photons, dead)
        if f1 < best_eta:
            best_eta = f1
            best_tau = x1
        if f2 < best_eta:
            best_eta = f2
            best_tau = x2
    tau_out[0] = best_tau
    eta_out[0] = best_eta


# ---------------------------------------------------------------- python API

def shell_inv_r6(double a, double rs):
    return c_shell_inv_r6(a, rs)


def bath_rate(double density, double r0, double c):
    return c_bath_rate(density, r0, c)


def lorentzian(double rate, double omega):
    return c_lorentzian(rate, omega)


def gamma_parts(double d, double a, double l, double n, double sigma,
                double t1_bulk, double rho, double pref, double ge2,
                double omega0, double gd_r0, double gd_c,
                double df_r0, double df_c, double df_standoff):
    cdef double gb = 1.0 / t1_bulk
    cdef double gs = c_gamma_surface(d, a, sigma, pref, ge2, omega0,
                                     df_r0, df_c, df_standoff)
    cdef double gg = c_gamma_gd(d, a, l, n, rho, pref, ge2, omega0, gd_r0, gd_c)
    return gb, gs, gg


def dgamma_dn(double d, double a, double l, double n, double rho, double pref,
              double ge2, double omega0, double gd_r0, double gd_c):
    return c_dgamma_dn(d, a, l, n, rho, pref, ge2, omega0, gd_r0, gd_c)


def eta_at(double tau, double gamma, double dgdn, double contrast,
           double photons, double dead):
    return c_eta_at(tau, gamma, dgdn, contrast, photons, dead)


def optimal_tau(double gamma, double dgdn, double contrast, double photons,
                double dead):
    cdef double tau, eta
    c_optimal_tau(gamma, dgdn, contrast, photons, dead, &tau, &eta)
    return tau, eta


def batch_gamma(double[::1] d, double[::1] a, double[::1] l, double[::1] n,
                double sigma, double t1_bulk, double rho, double pref,
                double ge2, double omega0, double gd_r0, double gd_c,
                double df_r0, double df_c, double df_standoff,
                double[::1] gb_out, double[::1] gs_out, double[::1] gg_out):
    cdef Py_ssize_t i, m = d.shape[0]
    with nogil:
        for i in range(m):
            gb_out[i] = 1.0 / t1_bulk
            gs_out[i] = c_gamma_surface(d[i], a[i], sigma, pref, ge2, omega0,
                                        df_r0, df_c, df_standoff)
            gg_out[i] = c_gamma_gd(d[i], a[i], l[i], n[i], rho, pref, ge2,
                                   omega0, gd_r0, gd_c)


def batch_dgamma_dn(double[::1] d, double[::1] a, double[::1] l, double[::1] n,
                    double rho, double pref, double ge2, double omega0,
                    double gd_r0, double gd_c, double[::1] out):
    cdef Py_ssize_t i, m = d.shape[0]
    with nogil:
        for i in range(m):
            out[i] = c_dgamma_dn(d[i], a[i], l[i], n[i], rho, pref, ge2,
                                 omega0, gd_r0, gd_c)


def batch_optimal_tau(double[::1] gamma, double[::1] dgdn, double contrast,
                      double photons, double dead,
                      double[::1] tau_out, double[::1] eta_out):
    cdef Py_ssize_t i, m = gamma.shape[0]
    cdef double tau, eta
    with nogil:
        for i in range(m):
            c_optimal_tau(gamma[i], dgdn[i], contrast, photons, dead, &tau, &eta)
            tau_out[i] = tau
            eta_out[i] = eta
