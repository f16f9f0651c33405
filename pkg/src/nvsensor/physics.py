"""Magnetic-noise spectra and NV longitudinal relaxation rates.

Model: the NV sits a distance ``nv_offset`` from the center of a spherical
nanodiamond. Paramagnetic shells (surface defects at the particle surface,
Gd complexes a standoff above it) produce transverse magnetic noise whose
spectral weight at the zero-field splitting sets the relaxation rate

    1/T1 = 1/t1_bulk + ge^2 B_s^2 S_s(w0) + ge^2 B_gd^2 S_gd(w0)

with Lorentzian spectra S(w) = R/(R^2 + w^2) and mean-square fields from a
continuum dipolar integral over each shell. Internal units: nm, s, T,
rad/s. All functions are pure; every dataclass is frozen.
"""

import math
from dataclasses import dataclass

import numpy as np

from nvsensor import calibrated, kernels

MU0_OVER_4PI = 1e-7            # T m / A
HBAR = 1.054571817e-34         # J s
GAMMA_E = 1.76085963e11        # rad s^-1 T^-1, NV electron
GAMMA_GD = 1.76e11             # rad s^-1 T^-1, Gd3+
OMEGA0 = 2.0 * math.pi * 2.87e9   # rad s^-1, zero-field splitting
KAPPA_ANGULAR = 2.0 / 3.0      # orientation-averaged transverse weight

# rejection threshold below which the shell integral switches to its a -> 0
# closed-form limit (relative switch, see shell_inverse_r6_integral)
_CENTER_LIMIT_FRACTION = 1e-6


def dipolar_prefactor_value(gamma_gd: float = GAMMA_GD,
                            spin_gd: float = 3.5,
                            kappa_angular: float = KAPPA_ANGULAR) -> float:
    """(mu0/4pi)^2 (hbar*gamma_gd)^2 S(S+1) kappa, in T^2 nm^6."""
    moment = MU0_OVER_4PI * HBAR * gamma_gd * 1e27   # T nm^3
    return moment * moment * spin_gd * (spin_gd + 1.0) * kappa_angular


@dataclass(frozen=True)
class PhysicalConstants:
    """Fixed spin constants shared by every rate computation."""

    gamma_e: float = GAMMA_E
    gamma_gd: float = GAMMA_GD
    spin_gd: float = 3.5
    omega0: float = OMEGA0
    dipolar_prefactor: float = dipolar_prefactor_value()

    def __post_init__(self):
        for name in ("gamma_e", "gamma_gd", "spin_gd", "omega0",
                     "dipolar_prefactor"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"constants.{name} must be positive")


@dataclass(frozen=True)
class SensorConfig:
    """One nanodiamond realization.

    diameter d and nv_offset a in nm, Gd layer standoff l in nm above the
    surface, gd_density n in nm^-2, surface defect density sigma in nm^-2,
    background relaxation time t1_bulk in s, gd_per_cdna the number of Gd
    complexes carried per c-DNA strand.
    """

    diameter: float = 25.0
    nv_offset: float = 0.0
    gd_standoff: float = 1.5
    gd_density: float = 0.1
    defect_density: float = 1.0
    t1_bulk: float = 3e-3
    gd_per_cdna: float = 1.0

    def __post_init__(self):
        if self.diameter <= 0.0:
            raise ValueError("config.diameter must be positive")
        if not 0.0 <= self.nv_offset < 0.5 * self.diameter:
            raise ValueError("config.nv_offset must lie in [0, diameter/2)")
        if self.gd_standoff <= 0.0:
            raise ValueError("config.gd_standoff must be positive")
        if self.gd_density < 0.0:
            raise ValueError("config.gd_density must be non-negative")
        if self.defect_density < 0.0:
            raise ValueError("config.defect_density must be non-negative")
        if self.t1_bulk <= 0.0:
            raise ValueError("config.t1_bulk must be positive")
        if self.gd_per_cdna < 1.0:
            raise ValueError("config.gd_per_cdna must be >= 1")


@dataclass(frozen=True)
class SpinBathParams:
    """Fluctuation-rate model R(density) = intrinsic_rate + coeff*sqrt(density).

    standoff places the bath shell above the particle surface; surface
    defects sit at standoff 0. For the Gd bath the shell position comes from
    SensorConfig.gd_standoff instead, since it is a per-sensor quantity.
    """

    intrinsic_rate: float
    rate_density_coeff: float = 0.0
    standoff: float = 0.0

    def __post_init__(self):
        if self.intrinsic_rate < 0.0:
            raise ValueError("bath.intrinsic_rate must be non-negative")
        if self.rate_density_coeff < 0.0:
            raise ValueError("bath.rate_density_coeff must be non-negative")
        if self.standoff < 0.0:
            raise ValueError("bath.standoff must be non-negative")


@dataclass(frozen=True)
class RelaxationBreakdown:
    """Per-source longitudinal rates; gamma_total is their exact sum."""

    gamma_bulk: float
    gamma_surface: float
    gamma_gd: float
    gamma_total: float

    def __post_init__(self):
        if min(self.gamma_bulk, self.gamma_surface, self.gamma_gd) < 0.0:
            raise ValueError("relaxation components must be non-negative")
        if self.gamma_total != self.gamma_bulk + self.gamma_surface + self.gamma_gd:
            raise ValueError("gamma_total must equal the sum of components")

    @classmethod
    def from_parts(cls, gamma_bulk, gamma_surface, gamma_gd):
        return cls(gamma_bulk, gamma_surface, gamma_gd,
                   gamma_bulk + gamma_surface + gamma_gd)

    @property
    def t1(self) -> float:
        return 1.0 / self.gamma_total


def default_constants() -> PhysicalConstants:
    return PhysicalConstants()


def default_gd_bath() -> SpinBathParams:
    return SpinBathParams(intrinsic_rate=calibrated.GD_INTRINSIC_RATE,
                          rate_density_coeff=calibrated.GD_RATE_COEFF)


def default_defect_bath() -> SpinBathParams:
    return SpinBathParams(intrinsic_rate=calibrated.SURFACE_RATE)


def shell_inverse_r6_integral(nv_offset: float, shell_radius: float) -> float:
    """Integral of 1/r^6 over a sphere of radius Rs, seen from offset a.

    Closed form (pi*Rs/2a)*[(Rs-a)^-4 - (Rs+a)^-4]; below a/Rs = 1e-6 the
    analytic a -> 0 limit 4*pi/Rs^4 is used to dodge the 0/0. Units nm^-4.
    """
    if shell_radius <= 0.0:
        raise ValueError("shell_radius must be positive")
    if not 0.0 <= nv_offset < shell_radius:
        raise ValueError("nv_offset must lie in [0, shell_radius)")
    return kernels.shell_inv_r6(nv_offset, shell_radius)


def msq_transverse_field(density: float, nv_offset: float, shell_radius: float,
                         constants: PhysicalConstants) -> float:
    """Mean-square transverse field in T^2 from a uniform shell of spins."""
    if density < 0.0:
        raise ValueError("density must be non-negative")
    return (constants.dipolar_prefactor * density
            * shell_inverse_r6_integral(nv_offset, shell_radius))


def fluctuation_rate(density: float, bath: SpinBathParams) -> float:
    """R = R0 + c_R * sqrt(density), in s^-1."""
    if density < 0.0:
        raise ValueError("density must be non-negative")
    return kernels.bath_rate(density, bath.intrinsic_rate,
                             bath.rate_density_coeff)


def lorentzian_psd(rate: float, omega: float) -> float:
    """S(omega) = R/(R^2 + omega^2); peaks at R = omega with value 1/(2 omega)."""
    if rate < 0.0:
        raise ValueError("rate must be non-negative")
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    return kernels.lorentzian(rate, omega)


def relaxation_rate(config: SensorConfig, gd_bath: SpinBathParams,
                    defect_bath: SpinBathParams,
                    constants: PhysicalConstants) -> RelaxationBreakdown:
    """Eq.-of-motion rate budget for one sensor.

    The Gd shell sits at radius d/2 + config.gd_standoff with effective spin
    density gd_density*gd_per_cdna; the defect shell at d/2 + bath standoff.
    The config invariant nv_offset < diameter/2 keeps the NV inside both.
    """
    gb, gs, gg = kernels.gamma_parts(
        config.diameter, config.nv_offset, config.gd_standoff,
        config.gd_density, config.defect_density, config.t1_bulk,
        config.gd_per_cdna, constants.dipolar_prefactor,
        constants.gamma_e * constants.gamma_e, constants.omega0,
        gd_bath.intrinsic_rate, gd_bath.rate_density_coeff,
        defect_bath.intrinsic_rate, defect_bath.rate_density_coeff,
        defect_bath.standoff)
    return RelaxationBreakdown.from_parts(gb, gs, gg)


def batch_relaxation(diameter, nv_offset, gd_standoff, gd_density, *,
                     defect_density: float, t1_bulk: float, gd_per_cdna: float,
                     gd_bath: SpinBathParams, defect_bath: SpinBathParams,
                     constants: PhysicalConstants):
    """Vector form of relaxation_rate over per-sensor parameter arrays.

    Returns (gamma_bulk, gamma_surface, gamma_gd, gamma_total) arrays; the
    per-element arithmetic is the scalar kernel's, so results match
    relaxation_rate exactly.
    """
    d = np.ascontiguousarray(diameter, dtype=np.float64)
    a = np.ascontiguousarray(nv_offset, dtype=np.float64)
    l = np.ascontiguousarray(gd_standoff, dtype=np.float64)
    n = np.ascontiguousarray(gd_density, dtype=np.float64)
    gb = np.empty_like(d)
    gs = np.empty_like(d)
    gg = np.empty_like(d)
    kernels.batch_gamma(d, a, l, n, defect_density, t1_bulk, gd_per_cdna,
                        constants.dipolar_prefactor,
                        constants.gamma_e * constants.gamma_e,
                        constants.omega0, gd_bath.intrinsic_rate,
                        gd_bath.rate_density_coeff, defect_bath.intrinsic_rate,
                        defect_bath.rate_density_coeff, defect_bath.standoff,
                        gb, gs, gg)
    return gb, gs, gg, gb + gs + gg
