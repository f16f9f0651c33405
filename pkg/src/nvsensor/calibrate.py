"""Grid-search calibration of the free model constants.

The Gd fluctuation coefficient, the surface-bath rate, the PL contrast, and
the photon budget are not pinned down by first principles here; this module
tunes them against two anchors and freezes the result into
``nvsensor.calibrated``:

* single-nanodiamond noiseless classification lands at balanced accuracy
  0.8105 (target window [0.78, 0.84]) on the default 5000-sensor population
  at dark time 200 us;
* the minimum detectable molecule count for a 20 nm sensor (NV centered,
  1 nm standoff, 1 s integration) lands inside [50, 1000], aimed at the
  window's geometric center.

Stage one is independent of contrast and photon budget because balanced
accuracy only sees the rank order of PL values, which any monotone readout
map preserves; that is what makes the two-stage search well posed.

Run ``python -m nvsensor.calibrate`` to print the frozen-constant module.
"""

import math
from dataclasses import dataclass

import numpy as np

from nvsensor import calibrated, kernels
from nvsensor.classify import PlPopulation, optimize_threshold
from nvsensor.physics import (PhysicalConstants, SensorConfig, SpinBathParams,
                              relaxation_rate)
from nvsensor.readout import ReadoutParams, pl_expected, virus_pair_pl
from nvsensor.sampling import EnsembleSpec, population_arrays
from nvsensor.sensitivity import optimal_sensitivity

BA_TARGET = 0.8105
BA_WINDOW = (0.78, 0.84)
MOLECULE_WINDOW = (50.0, 1000.0)
DARK_TIME = 200e-6
GD_INTRINSIC_RATE = 1e8
# keep R(n) below the zero-field splitting for n <= 0.3 nm^-2 so the Gd rate
# stays strictly increasing in density over the supported range
MAX_RATE_COEFF = 3.2e10

C4_CONFIG = SensorConfig(diameter=20.0, nv_offset=0.0, gd_standoff=1.0)
C4_INTEGRATION_TIME = 1.0


@dataclass(frozen=True)
class CalibrationResult:
    gd_rate_coeff: float
    surface_rate: float
    contrast: float
    photons_per_meas: float
    balanced_accuracy_k1: float
    fnr_k1: float
    fpr_k1: float
    min_molecules_c4: float
    pair_separation_d25: float
    t1_ratio_d25: float


def _population_ba(gamma_neg: np.ndarray, gamma_pos: np.ndarray) -> float:
    """Noiseless k=1 balanced accuracy from per-sensor rate arrays.

    Thresholding on -gamma is equivalent to thresholding on PL for any
    contrast, so the readout map drops out entirely.
    """
    pop = PlPopulation(-gamma_neg, -gamma_pos, group_size=1, noisy=False)
    return optimize_threshold(pop).balanced_accuracy


def _gamma_grids(d, a, l, n, constants, surface_rate, rate_coeff):
    sigma = SensorConfig().defect_density
    t1_bulk = SensorConfig().t1_bulk
    gb = np.empty_like(d)
    gs = np.empty_like(d)
    gg = np.empty_like(d)
    kernels.batch_gamma(d, a, l, n, sigma, t1_bulk, 1.0,
                        constants.dipolar_prefactor,
                        constants.gamma_e * constants.gamma_e,
                        constants.omega0, GD_INTRINSIC_RATE, rate_coeff,
                        surface_rate, 0.0, 0.0, gb, gs, gg)
    return gb + gs + gg, gb + gs


def _stage_one(d, a, l, n, constants):
    """(rate_coeff, surface_rate, ba) with ba closest to the target."""
    coeff_grid = np.geomspace(1e9, MAX_RATE_COEFF, 16)
    surface_grid = np.geomspace(1e8, 1e11, 25)
    best = None
    for surface_rate in surface_grid:
        for rate_coeff in coeff_grid:
            gamma_neg, gamma_pos = _gamma_grids(d, a, l, n, constants,
                                                surface_rate, rate_coeff)
            ba = _population_ba(gamma_neg, gamma_pos)
            key = (abs(ba - BA_TARGET), surface_rate, rate_coeff)
            if best is None or key < best[0]:
                best = (key, rate_coeff, surface_rate, ba)
    _, rate_coeff, surface_rate, ba = best
    # refine the coefficient around the winning cell
    for rc in np.geomspace(rate_coeff / 1.6, min(rate_coeff * 1.6,
                                                 MAX_RATE_COEFF), 21):
        gamma_neg, gamma_pos = _gamma_grids(d, a, l, n, constants,
                                            surface_rate, rc)
        candidate = _population_ba(gamma_neg, gamma_pos)
        if abs(candidate - BA_TARGET) < abs(ba - BA_TARGET):
            rate_coeff, ba = rc, candidate
    return rate_coeff, surface_rate, ba


def _stage_two(gd_bath, defect_bath, constants):
    """(contrast, photons) putting the 20 nm sensor's threshold count at
    the geometric center of the acceptance window."""
    target = math.sqrt(MOLECULE_WINDOW[0] * MOLECULE_WINDOW[1])
    contrast_grid = (0.03, 0.05, 0.08, 0.1, 0.12, 0.15, 0.2, 0.25, 0.3)
    photon_grid = (1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0,
                   48.0, 64.0)
    best = None
    for contrast in contrast_grid:
        for photons in photon_grid:
            readout = ReadoutParams(contrast=contrast,
                                    photons_per_meas=photons,
                                    dark_time=DARK_TIME)
            result = optimal_sensitivity(C4_CONFIG, gd_bath, defect_bath,
                                         constants, readout,
                                         C4_INTEGRATION_TIME)
            key = (abs(math.log(result.min_molecules / target)),
                   -photons, -contrast)
            if best is None or key < best[0]:
                best = (key, contrast, photons, result.min_molecules)
    _, contrast, photons, molecules = best
    return contrast, photons, molecules


def run_calibration(spec: EnsembleSpec | None = None,
                    workers: int = 1) -> CalibrationResult:
    """Full two-stage search; raises if either anchor window is missed."""
    spec = spec or EnsembleSpec()
    constants = PhysicalConstants()
    d, n, l, a = population_arrays(spec, workers)
    rate_coeff, surface_rate, _ = _stage_one(d, a, l, n, constants)
    gd_bath = SpinBathParams(intrinsic_rate=GD_INTRINSIC_RATE,
                             rate_density_coeff=rate_coeff)
    defect_bath = SpinBathParams(intrinsic_rate=surface_rate)
    contrast, photons, molecules = _stage_two(gd_bath, defect_bath, constants)
    readout = ReadoutParams(contrast=contrast, photons_per_meas=photons,
                            dark_time=DARK_TIME)

    gamma_neg, gamma_pos = _gamma_grids(d, a, l, n, constants, surface_rate,
                                        rate_coeff)
    pop = PlPopulation(pl_expected(gamma_neg, readout),
                       pl_expected(gamma_pos, readout), 1, False)
    report = optimize_threshold(pop)

    anchor = SensorConfig()  # d=25, centered NV, default layer
    pl_no, pl_with = virus_pair_pl(anchor, gd_bath, defect_bath, constants,
                                   readout)
    with_gd = relaxation_rate(anchor, gd_bath, defect_bath, constants)
    no_gd = relaxation_rate(
        SensorConfig(gd_density=0.0), gd_bath, defect_bath, constants)

    result = CalibrationResult(
        gd_rate_coeff=rate_coeff, surface_rate=surface_rate,
        contrast=contrast, photons_per_meas=photons,
        balanced_accuracy_k1=report.balanced_accuracy,
        fnr_k1=report.fnr, fpr_k1=report.fpr, min_molecules_c4=molecules,
        pair_separation_d25=pl_with - pl_no,
        t1_ratio_d25=with_gd.gamma_total / no_gd.gamma_total)
    if not BA_WINDOW[0] <= result.balanced_accuracy_k1 <= BA_WINDOW[1]:
        raise RuntimeError(
            f"calibration missed the balanced-accuracy window: "
            f"{result.balanced_accuracy_k1:.4f} not in {BA_WINDOW}")
    if not MOLECULE_WINDOW[0] <= result.min_molecules_c4 <= MOLECULE_WINDOW[1]:
        raise RuntimeError(
            f"calibration missed the molecule window: "
            f"{result.min_molecules_c4:.1f} not in {MOLECULE_WINDOW}")
    return result


def matches_frozen(result: CalibrationResult, rel_tol: float = 1e-9) -> bool:
    """Does a fresh calibration reproduce the frozen module constants?"""
    pairs = (
        (result.gd_rate_coeff, calibrated.GD_RATE_COEFF),
        (result.surface_rate, calibrated.SURFACE_RATE),
        (result.contrast, calibrated.CONTRAST),
        (result.photons_per_meas, calibrated.PHOTONS_PER_MEAS),
    )
    return all(math.isclose(got, frozen, rel_tol=rel_tol)
               for got, frozen in pairs)


def _module_source(result: CalibrationResult) -> str:
    golden = {
        "GD_INTRINSIC_RATE": GD_INTRINSIC_RATE,
        "GD_RATE_COEFF": result.gd_rate_coeff,
        "SURFACE_RATE": result.surface_rate,
        "CONTRAST": result.contrast,
        "PHOTONS_PER_MEAS": result.photons_per_meas,
        "BALANCED_ACCURACY_K1": result.balanced_accuracy_k1,
        "PAIR_SEPARATION_D25": result.pair_separation_d25,
        "T1_RATIO_D25": result.t1_ratio_d25,
    }
    lines = [f"{name} = {value!r}" for name, value in golden.items()]
    return "\n".join(lines)


if __name__ == "__main__":
    outcome = run_calibration()
    print(_module_source(outcome))
    print(f"# fnr_k1 = {outcome.fnr_k1!r}")
    print(f"# fpr_k1 = {outcome.fpr_k1!r}")
    print(f"# min_molecules_c4 = {outcome.min_molecules_c4!r}")
