"""Photoluminescence readout: relaxation decay plus photon shot noise.

A measurement polarizes the NV, waits a dark time tau, and reads a PL level
normalized to the fully polarized value: PL = (1 - C) + C*exp(-Gamma*tau).
Shot noise corrupts the expected photon count Poisson-wise.
"""

from dataclasses import dataclass

import numpy as np

from nvsensor import calibrated
from nvsensor.physics import (PhysicalConstants, RelaxationBreakdown,
                              SensorConfig, SpinBathParams, relaxation_rate)


@dataclass(frozen=True)
class ReadoutParams:
    """Contrast, photon budget, and timing of one PL measurement.

    Defaults for contrast and photons_per_meas are calibration products (see
    nvsensor.calibrated); dead_time is per-shot overhead outside the dark
    time, dark_time the relaxation wait tau.
    """

    contrast: float = calibrated.CONTRAST
    photons_per_meas: float = calibrated.PHOTONS_PER_MEAS
    dead_time: float = 2e-6
    dark_time: float = 200e-6

    def __post_init__(self):
        if not 0.0 < self.contrast < 1.0:
            raise ValueError("readout.contrast must lie in (0, 1)")
        if self.photons_per_meas < 1.0:
            raise ValueError("readout.photons_per_meas must be >= 1")
        if self.dead_time < 0.0:
            raise ValueError("readout.dead_time must be non-negative")
        if self.dark_time < 0.0:
            raise ValueError("readout.dark_time must be non-negative")


def pl_expected(gamma_total, params: ReadoutParams):
    """Noise-free PL at the configured dark time; accepts arrays.

    PL(0) = 1 and PL -> 1 - contrast as gamma*tau -> infinity.
    """
    if np.any(np.asarray(gamma_total) < 0.0):
        raise ValueError("gamma_total must be non-negative")
    decay = np.exp(np.multiply(gamma_total, -params.dark_time))
    pl = (1.0 - params.contrast) + params.contrast * decay
    return float(pl) if np.isscalar(gamma_total) else pl


def pl_measured(gamma_total, params: ReadoutParams,
                rng: np.random.Generator):
    """One shot-noise PL sample: Poisson(N*PL)/N draws from `rng`."""
    expected = pl_expected(gamma_total, params)
    counts = rng.poisson(np.multiply(params.photons_per_meas, expected))
    value = counts / params.photons_per_meas
    return float(value) if np.isscalar(gamma_total) else value


def virus_pair_pl(config: SensorConfig, gd_bath: SpinBathParams,
                  defect_bath: SpinBathParams, constants: PhysicalConstants,
                  params: ReadoutParams) -> tuple[float, float]:
    """(pl_no_virus, pl_with_virus) for one sensor, noise-free.

    No virus: the full Gd layer quenches T1. With virus: complete
    detachment, gd_density = 0, so only surface defects and the bulk rate
    remain and the PL is strictly higher whenever any Gd was present.
    """
    with_gd = relaxation_rate(config, gd_bath, defect_bath, constants)
    bare = RelaxationBreakdown.from_parts(with_gd.gamma_bulk,
                                          with_gd.gamma_surface, 0.0)
    return (pl_expected(with_gd.gamma_total, params),
            pl_expected(bare.gamma_total, params))
