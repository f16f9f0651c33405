"""Reproducible Monte Carlo populations of sensor configurations.

Each nanodiamond's parameters come from its own counter-based RNG stream
keyed by (seed, index), so populations are identical for any worker count
and any evaluation order.
"""

from dataclasses import dataclass, replace

import numpy as np

from nvsensor import parallel
from nvsensor.physics import SensorConfig
from nvsensor.streams import TAG_SAMPLE, stream

_MAX_REJECTIONS = 10_000
_MIN_DIAMETER = 4.0     # nm, truncation floor for the diameter normal
_MIN_STANDOFF = 0.3     # nm, Gd cannot sit inside the surface layer


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameter distributions and count for one sampled population."""

    count: int = 5000
    d_mean: float = 25.0
    d_sd: float = 3.0
    n_mean: float = 0.1
    n_sd: float = 0.02
    l_mean: float = 1.5
    l_sd: float = 0.2
    nv_confinement: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("ensemble.count must be >= 1")
        for name in ("d_mean", "n_mean", "l_mean"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"ensemble.{name} must be positive")
        for name in ("d_sd", "n_sd", "l_sd"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"ensemble.{name} must be non-negative")
        if not 0.0 < self.nv_confinement <= 1.0:
            raise ValueError("ensemble.nv_confinement must lie in (0, 1]")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("ensemble.seed must be a uint64")


def _truncated_normal(rng, mean, sd, lower, inclusive, what):
    for _ in range(_MAX_REJECTIONS):
        value = rng.normal(mean, sd)
        if value > lower or (inclusive and value == lower):
            return value
    raise RuntimeError(
        f"rejection sampling for {what} exceeded {_MAX_REJECTIONS} draws; "
        f"Normal({mean}, {sd}) has almost no mass above {lower}")


def _draw(spec: EnsembleSpec, index: int):
    """(diameter, gd_density, gd_standoff, nv_offset) for one index.

    Draw order is part of the reproducibility contract: diameter, density,
    standoff, then the radial position factor.
    """
    rng = stream(spec.seed, TAG_SAMPLE, index)
    d = _truncated_normal(rng, spec.d_mean, spec.d_sd, _MIN_DIAMETER, False,
                          "diameter")
    n = _truncated_normal(rng, spec.n_mean, spec.n_sd, 0.0, True,
                          "gd_density")
    l = _truncated_normal(rng, spec.l_mean, spec.l_sd, _MIN_STANDOFF, True,
                          "gd_standoff")
    # uniform in a ball of radius f*d/2: radius factor is U^(1/3)
    u = rng.random()
    a = spec.nv_confinement * 0.5 * d * u ** (1.0 / 3.0)
    return d, n, l, a


def sample_sensor(spec: EnsembleSpec, index: int,
                  base: SensorConfig | None = None) -> SensorConfig:
    """Sensor number `index` of the population; pure in (spec, index).

    Non-sampled fields (defect density, bulk T1, Gd per strand) are copied
    from `base`, which defaults to SensorConfig defaults.
    """
    if not 0 <= index < spec.count:
        raise ValueError("index must lie in [0, spec.count)")
    d, n, l, a = _draw(spec, index)
    return replace(base or SensorConfig(), diameter=d, gd_density=n,
                   gd_standoff=l, nv_offset=a)


def _draw_block(start: int, stop: int, spec: EnsembleSpec):
    out = np.empty((4, stop - start))
    for i in range(start, stop):
        out[:, i - start] = _draw(spec, i)
    return out


def population_arrays(spec: EnsembleSpec, workers: int = 1):
    """(diameter, gd_density, gd_standoff, nv_offset) arrays, index order."""
    blocks = parallel.map_blocks(_draw_block, spec.count, workers, spec)
    d, n, l, a = np.concatenate(blocks, axis=1)
    return d, n, l, a


def population(spec: EnsembleSpec, base: SensorConfig | None = None,
               workers: int = 1) -> list[SensorConfig]:
    """All spec.count sensors, element i equal to sample_sensor(spec, i)."""
    base = base or SensorConfig()
    d, n, l, a = population_arrays(spec, workers)
    return [replace(base, diameter=d[i], gd_density=n[i], gd_standoff=l[i],
                    nv_offset=a[i]) for i in range(spec.count)]
