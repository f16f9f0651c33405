"""Two-class PL populations, threshold choice, and detection-rate curves.

The decision rule is fixed by the physics: Gd present means faster
relaxation means lower PL, so a sample below the threshold is called
negative (virus absent) and at/above it positive. The threshold maximizes
balanced accuracy 1 - (FNR + FPR)/2 over the empirical populations.
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from nvsensor import parallel
from nvsensor.physics import (PhysicalConstants, SensorConfig, SpinBathParams,
                              batch_relaxation)
from nvsensor.readout import ReadoutParams, pl_expected
from nvsensor.sampling import EnsembleSpec, _draw, population_arrays
from nvsensor.streams import TAG_DETACH, TAG_READOUT, stream

logger = logging.getLogger(__name__)

ALLOCATIONS = ("hypergeometric", "proportional")


@dataclass(frozen=True, eq=False)
class PlPopulation:
    """Group-mean PL samples for both classes of one simulated assay."""

    values_negative: np.ndarray   # virus absent: Gd attached
    values_positive: np.ndarray   # virus present: Gd (partially) detached
    group_size: int
    noisy: bool

    def __post_init__(self):
        if self.group_size < 1:
            raise ValueError("group_size must be >= 1")
        if len(self.values_negative) == 0 or len(self.values_positive) == 0:
            raise ValueError("both classes must be non-empty")


@dataclass(frozen=True)
class ClassificationReport:
    """Rates at the balanced-accuracy-optimal threshold.

    The worst/best fields bound the effect of photon shot noise by shifting
    the class means one shot-noise sigma toward (away from) each other; on a
    plain optimize_threshold result they equal the noiseless rates. The
    degenerate flag marks indistinguishable classes.
    """

    threshold: float
    fnr: float
    fpr: float
    balanced_accuracy: float
    fnr_worst: float
    fpr_worst: float
    fnr_best: float
    fpr_best: float
    degenerate: bool = False

    def __post_init__(self):
        for name in ("fnr", "fpr", "fnr_worst", "fpr_worst", "fnr_best",
                     "fpr_best"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not 0.5 - 1e-12 <= self.balanced_accuracy <= 1.0:
            raise ValueError("balanced_accuracy must lie in [0.5, 1]")
        # the mean error rate orders worst >= noiseless >= best by the
        # shift construction; individual rates may cross under re-optimized
        # thresholds, so only the combined rate is an invariant
        if (self.fnr_worst + self.fpr_worst) < (self.fnr + self.fpr) - 1e-12:
            raise ValueError("worst-case mean error below noiseless")
        if (self.fnr_best + self.fpr_best) > (self.fnr + self.fpr) + 1e-12:
            raise ValueError("best-case mean error above noiseless")


@dataclass(frozen=True)
class RnaLoadSpec:
    """RNA copy count per measured group plus the site-allocation rule."""

    copies: int
    allocation: str = "hypergeometric"

    def __post_init__(self):
        if self.copies < 0 or self.copies != int(self.copies):
            raise ValueError("copies must be a non-negative integer")
        if self.allocation not in ALLOCATIONS:
            raise ValueError(f"allocation must be one of {ALLOCATIONS}")


def _pl_pair_block(start, stop, spec, base, gd_bath, defect_bath, constants,
                   readout, noisy):
    """Per-sensor (pl_negative, pl_positive) for indices [start, stop)."""
    count = stop - start
    d = np.empty(count)
    n = np.empty(count)
    l = np.empty(count)
    a = np.empty(count)
    for i in range(count):
        d[i], n[i], l[i], a[i] = _draw(spec, start + i)
    gb, gs, gg = batch_relaxation(
        d, a, l, n, defect_density=base.defect_density, t1_bulk=base.t1_bulk,
        gd_per_cdna=base.gd_per_cdna, gd_bath=gd_bath,
        defect_bath=defect_bath, constants=constants)[:3]
    pl_neg = pl_expected(gb + gs + gg, readout)
    pl_pos = pl_expected(gb + gs, readout)
    if noisy:
        p = readout.photons_per_meas
        for i in range(count):
            rng = stream(spec.seed, TAG_READOUT, start + i)
            pl_neg[i] = rng.poisson(p * pl_neg[i]) / p
            pl_pos[i] = rng.poisson(p * pl_pos[i]) / p
    return pl_neg, pl_pos


def _group_means(values: np.ndarray, group_size: int) -> np.ndarray:
    groups = len(values) // group_size
    return values[:groups * group_size].reshape(groups, group_size).mean(axis=1)


def build_population(spec: EnsembleSpec, gd_bath: SpinBathParams,
                     defect_bath: SpinBathParams,
                     constants: PhysicalConstants, readout: ReadoutParams,
                     group_size: int = 1, noisy: bool = False,
                     base: SensorConfig | None = None,
                     workers: int = 1) -> PlPopulation:
    """Simulate the assay once: per-sensor PL pairs averaged in groups.

    Each sensor is measured in both conditions (Gd attached / fully
    detached); consecutive index blocks of group_size are averaged into one
    sample per class. A trailing remainder is dropped with a warning.
    """
    if group_size < 1:
        raise ValueError("group_size must be >= 1")
    if spec.count < group_size:
        raise ValueError("population empty: count < group_size")
    if spec.count % group_size:
        logger.warning("dropping %d trailing sensors not filling a group of %d",
                       spec.count % group_size, group_size)
    base = base or SensorConfig()
    blocks = parallel.map_blocks(_pl_pair_block, spec.count, workers, spec,
                                 base, gd_bath, defect_bath, constants,
                                 readout, noisy)
    pl_neg = np.concatenate([b[0] for b in blocks])
    pl_pos = np.concatenate([b[1] for b in blocks])
    return PlPopulation(_group_means(pl_neg, group_size),
                        _group_means(pl_pos, group_size), group_size, noisy)


def _best_threshold(neg: np.ndarray, pos: np.ndarray):
    """(threshold, fn_count, fp_count) minimizing the exact mean error.

    Candidates are midpoints of adjacent distinct pooled values plus the two
    trivial all-one-class thresholds, so the optimum never drops below
    balanced accuracy 0.5. Error comparison uses the integer count form
    fn*len(neg) + fp*len(pos) to make ties exact; ties break toward lower
    FNR, then lower threshold.
    """
    sorted_neg = np.sort(neg)
    sorted_pos = np.sort(pos)
    pooled = np.sort(np.concatenate([sorted_neg, sorted_pos]))
    distinct = pooled[1:] > pooled[:-1]
    mids = 0.5 * (pooled[:-1][distinct] + pooled[1:][distinct])
    cands = np.concatenate([[pooled[0]], mids, [pooled[-1] + 1.0]])
    fn = np.searchsorted(sorted_pos, cands, side="left")
    fp = len(sorted_neg) - np.searchsorted(sorted_neg, cands, side="left")
    error = fn * len(sorted_neg) + fp * len(sorted_pos)
    best = np.lexsort((np.arange(len(cands)), fn, error))[0]
    return float(cands[best]), int(fn[best]), int(fp[best])


def optimize_threshold(pop: PlPopulation) -> ClassificationReport:
    """Maximize balanced accuracy over the pooled empirical thresholds.

    Rule: PL < threshold is classified negative, PL >= threshold positive;
    FNR is the positive-class fraction below the threshold, FPR the
    negative-class fraction at or above it. Identical classes yield the
    degenerate report: threshold at the pooled median, balanced accuracy
    exactly 0.5. The shot-noise bound fields mirror the noiseless rates.
    """
    neg = np.asarray(pop.values_negative, dtype=np.float64)
    pos = np.asarray(pop.values_positive, dtype=np.float64)
    if len(neg) == len(pos) and np.array_equal(np.sort(neg), np.sort(pos)):
        t = float(np.median(np.concatenate([neg, pos])))
        fnr = float(np.count_nonzero(pos < t) / len(pos))
        fpr = float(np.count_nonzero(neg >= t) / len(neg))
        return ClassificationReport(t, fnr, fpr, 1.0 - 0.5 * (fnr + fpr),
                                    fnr, fpr, fnr, fpr, degenerate=True)
    t, fn, fp = _best_threshold(neg, pos)
    fnr = fn / len(pos)
    fpr = fp / len(neg)
    ba = 1.0 - 0.5 * (fnr + fpr)
    return ClassificationReport(t, fnr, fpr, ba, fnr, fpr, fnr, fpr)


def shot_noise_bounds(pop: PlPopulation, readout: ReadoutParams,
                      group_size: int | None = None):
    """(fnr_worst, fpr_worst, fnr_best, fpr_best) for a noiseless population.

    The per-class group shot-noise scale is s = sqrt(pl_mean/(k*photons)).
    Worst case moves the classes one s toward each other (negative up,
    positive down), best case one s apart; each case gets a freshly
    optimized threshold.
    """
    if pop.noisy:
        raise ValueError("shot-noise bounds need a noiseless population")
    k = pop.group_size if group_size is None else group_size
    if k < 1:
        raise ValueError("group_size must be >= 1")
    neg = np.asarray(pop.values_negative, dtype=np.float64)
    pos = np.asarray(pop.values_positive, dtype=np.float64)
    kp = k * readout.photons_per_meas
    s_neg = math.sqrt(float(np.mean(neg)) / kp)
    s_pos = math.sqrt(float(np.mean(pos)) / kp)
    worst = optimize_threshold(replace_values(pop, neg + s_neg, pos - s_pos))
    best = optimize_threshold(replace_values(pop, neg - s_neg, pos + s_pos))
    return worst.fnr, worst.fpr, best.fnr, best.fpr


def replace_values(pop: PlPopulation, neg: np.ndarray,
                   pos: np.ndarray) -> PlPopulation:
    return PlPopulation(neg, pos, pop.group_size, pop.noisy)


def classify_with_bounds(pop: PlPopulation,
                         readout: ReadoutParams) -> ClassificationReport:
    """Noiseless report with the shot-noise bound fields filled in."""
    report = optimize_threshold(pop)
    fnr_w, fpr_w, fnr_b, fpr_b = shot_noise_bounds(pop, readout)
    return replace(report, fnr_worst=fnr_w, fpr_worst=fpr_w, fnr_best=fnr_b,
                   fpr_best=fpr_b)


def _binding_sites(n, d, l, gd_per_cdna):
    area = 4.0 * math.pi * (0.5 * d + l) ** 2
    return np.round(n * gd_per_cdna * area).astype(np.int64)


def _detached_fractions(sites: np.ndarray, load: RnaLoadSpec, seed: int,
                        group_size: int) -> np.ndarray:
    """Per-sensor detached site fraction under `load` copies per group.

    Copies bind sites without replacement across each group's pooled sites;
    a load at or above the pool detaches everything. Sensors with zero
    sites keep fraction 0.
    """
    groups = len(sites) // group_size
    frac = np.zeros(groups * group_size)
    for g in range(groups):
        block = slice(g * group_size, (g + 1) * group_size)
        m = sites[block]
        pooled = int(m.sum())
        if pooled == 0:
            continue
        if load.copies >= pooled:
            detached = m
        elif load.allocation == "proportional":
            frac[block] = np.where(m > 0, load.copies / pooled, 0.0)
            continue
        else:
            rng = stream(seed, TAG_DETACH, g)
            detached = rng.multivariate_hypergeometric(m, load.copies)
        with np.errstate(invalid="ignore"):
            frac[block] = np.where(m > 0, detached / np.maximum(m, 1), 0.0)
    return frac


def fnr_fpr_vs_copies(spec: EnsembleSpec, gd_bath: SpinBathParams,
                      defect_bath: SpinBathParams,
                      constants: PhysicalConstants, readout: ReadoutParams,
                      group_size: int, load_grid, base: SensorConfig | None = None,
                      workers: int = 1):
    """[(RnaLoadSpec, ClassificationReport)] over the load grid.

    The negative class keeps the full Gd layer; the positive class keeps the
    residual density n*(1 - detached_fraction) under each load. Rates are
    noiseless with shot-noise bounds. The detachment stream is keyed by
    group index, so loads share common random numbers.
    """
    if group_size < 1:
        raise ValueError("group_size must be >= 1")
    if spec.count < group_size:
        raise ValueError("population empty: count < group_size")
    base = base or SensorConfig()
    d, n, l, a = population_arrays(spec, workers)
    gb, gs, gg = batch_relaxation(
        d, a, l, n, defect_density=base.defect_density, t1_bulk=base.t1_bulk,
        gd_per_cdna=base.gd_per_cdna, gd_bath=gd_bath,
        defect_bath=defect_bath, constants=constants)[:3]
    pl_neg = _group_means(pl_expected(gb + gs + gg, readout), group_size)
    usable = (spec.count // group_size) * group_size
    sites = _binding_sites(n[:usable], d[:usable], l[:usable],
                           base.gd_per_cdna)
    curve = []
    for load in load_grid:
        frac = _detached_fractions(sites, load, spec.seed, group_size)
        residual = n[:usable] * (1.0 - frac)
        gg_res = batch_relaxation(
            d[:usable], a[:usable], l[:usable], residual,
            defect_density=base.defect_density, t1_bulk=base.t1_bulk,
            gd_per_cdna=base.gd_per_cdna, gd_bath=gd_bath,
            defect_bath=defect_bath, constants=constants)[2]
        pl_pos = _group_means(pl_expected(gb[:usable] + gs[:usable] + gg_res,
                                          readout), group_size)
        pop = PlPopulation(pl_neg, pl_pos, group_size, noisy=False)
        curve.append((load, classify_with_bounds(pop, readout)))
    return curve
