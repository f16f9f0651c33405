"""Named experiments mapping a RunConfig to artifact tables.

Each experiment returns an ExperimentOutput: ordered column names plus rows
of plain Python values, and optionally a JSON-able sidecar report. The CLI
owns serialization; everything here is pure computation.
"""

import math
from dataclasses import dataclass, replace

from nvsensor.classify import (RnaLoadSpec, build_population,
                               classify_with_bounds, fnr_fpr_vs_copies,
                               optimize_threshold)
from nvsensor.config import (RunConfig, base_sensor_from, constants_from,
                             defect_bath_from, ensemble_spec_from,
                             gd_bath_from, readout_from)
from nvsensor.physics import relaxation_rate
from nvsensor.sampling import population_arrays
from nvsensor.sensitivity import batch_optimal_sensitivity, optimal_sensitivity


@dataclass(frozen=True)
class Table:
    name: str              # artifact stem, e.g. "t1_sweep"
    columns: tuple
    rows: list


@dataclass(frozen=True)
class ExperimentOutput:
    tables: list
    report: dict | None = None   # sidecar JSON contents, if any


def run_t1_sweep(cfg: RunConfig, seed: int, workers: int) -> ExperimentOutput:
    """Relaxation budget versus Gd surface density at fixed geometry."""
    del seed, workers  # deterministic grid, no sampling
    constants, gd, df = constants_from(cfg), gd_bath_from(cfg), defect_bath_from(cfg)
    section = cfg.t1_sweep
    base = replace(base_sensor_from(cfg), diameter=section.diameter,
                   nv_offset=section.nv_offset,
                   gd_standoff=section.gd_standoff)
    rows = []
    for density in section.density_grid:
        breakdown = relaxation_rate(replace(base, gd_density=density),
                                    gd, df, constants)
        rows.append((density, breakdown.gamma_bulk, breakdown.gamma_surface,
                     breakdown.gamma_gd, breakdown.t1))
    table = Table("t1_sweep", ("gd_density_nm2", "gamma_bulk_s1",
                               "gamma_surface_s1", "gamma_gd_s1",
                               "t1_seconds"), rows)
    return ExperimentOutput([table])


def run_sensitivity_map(cfg: RunConfig, seed: int,
                        workers: int) -> ExperimentOutput:
    """Minimum detectable molecules over the (diameter, standoff) grid."""
    del seed, workers
    constants, gd, df = constants_from(cfg), gd_bath_from(cfg), defect_bath_from(cfg)
    readout = readout_from(cfg)
    section = cfg.sensitivity_map
    base = base_sensor_from(cfg)
    rows = []
    for diameter in section.diameter_grid:
        for standoff in section.standoff_grid:
            sensor = replace(base, diameter=diameter,
                             nv_offset=section.nv_offset,
                             gd_standoff=standoff,
                             gd_density=section.gd_density)
            result = optimal_sensitivity(sensor, gd, df, constants, readout,
                                         section.integration_time)
            rows.append((diameter, standoff, result.tau_opt,
                         result.eta_density, result.min_molecules,
                         result.min_rna_copies))
    table = Table("sensitivity_map", ("diameter_nm", "standoff_nm",
                                      "tau_opt_s", "eta_density",
                                      "min_molecules", "min_rna_copies"),
                  rows)
    return ExperimentOutput([table])


def run_sensitivity_dist(cfg: RunConfig, seed: int,
                         workers: int) -> ExperimentOutput:
    """Per-sensor optimal sensitivity over a sampled population."""
    constants, gd, df = constants_from(cfg), gd_bath_from(cfg), defect_bath_from(cfg)
    readout = readout_from(cfg)
    section = cfg.sensitivity_dist
    base = base_sensor_from(cfg)
    spec = ensemble_spec_from(cfg, seed, section.nv_confinement)
    d, n, l, a = population_arrays(spec, workers)
    eta, tau, molecules, rna = batch_optimal_sensitivity(
        d, a, l, n, defect_density=base.defect_density, t1_bulk=base.t1_bulk,
        gd_per_cdna=base.gd_per_cdna, gd_bath=gd, defect_bath=df,
        constants=constants, readout=readout,
        integration_time=section.integration_time)
    del eta, tau
    rows = [(i, d[i], n[i], l[i], a[i], molecules[i],
             int(math.isfinite(molecules[i])))
            for i in range(spec.count)]
    table = Table("sensitivity_dist", ("sensor_index", "diameter_nm",
                                       "gd_density_nm2", "standoff_nm",
                                       "nv_offset_nm", "min_molecules",
                                       "detectable_flag"), rows)
    return ExperimentOutput([table])


def run_ensemble_hist(cfg: RunConfig, seed: int,
                      workers: int) -> ExperimentOutput:
    """Group-mean PL samples for both classes, plus a threshold sidecar."""
    constants, gd, df = constants_from(cfg), gd_bath_from(cfg), defect_bath_from(cfg)
    readout = readout_from(cfg)
    section = cfg.ensemble_hist
    spec = ensemble_spec_from(cfg, seed)
    base = base_sensor_from(cfg)
    pop = build_population(spec, gd, df, constants, readout,
                           section.group_size, section.noisy, base, workers)
    if section.noisy:
        report = optimize_threshold(pop)
    else:
        report = classify_with_bounds(pop, readout)
    noisy_flag = int(section.noisy)
    rows = [(i, "neg", section.group_size, noisy_flag, value)
            for i, value in enumerate(pop.values_negative)]
    rows += [(i, "pos", section.group_size, noisy_flag, value)
             for i, value in enumerate(pop.values_positive)]
    table = Table("ensemble_hist", ("sample_index", "class", "group_size",
                                    "noisy_flag", "pl_value"), rows)
    sidecar = {
        "experiment": "ensemble-hist",
        "group_size": section.group_size,
        "noisy": section.noisy,
        "threshold": report.threshold,
        "fnr": report.fnr,
        "fpr": report.fpr,
        "balanced_accuracy": report.balanced_accuracy,
        "fnr_worst": report.fnr_worst,
        "fpr_worst": report.fpr_worst,
        "fnr_best": report.fnr_best,
        "fpr_best": report.fpr_best,
        "degenerate": report.degenerate,
    }
    return ExperimentOutput([table], report=sidecar)


def run_fnr_curve(cfg: RunConfig, seed: int, workers: int) -> ExperimentOutput:
    """Detection rates versus RNA copies per measured group."""
    constants, gd, df = constants_from(cfg), gd_bath_from(cfg), defect_bath_from(cfg)
    readout = readout_from(cfg)
    section = cfg.fnr_curve
    spec = ensemble_spec_from(cfg, seed)
    base = base_sensor_from(cfg)
    loads = [RnaLoadSpec(copies, section.allocation)
             for copies in section.load_grid]
    curve = fnr_fpr_vs_copies(spec, gd, df, constants, readout,
                              section.group_size, loads, base, workers)
    rows = [(load.copies, section.group_size, report.threshold, report.fnr,
             report.fpr, report.fnr_worst, report.fpr_worst, report.fnr_best,
             report.fpr_best, report.balanced_accuracy)
            for load, report in curve]
    table = Table("fnr_curve", ("rna_copies", "group_size", "threshold",
                                "fnr", "fpr", "fnr_worst", "fpr_worst",
                                "fnr_best", "fpr_best", "balanced_accuracy"),
                  rows)
    return ExperimentOutput([table])


RUNNERS = {
    "t1-sweep": run_t1_sweep,
    "sensitivity-map": run_sensitivity_map,
    "sensitivity-dist": run_sensitivity_dist,
    "ensemble-hist": run_ensemble_hist,
    "fnr-curve": run_fnr_curve,
}


def run_experiment(name: str, cfg: RunConfig, seed: int,
                   workers: int) -> ExperimentOutput:
    if name not in RUNNERS:
        raise ValueError(f"unknown experiment '{name}'")
    return RUNNERS[name](cfg, seed, workers)
