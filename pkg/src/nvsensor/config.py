"""TOML run configuration: parsing, validation, canonical serialization.

Every key has a default, unknown keys are rejected with their line number,
and a parsed config dumps to a canonical text that re-parses to an equal
RunConfig. Floats serialize with 17 significant digits so the round trip is
exact.
"""

import math
import re
from dataclasses import dataclass, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from nvsensor import calibrated
from nvsensor.physics import (PhysicalConstants, SensorConfig, SpinBathParams,
                              dipolar_prefactor_value, GAMMA_E, GAMMA_GD,
                              OMEGA0)
from nvsensor.readout import ReadoutParams
from nvsensor.sampling import EnsembleSpec

EXPERIMENTS = ("t1-sweep", "sensitivity-map", "sensitivity-dist",
               "ensemble-hist", "fnr-curve")


class ConfigError(ValueError):
    """Config parse or validation failure; message carries the key path."""


@dataclass(frozen=True)
class PhysicsSection:
    gamma_e: float = GAMMA_E
    gamma_gd: float = GAMMA_GD
    spin_gd: float = 3.5
    omega0: float = OMEGA0
    dipolar_prefactor: float = dipolar_prefactor_value()
    gd_intrinsic_rate: float = calibrated.GD_INTRINSIC_RATE
    gd_rate_coeff: float = calibrated.GD_RATE_COEFF
    surface_rate: float = calibrated.SURFACE_RATE
    surface_rate_coeff: float = 0.0
    surface_standoff: float = 0.0
    t1_bulk: float = 3e-3
    defect_density: float = 1.0
    gd_per_cdna: float = 1.0


@dataclass(frozen=True)
class EnsembleSection:
    count: int = 5000
    d_mean: float = 25.0
    d_sd: float = 3.0
    n_mean: float = 0.1
    n_sd: float = 0.02
    l_mean: float = 1.5
    l_sd: float = 0.2
    nv_confinement: float = 0.2


@dataclass(frozen=True)
class ReadoutSection:
    contrast: float = calibrated.CONTRAST
    photons_per_meas: float = calibrated.PHOTONS_PER_MEAS
    dead_time: float = 2e-6
    dark_time: float = 200e-6


@dataclass(frozen=True)
class T1SweepSection:
    diameter: float = 25.0
    nv_offset: float = 0.0
    gd_standoff: float = 1.0
    density_grid: tuple = tuple(float(x) for x in np.linspace(0.0, 0.2, 41))


@dataclass(frozen=True)
class SensitivityMapSection:
    diameter_grid: tuple = tuple(float(x) for x in np.linspace(15.0, 40.0, 26))
    standoff_grid: tuple = tuple(float(x) for x in np.linspace(0.5, 3.0, 26))
    gd_density: float = 0.1
    nv_offset: float = 0.0
    integration_time: float = 1.0


@dataclass(frozen=True)
class SensitivityDistSection:
    integration_time: float = 1.0
    # the sensitivity distribution frees the NV over the whole particle,
    # unlike the classification runs which confine it to 20% of the radius
    nv_confinement: float = 1.0


@dataclass(frozen=True)
class EnsembleHistSection:
    group_size: int = 1
    noisy: bool = True


@dataclass(frozen=True)
class FnrCurveSection:
    group_size: int = 10
    load_grid: tuple = (100, 1000, 10000, 100000)
    allocation: str = "hypergeometric"


@dataclass(frozen=True)
class RunConfig:
    experiment: str = ""
    physics: PhysicsSection = PhysicsSection()
    ensemble: EnsembleSection = EnsembleSection()
    readout: ReadoutSection = ReadoutSection()
    t1_sweep: T1SweepSection = T1SweepSection()
    sensitivity_map: SensitivityMapSection = SensitivityMapSection()
    sensitivity_dist: SensitivityDistSection = SensitivityDistSection()
    ensemble_hist: EnsembleHistSection = EnsembleHistSection()
    fnr_curve: FnrCurveSection = FnrCurveSection()


_SECTIONS = {
    "physics": PhysicsSection,
    "ensemble": EnsembleSection,
    "readout": ReadoutSection,
    "t1_sweep": T1SweepSection,
    "sensitivity_map": SensitivityMapSection,
    "sensitivity_dist": SensitivityDistSection,
    "ensemble_hist": EnsembleHistSection,
    "fnr_curve": FnrCurveSection,
}


def _key_line(text: str, section: str, key: str) -> int:
    """Best-effort line number of `key` inside `[section]` (0 if not found)."""
    current = ""
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        header = re.match(r"\[([^\]]+)\]", stripped)
        if header:
            current = header.group(1).strip()
            # an unknown section is reported as its header line
            if section == "" and current == key:
                return lineno
            continue
        assign = re.match(r"([\w.\"'-]+)\s*=", stripped)
        if not assign:
            continue
        name = assign.group(1).strip("\"'")
        if (current == section and name == key) or (
                current == "" and section and name == f"{section}.{key}"):
            return lineno
    return 0


def _where(text, section, key):
    lineno = _key_line(text, section, key)
    prefix = f"line {lineno}: " if lineno else ""
    path = f"{section}.{key}" if section else key
    return prefix, path


def _coerce(value, kind, path, text, section, key):
    prefix, _ = _where(text, section, key)
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{prefix}{path} must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{prefix}{path} must be an integer")
        return int(value)
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{prefix}{path} must be true or false")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{prefix}{path} must be a string")
        return value
    if kind is tuple:
        if not isinstance(value, list):
            raise ConfigError(f"{prefix}{path} must be an array")
        return value
    raise AssertionError(kind)


def _parse_section(name: str, data: dict, text: str):
    cls = _SECTIONS[name]
    spec = {f.name: f for f in fields(cls)}
    values = {}
    for key, raw in data.items():
        if key not in spec:
            prefix, path = _where(text, name, key)
            raise ConfigError(f"{prefix}unknown key '{path}'")
        default = getattr(cls, key)
        kind = tuple if isinstance(default, tuple) else type(default)
        value = _coerce(raw, kind, f"{name}.{key}", text, name, key)
        if kind is tuple:
            element = int if all(isinstance(v, int) for v in default) else float
            out = []
            for i, item in enumerate(value):
                if isinstance(item, bool) or not isinstance(item, (int, float)):
                    prefix, path = _where(text, name, key)
                    raise ConfigError(f"{prefix}{path}[{i}] must be a number")
                if element is int and not isinstance(item, int):
                    prefix, path = _where(text, name, key)
                    raise ConfigError(f"{prefix}{path}[{i}] must be an integer")
                out.append(element(item))
            value = tuple(out)
        values[key] = value
    return cls(**values)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a TOML config document."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    values = {}
    for key, raw in data.items():
        if key == "experiment":
            experiment = _coerce(raw, str, "experiment", text, "", key)
            if experiment and experiment not in EXPERIMENTS:
                prefix, _ = _where(text, "", key)
                raise ConfigError(
                    f"{prefix}experiment must be one of {EXPERIMENTS}")
            values["experiment"] = experiment
        elif key in _SECTIONS:
            if not isinstance(raw, dict):
                prefix, _ = _where(text, "", key)
                raise ConfigError(f"{prefix}'{key}' must be a section")
            values[key] = _parse_section(key, raw, text)
        else:
            prefix, path = _where(text, "", key)
            raise ConfigError(f"{prefix}unknown key '{path}'")
    config = RunConfig(**values)
    _validate(config, text)
    return config


def _check(ok: bool, path: str, rule: str, text: str = ""):
    if not ok:
        section, _, key = path.rpartition(".")
        prefix, _ = _where(text, section, key)
        raise ConfigError(f"{prefix}{path} {rule}")


def _validate(cfg: RunConfig, text: str = ""):
    p, e, r = cfg.physics, cfg.ensemble, cfg.readout
    for name in ("gamma_e", "gamma_gd", "spin_gd", "omega0",
                 "dipolar_prefactor", "t1_bulk"):
        value = getattr(p, name)
        _check(math.isfinite(value) and value > 0.0,
               f"physics.{name}", "must be positive and finite", text)
    for name in ("gd_intrinsic_rate", "gd_rate_coeff", "surface_rate",
                 "surface_rate_coeff", "surface_standoff", "defect_density"):
        value = getattr(p, name)
        _check(math.isfinite(value) and value >= 0.0,
               f"physics.{name}", "must be non-negative and finite", text)
    _check(p.gd_per_cdna >= 1.0, "physics.gd_per_cdna", "must be >= 1", text)
    _check(e.count >= 1, "ensemble.count", "must be >= 1", text)
    for name in ("d_mean", "n_mean", "l_mean"):
        _check(getattr(e, name) > 0.0, f"ensemble.{name}",
               "must be positive", text)
    for name in ("d_sd", "n_sd", "l_sd"):
        _check(getattr(e, name) >= 0.0, f"ensemble.{name}",
               "must be non-negative", text)
    _check(0.0 < e.nv_confinement <= 1.0, "ensemble.nv_confinement",
           "must lie in (0, 1]", text)
    _check(0.0 < r.contrast < 1.0, "readout.contrast",
           "must lie in (0, 1)", text)
    _check(r.photons_per_meas >= 1.0, "readout.photons_per_meas",
           "must be >= 1", text)
    _check(r.dead_time >= 0.0, "readout.dead_time",
           "must be non-negative", text)
    _check(r.dark_time >= 0.0, "readout.dark_time",
           "must be non-negative", text)
    t = cfg.t1_sweep
    _check(t.diameter > 0.0, "t1_sweep.diameter", "must be positive", text)
    _check(0.0 <= t.nv_offset < 0.5 * t.diameter, "t1_sweep.nv_offset",
           "must lie in [0, diameter/2)", text)
    _check(t.gd_standoff > 0.0, "t1_sweep.gd_standoff",
           "must be positive", text)
    _check(len(t.density_grid) >= 1, "t1_sweep.density_grid",
           "must be non-empty", text)
    _check(all(v >= 0.0 for v in t.density_grid), "t1_sweep.density_grid",
           "entries must be non-negative", text)
    m = cfg.sensitivity_map
    _check(len(m.diameter_grid) >= 1 and all(v > 0.0 for v in m.diameter_grid),
           "sensitivity_map.diameter_grid",
           "entries must be positive and non-empty", text)
    _check(len(m.standoff_grid) >= 1 and all(v > 0.0 for v in m.standoff_grid),
           "sensitivity_map.standoff_grid",
           "entries must be positive and non-empty", text)
    _check(m.gd_density >= 0.0, "sensitivity_map.gd_density",
           "must be non-negative", text)
    _check(all(m.nv_offset < 0.5 * d for d in m.diameter_grid)
           and m.nv_offset >= 0.0, "sensitivity_map.nv_offset",
           "must lie in [0, diameter/2) for every grid diameter", text)
    _check(m.integration_time > 0.0, "sensitivity_map.integration_time",
           "must be positive", text)
    sd = cfg.sensitivity_dist
    _check(sd.integration_time > 0.0, "sensitivity_dist.integration_time",
           "must be positive", text)
    _check(0.0 < sd.nv_confinement <= 1.0, "sensitivity_dist.nv_confinement",
           "must lie in (0, 1]", text)
    h = cfg.ensemble_hist
    _check(h.group_size >= 1, "ensemble_hist.group_size", "must be >= 1", text)
    _check(h.group_size <= e.count, "ensemble_hist.group_size",
           "must not exceed ensemble.count", text)
    f = cfg.fnr_curve
    _check(f.group_size >= 1, "fnr_curve.group_size", "must be >= 1", text)
    _check(f.group_size <= e.count, "fnr_curve.group_size",
           "must not exceed ensemble.count", text)
    _check(len(f.load_grid) >= 1 and all(v >= 0 for v in f.load_grid),
           "fnr_curve.load_grid", "entries must be non-negative", text)
    _check(f.allocation in ("hypergeometric", "proportional"),
           "fnr_curve.allocation",
           "must be 'hypergeometric' or 'proportional'", text)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, tuple):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise AssertionError(type(value))


def canonical_dump(cfg: RunConfig) -> str:
    """Stable text form: fixed section and key order, 17-digit floats."""
    lines = [f"experiment = {_format_value(cfg.experiment)}", ""]
    for name, cls in _SECTIONS.items():
        lines.append(f"[{name}]")
        section = getattr(cfg, name)
        for field in fields(cls):
            lines.append(
                f"{field.name} = {_format_value(getattr(section, field.name))}")
        lines.append("")
    return "\n".join(lines)


# ------------------------------------------------- domain object converters

def constants_from(cfg: RunConfig) -> PhysicalConstants:
    p = cfg.physics
    return PhysicalConstants(gamma_e=p.gamma_e, gamma_gd=p.gamma_gd,
                             spin_gd=p.spin_gd, omega0=p.omega0,
                             dipolar_prefactor=p.dipolar_prefactor)


def gd_bath_from(cfg: RunConfig) -> SpinBathParams:
    p = cfg.physics
    return SpinBathParams(intrinsic_rate=p.gd_intrinsic_rate,
                          rate_density_coeff=p.gd_rate_coeff)


def defect_bath_from(cfg: RunConfig) -> SpinBathParams:
    p = cfg.physics
    return SpinBathParams(intrinsic_rate=p.surface_rate,
                          rate_density_coeff=p.surface_rate_coeff,
                          standoff=p.surface_standoff)


def base_sensor_from(cfg: RunConfig) -> SensorConfig:
    p = cfg.physics
    return SensorConfig(defect_density=p.defect_density, t1_bulk=p.t1_bulk,
                        gd_per_cdna=p.gd_per_cdna)


def ensemble_spec_from(cfg: RunConfig, seed: int,
                       nv_confinement: float | None = None) -> EnsembleSpec:
    e = cfg.ensemble
    return EnsembleSpec(count=e.count, d_mean=e.d_mean, d_sd=e.d_sd,
                        n_mean=e.n_mean, n_sd=e.n_sd, l_mean=e.l_mean,
                        l_sd=e.l_sd,
                        nv_confinement=(e.nv_confinement
                                        if nv_confinement is None
                                        else nv_confinement),
                        seed=seed)


def readout_from(cfg: RunConfig) -> ReadoutParams:
    r = cfg.readout
    return ReadoutParams(contrast=r.contrast,
                         photons_per_meas=r.photons_per_meas,
                         dead_time=r.dead_time, dark_time=r.dark_time)
