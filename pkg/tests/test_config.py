"""Config parsing: defaults, rejection quality, and canonical round-trips."""

import numpy as np
import pytest

from nvsensor.config import (ConfigError, EXPERIMENTS, RunConfig,
                             base_sensor_from, canonical_dump,
                             constants_from, defect_bath_from,
                             ensemble_spec_from, gd_bath_from, parse_config,
                             readout_from)
from nvsensor import calibrated


def test_empty_text_gives_defaults():
    cfg = parse_config("")
    assert cfg == RunConfig()
    assert cfg.ensemble.count == 5000
    assert cfg.readout.contrast == calibrated.CONTRAST
    assert cfg.physics.gd_rate_coeff == calibrated.GD_RATE_COEFF
    assert cfg.experiment == ""


def test_partial_overrides_merge_with_defaults():
    cfg = parse_config(
        'experiment = "fnr-curve"\n\n[ensemble]\ncount = 64\n\n'
        "[fnr_curve]\nload_grid = [10, 20]\n")
    assert cfg.experiment == "fnr-curve"
    assert cfg.ensemble.count == 64
    assert cfg.ensemble.d_mean == 25.0
    assert cfg.fnr_curve.load_grid == (10, 20)
    assert cfg.fnr_curve.group_size == 10


def test_unknown_keys_are_rejected_with_line():
    with pytest.raises(ConfigError, match=r"line 3.*bogus"):
        parse_config("[ensemble]\ncount = 100\nbogus = 1\n")
    with pytest.raises(ConfigError, match=r"line 1.*mystery"):
        parse_config("mystery = 2\n")
    with pytest.raises(ConfigError, match=r"line 1.*conspiracy"):
        parse_config("[conspiracy]\nlevel = 9\n")


def test_seed_is_not_a_config_key():
    # reproducibility comes from the CLI seed, never from the file
    with pytest.raises(ConfigError, match="seed"):
        parse_config("[ensemble]\nseed = 3\n")


def test_type_mismatches_are_rejected():
    with pytest.raises(ConfigError, match="count"):
        parse_config("[ensemble]\ncount = 3.5\n")
    with pytest.raises(ConfigError, match="noisy"):
        parse_config("[ensemble_hist]\nnoisy = 1\n")
    with pytest.raises(ConfigError, match="d_mean"):
        parse_config('[ensemble]\nd_mean = "wide"\n')
    with pytest.raises(ConfigError, match="load_grid"):
        parse_config("[fnr_curve]\nload_grid = [10, 2.5]\n")
    with pytest.raises(ConfigError, match="experiment"):
        parse_config("experiment = 3\n")


def test_invalid_values_are_rejected_with_line():
    with pytest.raises(ConfigError, match=r"line 2.*count"):
        parse_config("[ensemble]\ncount = 0\n")
    with pytest.raises(ConfigError, match="contrast"):
        parse_config("[readout]\ncontrast = 1.5\n")
    with pytest.raises(ConfigError, match="experiment"):
        parse_config('experiment = "warp-drive"\n')
    with pytest.raises(ConfigError, match="allocation"):
        parse_config('[fnr_curve]\nallocation = "magic"\n')
    with pytest.raises(ConfigError, match="group_size"):
        parse_config("[ensemble]\ncount = 5\n\n[fnr_curve]\ngroup_size = 6\n")
    with pytest.raises(ConfigError, match="density_grid"):
        parse_config("[t1_sweep]\ndensity_grid = []\n")
    with pytest.raises(ConfigError, match="malformed"):
        parse_config("not toml [[[")
    with pytest.raises(ConfigError, match="t1_bulk"):
        parse_config("[physics]\nt1_bulk = 0.0\n")
    with pytest.raises(ConfigError, match="finite"):
        parse_config("[physics]\nt1_bulk = nan\n")


def test_canonical_dump_round_trips():
    cfg = parse_config('experiment = "t1-sweep"\n[t1_sweep]\n'
                       "density_grid = [0.0, 0.05, 0.1]\n")
    text = canonical_dump(cfg)
    again = parse_config(text)
    assert again == cfg
    assert canonical_dump(again) == text


def test_random_round_trips():
    rng = np.random.default_rng(61)
    for _ in range(60):
        cfg = RunConfig(
            experiment=str(rng.choice(list(EXPERIMENTS))),
            ensemble=RunConfig().ensemble.__class__(
                count=int(rng.integers(10, 10000)),
                d_mean=float(rng.uniform(10.0, 40.0)),
                d_sd=float(rng.uniform(0.0, 5.0)),
                n_mean=float(rng.uniform(0.01, 0.3)),
                nv_confinement=float(rng.uniform(0.05, 1.0))),
            readout=RunConfig().readout.__class__(
                contrast=float(rng.uniform(0.01, 0.99)),
                photons_per_meas=float(rng.uniform(1.0, 1e6))))
        assert parse_config(canonical_dump(cfg)) == cfg


def test_dump_uses_full_float_precision():
    cfg = parse_config("[ensemble]\nd_mean = 25.100000000000001\n")
    assert "25.100000000000001" in canonical_dump(cfg)


def test_converters_wire_through():
    cfg = parse_config(
        "[physics]\ngd_intrinsic_rate = 2e8\nsurface_rate = 1e9\n"
        "gd_per_cdna = 3.0\n\n[ensemble]\nnv_confinement = 0.5\n\n"
        "[readout]\ncontrast = 0.25\n")
    constants = constants_from(cfg)
    assert constants.dipolar_prefactor == cfg.physics.dipolar_prefactor
    gd = gd_bath_from(cfg)
    assert gd.intrinsic_rate == 2e8
    assert gd.rate_density_coeff == cfg.physics.gd_rate_coeff
    df = defect_bath_from(cfg)
    assert df.intrinsic_rate == 1e9
    base = base_sensor_from(cfg)
    assert base.gd_per_cdna == 3.0
    spec = ensemble_spec_from(cfg, seed=123)
    assert spec.seed == 123
    assert spec.nv_confinement == 0.5
    spec_free = ensemble_spec_from(cfg, seed=123, nv_confinement=1.0)
    assert spec_free.nv_confinement == 1.0
    assert readout_from(cfg).contrast == 0.25


def test_experiments_enum_is_complete():
    assert EXPERIMENTS == ("t1-sweep", "sensitivity-map", "sensitivity-dist",
                           "ensemble-hist", "fnr-curve")
    for name in EXPERIMENTS:
        assert parse_config(f'experiment = "{name}"\n').experiment == name
