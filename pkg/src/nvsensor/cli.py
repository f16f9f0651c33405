"""Command-line front end.

    nvsensor EXPERIMENT [--config PATH] [--seed U64] [--workers N]
                        [--out DIR] [--format csv|json]

Runs one named experiment and writes its artifact table(s) plus a JSON run
manifest into the output directory. Outputs are a pure function of
(config, seed); the worker count only changes the wall time. Exit status:
0 success, 2 usage or configuration error, 3 runtime or numeric error.
"""

import argparse
import sys
import time
from pathlib import Path

import nvsensor
from nvsensor import artifacts, kernels, parallel
from nvsensor.config import (EXPERIMENTS, ConfigError, RunConfig,
                             canonical_dump, parse_config)
from nvsensor.experiments import run_experiment

USAGE_ERROR = 2
RUNTIME_ERROR = 3


def _uint64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit"
                                         " integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("workers must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvsensor",
        description="Simulate an NV-nanodiamond viral-RNA relaxometry sensor.")
    parser.add_argument("experiment", nargs="?", choices=EXPERIMENTS,
                        help="experiment to run (may also come from the"
                             " config file)")
    parser.add_argument("--config", type=Path, default=None,
                        help="TOML configuration file")
    parser.add_argument("--seed", type=_uint64, default=0,
                        help="master RNG seed (default 0)")
    parser.add_argument("--workers", type=_positive_int,
                        default=parallel.default_workers(),
                        help="worker processes (default: all cores)")
    parser.add_argument("--out", type=Path, default=Path("."),
                        help="output directory (default: current)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="artifact table format (default csv)")
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    print(f"nvsensor: error: {kind}: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            return _fail(USAGE_ERROR, "config", str(exc))
        try:
            config = parse_config(text)
        except ConfigError as exc:
            return _fail(USAGE_ERROR, "config", str(exc))
    else:
        config = RunConfig()

    experiment = args.experiment or config.experiment
    if not experiment:
        return _fail(USAGE_ERROR, "usage",
                     "no experiment given on the command line or in the"
                     " config file")

    started = time.time()
    try:
        output = run_experiment(experiment, config, args.seed, args.workers)
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        return _fail(RUNTIME_ERROR, type(exc).__name__, str(exc))

    try:
        args.out.mkdir(parents=True, exist_ok=True)
        written = {}
        for table in output.tables:
            if args.format == "csv":
                content = artifacts.table_csv(table.columns, table.rows)
                name = f"{table.name}.csv"
            else:
                content = artifacts.table_json(table.columns, table.rows)
                name = f"{table.name}.json"
            artifacts.write_atomic(str(args.out / name), content)
            written[name] = artifacts.sha256_text(content)
        if output.report is not None:
            name = f"{output.tables[0].name}_report.json"
            content = artifacts.mapping_json(output.report) + "\n"
            artifacts.write_atomic(str(args.out / name), content)
            written[name] = artifacts.sha256_text(content)
        manifest = {
            "experiment": experiment,
            "seed": args.seed,
            "workers": args.workers,
            "format": args.format,
            "package_version": nvsensor.__version__,
            "kernel_backend": kernels.BACKEND,
            "wall_time_s": round(time.time() - started, 3),
            "outputs": written,
            "config": canonical_dump(config),
        }
        artifacts.write_atomic(str(args.out / "run_manifest.json"),
                               artifacts.mapping_json(manifest) + "\n")
    except OSError as exc:
        return _fail(RUNTIME_ERROR, "io", str(exc))

    for name in written:
        print(args.out / name)
    print(args.out / "run_manifest.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
