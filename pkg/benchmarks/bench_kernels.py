#!/usr/bin/env python3
"""Time the compiled relaxometry kernels against the pure-Python fallback.

Both backends are imported side by side, so the script reports real
apples-to-apples timings regardless of which one `nvsensor.kernels`
selected for the current process. Usage:

    python3 benchmarks/bench_kernels.py --count 100000 --repeat 3
"""

import argparse
import time
from dataclasses import replace

import numpy as np

from nvsensor import _kernels_py
from nvsensor.config import (
    RunConfig,
    constants_from,
    defect_bath_from,
    ensemble_spec_from,
    gd_bath_from,
    readout_from,
)
from nvsensor.sampling import population_arrays

try:
    from nvsensor import _kernels
except ImportError:
    _kernels = None


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=100_000,
                        help="sensors per batch call (default 100000)")
    parser.add_argument("--scalar-count", type=int, default=1_000,
                        help="configs for the scalar optimal_tau loop")
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per case; best time wins")
    args = parser.parse_args()

    cfg = RunConfig()
    constants = constants_from(cfg)
    gd_bath = gd_bath_from(cfg)
    defect_bath = defect_bath_from(cfg)
    readout = readout_from(cfg)
    spec = replace(ensemble_spec_from(cfg, seed=0), count=args.count)
    d, n, l, a = population_arrays(spec)

    shared = (
        1.0, 0.003, 1.0,
        constants.dipolar_prefactor,
        constants.gamma_e * constants.gamma_e, constants.omega0,
        gd_bath.intrinsic_rate, gd_bath.rate_density_coeff,
        defect_bath.intrinsic_rate, defect_bath.rate_density_coeff,
        defect_bath.standoff,
    )
    gamma = {}
    dgdn = {}
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["compiled"] = _kernels

    results = []
    for name, mod in backends.items():
        gb = np.empty_like(d)
        gs = np.empty_like(d)
        gg = np.empty_like(d)
        dt = best_of(args.repeat,
                     lambda: mod.batch_gamma(d, a, l, n, *shared, gb, gs, gg))
        results.append(("batch_gamma", name, args.count, dt))
        gamma[name] = gb + gs + gg

        slope = np.empty_like(d)
        dt = best_of(args.repeat, lambda: mod.batch_dgamma_dn(
            d, a, l, n, 1.0, constants.dipolar_prefactor,
            constants.gamma_e * constants.gamma_e, constants.omega0,
            gd_bath.intrinsic_rate, gd_bath.rate_density_coeff, slope))
        results.append(("batch_dgamma_dn", name, args.count, dt))
        dgdn[name] = slope

        tau = np.empty_like(d)
        eta = np.empty_like(d)
        dt = best_of(args.repeat, lambda: mod.batch_optimal_tau(
            gamma[name], dgdn[name], readout.contrast,
            readout.photons_per_meas, readout.dead_time, tau, eta))
        results.append(("batch_optimal_tau", name, args.count, dt))

        m = args.scalar_count
        dt = best_of(args.repeat, lambda: [
            mod.optimal_tau(gamma[name][i], dgdn[name][i], readout.contrast,
                            readout.photons_per_meas, readout.dead_time)
            for i in range(m)
        ])
        results.append(("optimal_tau loop", name, m, dt))

    width = max(len(r[0]) for r in results)
    print(f"{'kernel':<{width}}  {'backend':<8}  {'calls':>8}  "
          f"{'best':>10}  {'per call':>10}")
    by_case = {}
    for case, name, count, dt in results:
        by_case.setdefault(case, {})[name] = dt
        print(f"{case:<{width}}  {name:<8}  {count:>8}  "
              f"{dt * 1e3:>8.2f}ms  {dt / count * 1e9:>8.1f}ns")
    if _kernels is not None:
        print()
        for case, times in by_case.items():
            print(f"{case:<{width}}  speedup x{times['python'] / times['compiled']:.1f}")
        drift = max(
            float(np.max(np.abs(gamma["python"] - gamma["compiled"])
                         / gamma["python"])),
            float(np.max(np.abs(dgdn["python"] - dgdn["compiled"])
                         / dgdn["python"])),
        )
        print(f"\nbackend agreement: max rel diff {drift:.2e}")
    else:
        print("\ncompiled backend unavailable; timed the fallback only")


if __name__ == "__main__":
    main()
