#!/usr/bin/env python3
"""Benchmark the compiled integration kernel against the pure-Python mirror.

Runs the same workloads through both backends and reports wall time and
speedup. The two backends produce bitwise-identical trajectories, so the
comparison is purely about speed.

Usage:
    python benchmarks/kernel_benchmark.py [--repeat N]
"""

import argparse
import time

import numpy as np

from wiresplit import (
    PacketState,
    ScatteringInputs,
    StepControl,
    Wire,
    available_backends,
    default_medium,
    simulate,
)
from wiresplit.designer import DesignSpec, design_trajectories


def _scattering_workload(backend, control):
    medium = default_medium()
    initial = PacketState(x=-300e-6, z=0.5e-6, vx=0.01, vz=0.0)
    return simulate(initial, [Wire(0.0, 0.0, 2.0)], medium, 0.06,
                    control, backend=backend)


def _three_wire_workload(backend, control):
    medium = default_medium()
    wires = [Wire(0.0, 0.0, 0.925273),
             Wire(-150e-6, 316.5e-6, 1.57),
             Wire(-150e-6, -316.5e-6, 1.57)]
    initial = PacketState(x=-300e-6, z=0.5e-6, vx=0.01, vz=0.0)
    return simulate(initial, wires, medium, 0.105, control,
                    stop_at_closure=True, backend=backend)


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions per case (best is reported)")
    parser.add_argument("--design", action="store_true",
                        help="also time a full triangular design synthesis")
    args = parser.parse_args()

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled extension not built; timing the Python kernel only")

    control = StepControl()
    cases = [
        ("single-wire scattering (0.06 s flight)", _scattering_workload),
        ("three-wire closure run (0.105 s flight)", _three_wire_workload),
    ]

    times = {}
    for label, fn in cases:
        print(f"\n{label}")
        for backend in backends:
            dt, traj = _time(lambda: fn(backend, control), args.repeat)
            times[(label, backend)] = dt
            print(f"  {backend:>8}: {dt * 1e3:9.2f} ms  "
                  f"({traj.stats.n_steps} steps, "
                  f"{traj.stats.n_rhs_evals} force evaluations)")
        if "compiled" in backends and "python" in backends:
            speedup = times[(label, "python")] / times[(label, "compiled")]
            print(f"  speedup: {speedup:.1f}x")

    if args.design:
        print("\nfull triangular design (shooting loop)")
        inputs = ScatteringInputs(v0=0.01, b=0.5e-6, x0=300e-6, tau=0.1)
        spec = DesignSpec(scheme="triangular", inputs=inputs)
        t0 = time.perf_counter()
        result, _, _ = design_trajectories(spec)
        dt = time.perf_counter() - t0
        print(f"  default backend: {dt * 1e3:9.2f} ms  "
              f"(deflector current {result.wires[1].current:.4f} A)")


if __name__ == "__main__":
    main()
