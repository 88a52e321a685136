"""Benchmark the RK4 inner loop: compiled (numba) vs pure-Python fallback.

Builds the half-step Hamiltonian table for a representative encircling loop
and times both implementations of the kernel on identical inputs, checking
that they agree to machine precision.

Run from the repository root:

    python3 benchmarks/bench_rk4.py [--steps N] [--repeat R]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from epdrive import cosine_loop
from epdrive._kernels import _rk4_lognorm
from epdrive.propagator import effective_hamiltonian_table


def build_inputs(n_steps: int):
    sch = cosine_loop(0.2, 0.29, 0.0, 30.0, 10 * math.pi)
    t_half = np.linspace(0.0, sch.period, 2 * n_steps + 1)
    h_half = np.ascontiguousarray(effective_hamiltonian_table(sch, t_half))
    psi0 = np.array([1.0 + 0j, 0.0 + 0j])
    dt = sch.period / n_steps
    return h_half, psi0, dt


def run(kernel, h_half, psi0, dt, repeat: int) -> tuple[float, np.ndarray, np.ndarray]:
    n = (h_half.shape[0] - 1) // 2
    states = np.empty((n + 1, 2), dtype=complex)
    log_norm = np.empty(n + 1)
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        status = kernel(h_half, psi0, dt, states, log_norm)
        best = min(best, time.perf_counter() - t0)
        assert status == 0
    return best, states, log_norm


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    h_half, psi0, dt = build_inputs(args.steps)

    try:
        import numba
    except ImportError:
        print("numba not installed; only the numpy fallback is available")
        t_py, _, _ = run(_rk4_lognorm, h_half, psi0, dt, args.repeat)
        print(f"numpy fallback: {t_py * 1e3:8.2f} ms  ({args.steps} steps)")
        return

    compiled = numba.njit(cache=True)(_rk4_lognorm)
    # warm up compilation outside the timed region
    run(compiled, h_half[:5], psi0, dt, 1)

    t_nb, s_nb, l_nb = run(compiled, h_half, psi0, dt, args.repeat)
    t_py, s_py, l_py = run(_rk4_lognorm, h_half, psi0, dt, args.repeat)

    assert np.allclose(s_nb, s_py, atol=1e-14)
    assert np.allclose(l_nb, l_py, atol=1e-12)

    print(f"steps: {args.steps}, best of {args.repeat} runs")
    print(f"  numba kernel :  {t_nb * 1e3:8.2f} ms")
    print(f"  numpy fallback: {t_py * 1e3:8.2f} ms")
    print(f"  speedup      :  {t_py / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
