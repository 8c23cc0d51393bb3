"""Timing harness for the hot kernels: compiled path vs. fallback path.

Runs each kernel through the numba-compiled implementation and through the
pure numpy / scipy fallback that SEMIFLOW_NO_NUMBA=1 would select, and
prints best-of-``--repeat`` wall times with the speedup factor.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from semiflow import _kernels as K
from semiflow import make_network, build_adjacency, weighted_bc


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def row(name: str, size: str, fast: float, slow: float) -> None:
    print(f"{name:<34} {size:<18} {fast * 1e3:>10.3f} {slow * 1e3:>10.3f} "
          f"{slow / fast:>8.1f}x")


def bench_damped_cumsum(repeat: int) -> None:
    rng = np.random.default_rng(0)
    n = 200_000
    v = rng.standard_normal(n + 1)
    h = 1.0 / n

    rates = rng.uniform(0.5, 3.0, n)
    d, a, b = K.panel_decay_weights(rates * h)
    wa, wb = a * h, b * h
    jit = lambda: K._damped_cumsum_jit(v, d, wa, wb)
    py = lambda: K._damped_cumsum_py(v, d, wa, wb)
    row("damped cumulative (array rate)", f"n={n}",
        best_time(jit, repeat), best_time(py, repeat))

    z = 2.0 * h
    ds, as_, bs = K.panel_decay_weights(np.asarray(z))
    dv = np.full(n, float(ds))
    wav = np.full(n, float(as_) * h)
    wbv = np.full(n, float(bs) * h)
    jit_s = lambda: K._damped_cumsum_jit(v, dv, wav, wbv)
    lf = lambda: K._damped_cumsum_lfilter(v, float(ds), float(as_) * h,
                                          float(bs) * h)
    row("damped cumulative (scalar rate)", f"n={n}",
        best_time(jit_s, repeat), best_time(lf, repeat))


def bench_upwind(repeat: int) -> None:
    rng = np.random.default_rng(1)
    n_edges, n_cells, steps = 20, 400, 500
    u0 = rng.standard_normal((n_edges, n_cells + 1))
    coupling = np.eye(n_edges)[:, np.roll(np.arange(n_edges), 1)]
    nu = np.full(n_edges, 0.9)
    dtq = np.full((n_edges, n_cells + 1), -1e-3)

    jit = lambda: K._upwind_sweep_jit(u0.copy(), coupling, nu, dtq, steps)
    fallback = lambda: K._upwind_sweep_numpy(u0.copy(), coupling, nu, dtq,
                                             steps)
    row("upwind sweep", f"20x400, {steps} steps",
        best_time(jit, repeat), best_time(fallback, repeat))


def bench_trace(repeat: int) -> None:
    n_edges, n_cells, t = 6, 800, 4.0
    edges = [(j, (j + 1) % n_edges) for j in range(n_edges)]
    net = make_network(n_edges, edges, velocities=[1.0] * n_edges,
                       n_cells=n_cells)
    build_adjacency(net)
    bc = weighted_bc(net)
    x = net.grid.nodes
    vals = np.stack([np.sin(np.pi * x) ** 2 * (j + 1.0)
                     for j in range(n_edges)])
    qcum = np.zeros_like(vals)
    h = net.grid.h
    cap = int(np.ceil(t * np.max(net.velocities))) + 2

    indptr = np.zeros(n_edges + 1, dtype=np.int64)
    cols, data = [], []
    for j in range(n_edges):
        nz = np.nonzero(bc[j])[0]
        indptr[j + 1] = indptr[j] + nz.size
        cols.extend(nz.tolist())
        data.extend(bc[j, nz].tolist())
    colind = np.asarray(cols, dtype=np.int64)
    bw = np.asarray(data, dtype=np.float64)

    jit = lambda: K._trace_transport_jit(vals, indptr, colind, bw,
                                         net.velocities, qcum, h, t, cap)
    py = lambda: K._trace_transport_py(vals, indptr, colind, bw,
                                       net.velocities, qcum, h, t, cap)
    row("characteristic tracing", f"6x800, t={t}",
        best_time(jit, repeat), best_time(py, repeat))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions; the best time is reported")
    args = parser.parse_args(argv)

    if not K.NUMBA_ENABLED:
        print("numba is disabled (SEMIFLOW_NO_NUMBA set or numba missing); "
              "nothing to compare — unset the flag to benchmark both paths")
        return 1

    K.warmup()
    print(f"{'kernel':<34} {'size':<18} {'numba ms':>10} {'fallback':>10} "
          f"{'speedup':>9}")
    bench_damped_cumsum(args.repeat)
    bench_upwind(args.repeat)
    bench_trace(args.repeat)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
