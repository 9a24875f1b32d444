"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--n 12]

Both backends receive the same pre-drawn inputs; the script also checks that
their outputs agree before timing them.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from qselect import _pykernels

try:
    from qselect import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases(n: int, rng: np.random.Generator) -> dict:
    Q = np.triu(rng.uniform(-5, 5, (n, n)), 1)
    Q = Q + Q.T
    a = rng.uniform(-5, 5, n)
    sweeps, P = 200, 20
    amps = rng.normal(size=1 << 16) + 1j * rng.normal(size=1 << 16)
    amps /= np.linalg.norm(amps)
    return {
        "enumerate_candidates": lambda k: k.enumerate_candidates(Q, a, 1e-9),
        "anneal_sa": lambda k: k.anneal_sa(
            Q, a, rng_fixed(n), np.geomspace(0.1, 50, sweeps), np.random.default_rng(1).random((sweeps, n))),
        "anneal_sqa": lambda k: k.anneal_sqa(
            Q, a, np.random.default_rng(2).integers(0, 2, (P, n)).astype(np.int8), 0.5,
            np.linspace(2.0, 0.1, sweeps), np.random.default_rng(3).random((sweeps, P, n))),
        "ry_layer (16 qubits)": lambda k: k.ry_layer(amps.copy(), 16, np.linspace(0, 1, 16)),
        "cx_chain (16 qubits)": lambda k: k.cx_chain(amps.copy(), 16),
    }


def rng_fixed(n):
    return np.random.default_rng(0).integers(0, 2, n).astype(np.int8)


def same(x, y) -> bool:
    if isinstance(x, tuple):
        return all(same(a, b) for a, b in zip(x, y))
    x, y = np.asarray(x), np.asarray(y)
    if x.dtype.kind in "fc":
        # running energies are accumulated in a different order
        return np.allclose(x, y, rtol=0, atol=1e-9)
    return np.array_equal(x, y)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=12, help="QUBO size for the annealing and enumeration kernels")
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not available; run `pip install -e . --no-build-isolation` first")
        return
    table = cases(args.n, np.random.default_rng(0))
    print(f"{'kernel':<24}{'python ms':>12}{'cython ms':>12}{'speedup':>10}  agree")
    for name, fn in table.items():
        agree = same(fn(_pykernels), fn(_ckernels))
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<24}{t_py:>12.2f}{t_c:>12.2f}{t_py / t_c:>9.1f}x  {agree}")


if __name__ == "__main__":
    main()
