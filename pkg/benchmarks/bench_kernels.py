"""Time the numba kernels against their pure-numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each kernel is called once before timing so numba compilation is excluded.
The two backends must agree on every workload; a mismatch aborts the run.
"""
from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from laurentlab._kernels import numba_backend, numpy_backend


def workloads(rng):
    theta = np.linspace(0, 2 * np.pi, 1 << 16, endpoint=False)
    m = 1024
    values = rng.normal(size=(8, m)) + 1j * rng.normal(size=(8, m))
    kernel = numpy_backend.fejer_factor(64, 2 * np.pi * np.arange(m) / m)
    B = 16
    exps = np.array([(a, b) for a in range(-B, B + 1) for b in range(-B, B + 1)], dtype=np.int64)
    coeffs = rng.normal(size=exps.shape[0]) + 0j
    shells = np.max(np.abs(exps), axis=1)
    z = 0.5 + 0.3 * (rng.random((2000, 2)) + 1j * rng.random((2000, 2)))
    pts = rng.normal(size=(200_000, 2))
    normals = rng.normal(size=(64, 2))
    offsets = rng.random(64)
    hull_pts = rng.normal(size=(20_000, 2))
    q = rng.normal(size=(5000, 3, 16)) + 1j * rng.normal(size=(5000, 3, 16))
    edges = rng.normal(size=(5000, 3)) + 1j * rng.normal(size=(5000, 3))
    w = np.polynomial.legendre.leggauss(16)[1]
    return {
        "fejer_factor": ("fejer_factor", (64, theta)),
        "circular_convolve": ("circular_convolve", (values, kernel)),
        "series_shells": ("series_shells", (exps, coeffs, shells, B + 1, z)),
        "polytope_slack": ("polytope_slack", (pts, normals, offsets)),
        "monotone_chain": ("monotone_chain", (hull_pts,)),
        "edge_quadrature": ("edge_quadrature", (q, edges, w)),
    }


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype.kind in "iu":
        return np.array_equal(a, b)
    return bool(np.allclose(a, b, rtol=1e-10, atol=1e-10 * max(1.0, float(np.max(np.abs(a))))))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="also write the timings here")
    args = parser.parse_args(argv)
    if numba_backend is None:
        print("numba is not importable; nothing to compare")
        return 1
    rng = np.random.default_rng(0)
    rows = []
    print(f"{'kernel':<20}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, (fn, call_args) in workloads(rng).items():
        ref = getattr(numpy_backend, fn)(*call_args)
        fast = getattr(numba_backend, fn)(*call_args)
        if not same(ref, fast):
            raise SystemExit(f"{name}: backends disagree")
        t_np = min(timeit.repeat(lambda: getattr(numpy_backend, fn)(*call_args), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: getattr(numba_backend, fn)(*call_args), number=1, repeat=args.repeat))
        rows.append({"kernel": name, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})
        print(f"{name:<20}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
