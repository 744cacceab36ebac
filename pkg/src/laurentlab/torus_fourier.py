"""Fourier projections, square partial sums and Fejér means on polytori.

Everything is sampled on the uniform grid of m points per circle, so the
Haar integral over the torus becomes the trapezoid rule, which the FFT
evaluates exactly for trigonometric polynomials of degree below m/2.
"""
from __future__ import annotations

import io
import itertools
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.fft as sfft

from . import _kernels

BLOCK = 8192
PRECISIONS = {"double": np.complex128, "extended": np.clongdouble}


class AliasingError(ValueError):
    pass


class AliasingWarning(UserWarning):
    pass


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class TorusGrid:
    n: int
    m: int
    radii: tuple[float, ...]
    precision: str = "double"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.m < 4 or self.m & (self.m - 1):
            raise ValueError(f"points per circle must be a power of two >= 4, got {self.m}")
        radii = tuple(float(r) for r in np.broadcast_to(np.asarray(self.radii, dtype=float), (self.n,)))
        if not all(r > 0 and math.isfinite(r) for r in radii):
            raise ValueError("torus radii must be positive")
        object.__setattr__(self, "radii", radii)
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {sorted(PRECISIONS)}")

    @property
    def dtype(self):
        return PRECISIONS[self.precision]

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.m,) * self.n

    def roots(self) -> np.ndarray:
        """The m-th roots of unity e^{2 pi i k/m}, k = 0..m-1."""
        real = np.longdouble if self.precision == "extended" else np.float64
        k = np.arange(self.m).astype(real)
        theta = 2 * np.arccos(real(-1)) * k / real(self.m)
        return (np.cos(theta) + 1j * np.sin(theta)).astype(self.dtype)

    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.m) / self.m

    def nodes(self) -> tuple[np.ndarray, ...]:
        """Node coordinates z_j = r_j e^{2 pi i k_j/m} on the full tensor grid."""
        roots = self.roots()
        real = np.longdouble if self.precision == "extended" else np.float64
        axes = [real(r) * roots for r in self.radii]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def frequencies(self) -> tuple[np.ndarray, ...]:
        """Integer frequency of every DFT slot along each axis."""
        f = np.fft.fftfreq(self.m, 1.0 / self.m).astype(np.int64)
        return tuple(np.meshgrid(*([f] * self.n), indexing="ij"))

    def with_radii(self, radii) -> "TorusGrid":
        return TorusGrid(self.n, self.m, tuple(np.broadcast_to(radii, (self.n,))), self.precision)

    def describe(self) -> dict:
        return {"n": self.n, "m": self.m, "radii": list(self.radii), "precision": self.precision}


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != self.grid.shape:
            raise ValueError(f"expected values of shape {self.grid.shape}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise EvaluationError("grid function has non-finite values")
        object.__setattr__(self, "values", v)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def coefficients(self) -> np.ndarray:
        """Normalized DFT: slot k holds the angular Fourier coefficient c_k."""
        return sfft.fftn(self.values) / self.values.size

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "GridFunction":
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class FourierComponent:
    alpha: tuple[int, ...]
    coefficient: complex
    values: GridFunction
    equivariance_residual: float = field(default=0.0)


# -- sampling -------------------------------------------------------------


def sample(f: Callable, grid: TorusGrid, threads: int = 1) -> GridFunction:
    """Evaluate ``f(z1, ..., zn)`` on every node of the grid.

    The node list is cut into fixed blocks regardless of ``threads`` so the
    values are identical for any worker count.
    """
    if isinstance(f, GridFunction):
        if f.grid.shape != grid.shape:
            raise ValueError("grid function lives on a different grid")
        return f
    coords = [c.ravel() for c in grid.nodes()]
    total = coords[0].shape[0]
    starts = list(range(0, total, BLOCK))

    def block(s):
        return np.asarray(f(*[c[s : s + BLOCK] for c in coords]))

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(s) for s in starts]
    values = np.concatenate([np.broadcast_to(p, (min(BLOCK, total - s),)) for p, s in zip(parts, starts)])
    bad = ~np.isfinite(values)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        where = np.unravel_index(k, grid.shape)
        raise EvaluationError(f"function not finite at grid node {tuple(int(i) for i in where)}")
    return GridFunction(grid, values.reshape(grid.shape).astype(grid.dtype, copy=False))


def check_alias(alpha: Sequence[int], m: int) -> None:
    top = max((abs(int(a)) for a in alpha), default=0)
    if 2 * top >= m:
        raise AliasingError(f"|alpha_j| = {top} needs more than {2 * top} points per circle, have {m}")
    if 4 * top >= m:
        warnings.warn(
            f"|alpha_j| = {top} is within a factor two of the alias limit m/2 = {m // 2}",
            AliasingWarning,
            stacklevel=3,
        )


def _slot(alpha: Sequence[int], m: int) -> tuple[int, ...]:
    return tuple(int(a) % m for a in alpha)


def mode(grid: TorusGrid, alpha: Sequence[int]) -> np.ndarray:
    """lambda^alpha on the grid nodes (unit-modulus characters)."""
    roots = grid.roots()
    out = np.ones(grid.shape, dtype=grid.dtype)
    for j, a in enumerate(alpha):
        shape = [1] * grid.n
        shape[j] = grid.m
        out = out * roots[(int(a) * np.arange(grid.m)) % grid.m].reshape(shape)
    return out


def equivariance_residual(g: GridFunction, alpha: Sequence[int]) -> float:
    """max over axes of |g(mu z) - mu^alpha_j g(z)| for the one-step rotation mu."""
    m = g.grid.m
    roots = g.grid.roots()
    worst = 0.0
    for j, a in enumerate(alpha):
        shifted = np.roll(g.values, -1, axis=j)
        worst = max(worst, float(np.max(np.abs(shifted - roots[int(a) % m] * g.values))))
    return worst


# -- projections ----------------------------------------------------------


def fourier_component(f, alpha: Sequence[int], grid: TorusGrid, threads: int = 1) -> FourierComponent:
    """The torus average of lambda^{-alpha} f(lambda z), sampled on the grid."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != grid.n:
        raise ValueError("multi-index length must equal the grid dimension")
    check_alias(alpha, grid.m)
    g = sample(f, grid, threads)
    c = g.coefficients()[_slot(alpha, grid.m)]
    values = GridFunction(grid, c * mode(grid, alpha))
    return FourierComponent(alpha, complex(c), values, equivariance_residual(values, alpha))


def square_partial_sum(f, k: int, grid: TorusGrid, threads: int = 1) -> GridFunction:
    """Sum of the Fourier components with |alpha|_inf <= k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    check_alias((k,), grid.m)
    g = sample(f, grid, threads)
    box = np.max(np.abs(np.stack(grid.frequencies())), axis=0)
    spectrum = sfft.fftn(g.values)
    spectrum[box > k] = 0
    return GridFunction(grid, sfft.ifftn(spectrum))


def _dirichlet(k: int, theta: np.ndarray) -> np.ndarray:
    out = np.ones_like(theta)
    for a in range(1, k + 1):
        out = out + 2.0 * np.cos(a * theta)
    return out


def fejer_kernel(N: int, theta) -> np.ndarray | float:
    """Product of normalized one-dimensional Fejér kernels.

    ``theta`` is a scalar (n = 1) or an array whose last axis holds the n
    angles. Each factor is sin^2((N+1)t/2) / ((N+1) sin^2(t/2)), with the
    value N+1 at t = 0.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim == 0:
        return float(_kernels.fejer_factor(N, theta))
    out = np.prod(_kernels.fejer_factor(N, theta), axis=-1)
    return float(out) if out.ndim == 0 else out


def square_cesaro_kernel(N: int, theta) -> np.ndarray:
    """Kernel of the Cesàro means of square partial sums.

    (1/(N+1)) sum_k prod_j D_k(theta_j) with D_k the Dirichlet kernel, summed
    directly. In one variable this is the Fejér kernel; for n >= 2 it is
    not a product and takes negative values.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    if theta.ndim == 1:
        theta = theta[:, None]
    total = np.zeros(theta.shape[:-1])
    for k in range(N + 1):
        total += np.prod(_dirichlet(k, theta), axis=-1)
    return total / (N + 1)


def cesaro_weights(N: int, grid: TorusGrid) -> np.ndarray:
    box = np.max(np.abs(np.stack(grid.frequencies())), axis=0)
    return np.clip(1.0 - box / (N + 1.0), 0.0, None)


def cesaro_fejer_sum(f, N: int, grid: TorusGrid, method: str = "spectral", threads: int = 1) -> GridFunction:
    """C_N f = (1/(N+1)) sum_{k<=N} S_k f on the grid.

    ``method="spectral"`` weights the DFT by (1 - |alpha|_inf/(N+1))_+;
    ``method="convolution"`` convolves the samples with the kernel in
    physical space (one Fejér convolution per axis when n = 1, a sum of
    separable Dirichlet convolutions otherwise).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    check_alias((N,), grid.m)
    g = sample(f, grid, threads)
    if method == "spectral":
        spectrum = sfft.fftn(g.values) * cesaro_weights(N, grid)
        return GridFunction(grid, sfft.ifftn(spectrum))
    if method != "convolution":
        raise ValueError("method must be 'spectral' or 'convolution'")
    theta = grid.angles()
    values = np.asarray(g.values, dtype=np.complex128)
    if grid.n == 1:
        return GridFunction(grid, _kernels.circular_convolve(values, _kernels.fejer_factor(N, theta)))
    total = np.zeros_like(values)
    for k in range(N + 1):
        dk = _dirichlet(k, theta)
        acc = values
        for axis in range(grid.n):
            acc = np.moveaxis(_kernels.circular_convolve(np.moveaxis(acc, axis, -1), dk), -1, axis)
        total += acc
    return GridFunction(grid, total / (N + 1))


def cesaro_means(sequence) -> list:
    """C_n = (S_0 + ... + S_n)/(n+1)."""
    s = np.asarray(list(sequence))
    if s.size == 0:
        raise ValueError("sequence must be nonempty")
    means = np.cumsum(s) / np.arange(1, s.size + 1)
    return means.tolist()


# -- Cauchy inequalities --------------------------------------------------


@dataclass
class CauchyReport:
    max_violation: float
    violations: int
    worst_alpha: tuple[int, ...]
    worst_radii: tuple[float, ...]
    rows: list[dict]


def cauchy_inequality_check(
    f,
    alpha_box: int,
    grid_m: int,
    radii_subset: Sequence,
    n: int = 1,
    eps: float = 1e-10,
    threads: int = 1,
) -> CauchyReport:
    """Check sup|pi_alpha f| <= sup|f| on each tested torus, for |alpha_j| <= alpha_box.

    Sups are taken over grid nodes only.
    """
    check_alias((alpha_box,), grid_m)
    rows = []
    worst = (-np.inf, (0,) * n, (0.0,) * n)
    count = 0
    for r in radii_subset:
        grid = TorusGrid(n, grid_m, tuple(np.broadcast_to(r, (n,))))
        g = sample(f, grid, threads)
        p_f = g.sup()
        coeffs = np.abs(g.coefficients())
        for alpha in itertools.product(range(-alpha_box, alpha_box + 1), repeat=n):
            p_component = float(coeffs[_slot(alpha, grid_m)])
            excess = p_component - p_f
            if excess > eps:
                count += 1
            if excess > worst[0]:
                worst = (excess, alpha, grid.radii)
            rows.append(
                {"radii": list(grid.radii), "alpha": list(alpha), "p_component": p_component, "p_f": p_f}
            )
    return CauchyReport(float(worst[0]), count, tuple(worst[1]), tuple(worst[2]), rows)


# -- export ---------------------------------------------------------------


def grid_function_to_csv(g: GridFunction, fh) -> None:
    """Rows ``k1,...,kn,re,im`` after a ``#``-comment carrying the grid."""
    fh.write("# " + json.dumps(g.grid.describe()) + "\n")
    fh.write(",".join([f"k{j + 1}" for j in range(g.grid.n)] + ["re", "im"]) + "\n")
    for idx in np.ndindex(*g.grid.shape):
        v = complex(g.values[idx])
        fh.write(",".join([str(i) for i in idx] + [repr(v.real), repr(v.imag)]) + "\n")


def grid_function_from_csv(fh) -> GridFunction:
    header = fh.readline()
    if not header.startswith("# "):
        raise ValueError("missing grid header")
    meta = json.loads(header[2:])
    grid = TorusGrid(meta["n"], meta["m"], tuple(meta["radii"]), meta.get("precision", "double"))
    fh.readline()
    values = np.zeros(grid.shape, dtype=np.complex128)
    for line in fh:
        parts = line.strip().split(",")
        if len(parts) < grid.n + 2:
            continue
        idx = tuple(int(p) for p in parts[: grid.n])
        values[idx] = complex(float(parts[grid.n]), float(parts[grid.n + 1]))
    return GridFunction(grid, values)


def save_grid_function(g: GridFunction, path) -> None:
    np.savez(path, values=np.asarray(g.values, dtype=np.complex128), meta=json.dumps(g.grid.describe()))


def load_grid_function(path) -> GridFunction:
    with np.load(path) as data:
        meta = json.loads(str(data["meta"]))
        values = data["values"]
    grid = TorusGrid(meta["n"], meta["m"], tuple(meta["radii"]))
    return GridFunction(grid, values)


def fejer_table_csv(orders: Sequence[int], m: int, fh) -> None:
    theta = 2 * np.pi * np.arange(m) / m
    fh.write(",".join(["theta"] + [f"F_{N}" for N in orders]) + "\n")
    cols = [_kernels.fejer_factor(N, theta) for N in orders]
    for i, t in enumerate(theta):
        fh.write(",".join([repr(float(t))] + [repr(float(c[i])) for c in cols]) + "\n")


def to_csv_string(writer, *args) -> str:
    buf = io.StringIO()
    writer(*args, buf)
    return buf.getvalue()
