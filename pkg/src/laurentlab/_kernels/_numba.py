"""numba-compiled versions of the kernels in ``_numpy.py``."""
from __future__ import annotations

import math

import numpy as np
from numba import njit

FEJER_SINGULAR_EPS = 1e-8


@njit(cache=True)
def _fejer_scalar(N, t):
    t = t % (2.0 * math.pi)
    if t > math.pi:
        t -= 2.0 * math.pi
    if abs(t) < FEJER_SINGULAR_EPS:
        return float(N + 1)
    s = math.sin(0.5 * t)
    return math.sin(0.5 * (N + 1) * t) ** 2 / (s * s) / (N + 1)


@njit(cache=True)
def _fejer_flat(N, theta):
    out = np.empty(theta.shape[0])
    for i in range(theta.shape[0]):
        out[i] = _fejer_scalar(N, theta[i])
    return out


def fejer_factor(N, theta):
    theta = np.asarray(theta, dtype=np.float64)
    return _fejer_flat(int(N), np.ascontiguousarray(theta).ravel()).reshape(theta.shape)


@njit(cache=True)
def _convolve_rows(values, kernel):
    rows, m = values.shape
    out = np.empty((rows, m), dtype=np.complex128)
    for r in range(rows):
        for k in range(m):
            acc = 0.0 + 0.0j
            # values[(k + j) mod m] without the modulo
            for j in range(m - k):
                acc += kernel[j] * values[r, k + j]
            for j in range(m - k, m):
                acc += kernel[j] * values[r, k + j - m]
            out[r, k] = acc / m
    return out


def circular_convolve(values, kernel):
    values = np.asarray(values, dtype=np.complex128)
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    shape = values.shape
    flat = np.ascontiguousarray(values.reshape(-1, shape[-1]))
    return _convolve_rows(flat, kernel).reshape(shape)


@njit(cache=True)
def _ipow(z, e):
    if e < 0:
        z = 1.0 / z
        e = -e
    result = 1.0 + 0.0j
    base = z
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


@njit(cache=True)
def _series_shells(exponents, coeffs, shell_ids, n_shells, z):
    P = z.shape[0]
    T, n = exponents.shape
    values = np.zeros(P, dtype=np.complex128)
    shell_abs = np.zeros((P, n_shells))
    shell_val = np.zeros((P, n_shells), dtype=np.complex128)
    top = 0
    for t in range(T):
        for j in range(n):
            top = max(top, abs(exponents[t, j]))
    # powers[j, e + top] = z_j^e, computed exactly as the numpy path does
    powers = np.empty((n, 2 * top + 1), dtype=np.complex128)
    for p in range(P):
        for j in range(n):
            for e in range(-top, top + 1):
                if e > 0 or (e < 0 and z[p, j] != 0):
                    powers[j, e + top] = _ipow(z[p, j], e)
                elif e < 0:
                    # callers reject negative powers at zero; keep the slot defined
                    powers[j, e + top] = complex(np.nan, np.nan)
        for t in range(T):
            term = coeffs[t]
            for j in range(n):
                e = exponents[t, j]
                if e != 0:
                    term = term * powers[j, e + top]
            s = shell_ids[t]
            shell_val[p, s] += term
            shell_abs[p, s] += abs(term)
        acc = 0.0 + 0.0j
        for s in range(n_shells):
            acc += shell_val[p, s]
        values[p] = acc
    return values, shell_abs


def series_shells(exponents, coeffs, shell_ids, n_shells, z):
    return _series_shells(
        np.ascontiguousarray(exponents, dtype=np.int64),
        np.ascontiguousarray(coeffs, dtype=np.complex128),
        np.ascontiguousarray(shell_ids, dtype=np.int64),
        int(n_shells),
        np.ascontiguousarray(z, dtype=np.complex128),
    )


@njit(cache=True)
def _polytope_slack(points, normals, offsets):
    P = points.shape[0]
    F, n = normals.shape
    out = np.full(P, -np.inf)
    for p in range(P):
        for f in range(F):
            acc = 0.0
            for j in range(n):
                acc += normals[f, j] * points[p, j]
            acc -= offsets[f]
            if acc > out[p]:
                out[p] = acc
    return out


def polytope_slack(points, normals, offsets):
    return _polytope_slack(
        np.ascontiguousarray(points, dtype=np.float64),
        np.ascontiguousarray(normals, dtype=np.float64),
        np.ascontiguousarray(offsets, dtype=np.float64),
    )


@njit(cache=True)
def _cross(pts, o, a, b):
    return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (
        pts[a, 1] - pts[o, 1]
    ) * (pts[b, 0] - pts[o, 0])


@njit(cache=True)
def _chain(pts, order):
    k = order.shape[0]
    hull = np.empty(2 * k, dtype=np.int64)
    h = 0
    for i in order:
        while h >= 2 and _cross(pts, hull[h - 2], hull[h - 1], i) <= 0.0:
            h -= 1
        hull[h] = i
        h += 1
    t = h + 1
    for idx in range(k - 2, -1, -1):
        i = order[idx]
        while h >= t and _cross(pts, hull[h - 2], hull[h - 1], i) <= 0.0:
            h -= 1
        hull[h] = i
        h += 1
    # the chain closes on the leftmost point; drop the repeat
    return hull[: h - 1].copy()


def monotone_chain(points):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    order = np.lexsort((pts[:, 1], pts[:, 0])).astype(np.int64)
    if order.shape[0] <= 2:
        return order
    return _chain(pts, order)


def edge_quadrature(values, edges, weights):
    # a batched dot product; numpy's BLAS path is already the fast one
    return np.sum(edges * (values @ weights), axis=-1)
