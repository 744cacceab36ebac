"""Pure-numpy reference versions of the hot loops.

Every function here has a twin of the same name and signature in
``_numba.py``; the two are checked against each other in the test suite.
"""
from __future__ import annotations

import numpy as np

FEJER_SINGULAR_EPS = 1e-8


def fejer_factor(N, theta):
    """Normalized 1-D Fejér kernel sin^2((N+1)t/2) / ((N+1) sin^2(t/2))."""
    theta = np.asarray(theta, dtype=np.float64)
    t = np.remainder(theta, 2.0 * np.pi)
    t = np.where(t > np.pi, t - 2.0 * np.pi, t)
    small = np.abs(t) < FEJER_SINGULAR_EPS
    s = np.sin(0.5 * t)
    safe = np.where(small, 1.0, s)
    val = np.sin(0.5 * (N + 1) * t) ** 2 / (safe * safe) / (N + 1)
    return np.where(small, float(N + 1), val)


def circular_convolve(values, kernel):
    """out[k] = (1/m) sum_j kernel[j] * values[(k + j) mod m] along the last axis."""
    values = np.asarray(values, dtype=np.complex128)
    kernel = np.asarray(kernel, dtype=np.float64)
    m = kernel.shape[0]
    # circulant[j', k] = kernel[(j' - k) mod m]
    circulant = kernel[(np.arange(m)[:, None] - np.arange(m)[None, :]) % m]
    return (values @ circulant) / m


def ipow(z, e):
    """Integer power by square-and-multiply (negative powers invert first)."""
    if e < 0:
        z = 1.0 / z
        e = -e
    result = np.ones_like(z)
    base = z
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def series_shells(exponents, coeffs, shell_ids, n_shells, z):
    """Evaluate a Laurent polynomial at points ``z`` (P x n).

    Returns ``(values, shell_abs)`` where ``shell_abs[p, s]`` is the sum of
    |a_alpha z^alpha| over the terms of shell ``s``. Terms are accumulated in
    the stored order, shell by shell, so the result does not depend on how
    the caller batches points.
    """
    z = np.asarray(z, dtype=np.complex128)
    P = z.shape[0]
    values = np.zeros(P, dtype=np.complex128)
    shell_abs = np.zeros((P, n_shells), dtype=np.float64)
    shell_val = np.zeros((P, n_shells), dtype=np.complex128)
    for t in range(exponents.shape[0]):
        term = np.full(P, coeffs[t], dtype=np.complex128)
        for j in range(exponents.shape[1]):
            e = exponents[t, j]
            if e != 0:
                term = term * ipow(z[:, j], int(e))
        s = shell_ids[t]
        shell_val[:, s] += term
        shell_abs[:, s] += np.abs(term)
    for s in range(n_shells):
        values += shell_val[:, s]
    return values, shell_abs


def polytope_slack(points, normals, offsets):
    """max_i (normals[i] . x - offsets[i]) for each row x of ``points``."""
    points = np.asarray(points, dtype=np.float64)
    if normals.shape[0] == 0:
        return np.full(points.shape[0], -np.inf)
    return np.max(points @ normals.T - offsets[None, :], axis=1)


def monotone_chain(points):
    """Indices of the 2-D convex hull vertices, counterclockwise.

    Collinear boundary points are dropped; duplicates are expected to have
    been removed by the caller.
    """
    pts = np.asarray(points, dtype=np.float64)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    if order.shape[0] <= 2:
        return order.astype(np.int64)

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (
            pts[a, 1] - pts[o, 1]
        ) * (pts[b, 0] - pts[o, 0])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0.0:
            lower.pop()
        lower.append(int(i))
    upper: list[int] = []
    for i in order[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0.0:
            upper.pop()
        upper.append(int(i))
    hull = lower[:-1] + upper[:-1]
    return np.array(hull, dtype=np.int64)


def edge_quadrature(values, edges, weights):
    """sum over edges of edge * sum_q weights[q] * values[..., e, q]."""
    return np.sum(edges * (values @ weights), axis=-1)
