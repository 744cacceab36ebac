from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from laurentlab import _kernels
from laurentlab._kernels import numba_backend as nb
from laurentlab._kernels import numpy_backend as npb

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def test_backend_flag_respected(monkeypatch):
    monkeypatch.setenv("LAURENTLAB_DISABLE_NUMBA", "1")
    assert not _kernels._wants_numba()
    monkeypatch.setenv("LAURENTLAB_DISABLE_NUMBA", "0")
    assert _kernels._wants_numba()
    monkeypatch.delenv("LAURENTLAB_DISABLE_NUMBA")
    assert _kernels._wants_numba()


@given(st.integers(0, 40), arrays(np.float64, st.integers(1, 30), elements=finite))
def test_fejer_factor_parity(N, theta):
    np.testing.assert_allclose(nb.fejer_factor(N, theta), npb.fejer_factor(N, theta), rtol=1e-12, atol=1e-12)


def test_fejer_factor_limit_and_values():
    assert npb.fejer_factor(4, 0.0) == 5.0
    assert nb.fejer_factor(4, np.array([2 * np.pi]))[0] == 5.0
    # sin^2(5t/2) / (5 sin^2(t/2)) at t = pi/2
    t = np.pi / 2
    expected = np.sin(2.5 * t) ** 2 / (5 * np.sin(t / 2) ** 2)
    assert npb.fejer_factor(4, t) == pytest.approx(expected, rel=1e-14)


@given(st.integers(1, 5), st.integers(2, 24), st.integers(0, 2**31))
def test_circular_convolve_parity(rows, m, seed):
    r = np.random.default_rng(seed)
    v = r.normal(size=(rows, m)) + 1j * r.normal(size=(rows, m))
    k = r.normal(size=m)
    np.testing.assert_allclose(nb.circular_convolve(v, k), npb.circular_convolve(v, k), atol=1e-12)


def test_circular_convolve_definition(rng):
    m = 8
    v = rng.normal(size=m) + 1j * rng.normal(size=m)
    k = rng.normal(size=m)
    direct = np.array([sum(k[j] * v[(i + j) % m] for j in range(m)) / m for i in range(m)])
    np.testing.assert_allclose(npb.circular_convolve(v, k), direct, atol=1e-14)


@given(st.integers(0, 2**31))
def test_series_shells_parity(seed):
    r = np.random.default_rng(seed)
    T, n, P = 12, 2, 5
    exps = r.integers(-4, 5, size=(T, n))
    coeffs = r.normal(size=T) + 1j * r.normal(size=T)
    shells = np.max(np.abs(exps), axis=1)
    z = (0.5 + r.random((P, n))) * np.exp(2j * np.pi * r.random((P, n)))
    v1, a1 = nb.series_shells(exps, coeffs, shells, 5, z)
    v2, a2 = npb.series_shells(exps, coeffs, shells, 5, z)
    np.testing.assert_allclose(v1, v2, rtol=1e-13)
    np.testing.assert_allclose(a1, a2, rtol=1e-13)
    direct = np.array([np.sum(coeffs * np.prod(zp[None, :] ** exps.astype(float), axis=1)) for zp in z])
    np.testing.assert_allclose(v2, direct, rtol=1e-12)


@given(st.integers(0, 2**31), st.integers(1, 3))
def test_polytope_slack_parity(seed, n):
    r = np.random.default_rng(seed)
    pts = r.normal(size=(7, n))
    normals = r.normal(size=(4, n))
    offsets = r.normal(size=4)
    np.testing.assert_allclose(nb.polytope_slack(pts, normals, offsets), npb.polytope_slack(pts, normals, offsets))


@given(st.integers(0, 2**31), st.integers(3, 40))
def test_monotone_chain_parity_and_scipy(seed, count):
    from scipy.spatial import ConvexHull

    r = np.random.default_rng(seed)
    pts = np.unique(r.normal(size=(count, 2)), axis=0)
    a, b = nb.monotone_chain(pts), npb.monotone_chain(pts)
    np.testing.assert_array_equal(a, b)
    assert set(b.tolist()) == set(ConvexHull(pts).vertices.tolist())


def test_monotone_chain_drops_collinear():
    pts = np.array([[0, 0], [1, 0], [2, 0], [2, 2], [0, 2], [1, 1]], dtype=float)
    assert sorted(npb.monotone_chain(pts).tolist()) == [0, 2, 3, 4]
    assert sorted(nb.monotone_chain(pts).tolist()) == [0, 2, 3, 4]


def test_edge_quadrature_parity(rng):
    vals = rng.normal(size=(3, 6, 16)) + 0j
    edges = rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))
    w = rng.random(16)
    np.testing.assert_allclose(nb.edge_quadrature(vals, edges, w), npb.edge_quadrature(vals, edges, w))
