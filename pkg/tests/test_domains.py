from __future__ import annotations

import io
import itertools
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from laurentlab.domains import (
    DomainError,
    Piece,
    chebyshev_center,
    contains,
    domain_from_dsl,
    domain_from_points,
    envelope,
    extraction_radii,
    load_domain,
    log_convex_hull,
    log_map,
    monomial_hull_membership,
    relative_completion,
    same_hull,
    sample_interior,
    shadow_to_csv,
    smooth_monomial_set,
)

FIXTURES = [
    "unit_disc",
    "punctured_disc",
    "annulus",
    "unit_bidisc",
    "bidisc_minus_axis",
    "hartogs_triangle",
    "hartogs_figure",
    "l_shape",
]


# -- log map ------------------------------------------------------------------


def test_log_map_examples():
    np.testing.assert_array_equal(log_map([1, 1]), [0.0, 0.0])
    np.testing.assert_allclose(log_map([math.e, math.exp(-2)]), [1.0, -2.0], atol=1e-15)
    np.testing.assert_allclose(log_map([0.9, 0.2]), [-0.10536051565782628, -1.6094379124341003], atol=1e-9)


def test_log_map_rejects_axis():
    with pytest.raises(DomainError):
        log_map([0.5, 0.0])


# -- hulls --------------------------------------------------------------------


def test_hull_single_point():
    d = domain_from_points([[0.3, -1.0]])
    np.testing.assert_array_equal(log_convex_hull(d.shadow).hull_vertices, [[0.3, -1.0]])


def test_hull_square_drops_interior_point():
    pts = [[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5]]
    hull = log_convex_hull(domain_from_points(pts).shadow)
    assert sorted(map(tuple, hull.hull_vertices.tolist())) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_hull_deduplicates_points():
    pts = [[0, 0], [0, 0], [1, 0], [0, 1]]
    assert domain_from_points(pts).shadow.points.shape[0] == 3


def test_l_shape_hull_contains_outer_midpoint():
    hull = log_convex_hull(load_domain("l_shape").shadow)
    a, b = np.array([math.log(0.9), math.log(0.2)]), np.array([math.log(0.2), math.log(0.9)])
    mid = (a + b) / 2
    np.testing.assert_allclose(mid, [-0.857, -0.857], atol=1e-3)
    # the midpoint sits on the new hull edge, so it is in the closed hull
    assert hull.slack(mid)[0] <= 1e-9
    assert hull.slack(mid - 0.01)[0] < 0
    # the original union misses it
    assert not contains(load_domain("l_shape"), np.exp(mid - 0.01).astype(complex))


def test_hull_3d():
    cube = np.array(list(itertools.product([0.0, -1.0], repeat=3)))
    pts = np.vstack([cube, [[-0.5, -0.5, -0.5]]])
    hull = log_convex_hull(domain_from_points(pts).shadow)
    assert hull.hull_vertices.shape == (8, 3)


def test_hull_degenerate_3d_coplanar():
    pts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0.5, 0.5, 0]], dtype=float)
    hull = log_convex_hull(domain_from_points(pts).shadow)
    assert hull.hull_vertices.shape[0] == 4


@given(st.integers(0, 2**31), st.integers(1, 3))
def test_hull_idempotent_and_covers_points(seed, n):
    r = np.random.default_rng(seed)
    pts = r.normal(size=(12, n))
    d = domain_from_points(pts)
    h1 = log_convex_hull(d.shadow)
    h2 = log_convex_hull(replace(h1, points=h1.hull_vertices))
    assert same_hull(h1, h2)
    if h1.facets is not None:
        assert np.all(h1.slack(pts) <= 1e-9)


# -- completion and envelope ----------------------------------------------------


def test_relative_completion_annulus_unchanged():
    d = load_domain("annulus")
    assert relative_completion(d) is d


def test_relative_completion_triangle_unchanged():
    d = load_domain("hartogs_triangle")
    assert d.axis_flags == (True, False)
    assert relative_completion(d) is d


def test_relative_completion_bidisc_minus_axis_honoured():
    d = load_domain("bidisc_minus_axis")
    assert not contains(d, [0.0, 0.5])
    flagged = replace(d, axis_flags=(True, True))
    full = envelope(flagged)
    assert full.shadow.recession_directions == frozenset({0, 1})
    np.testing.assert_allclose(full.shadow.hull_vertices, [[0.0, 0.0]], atol=1e-12)
    assert contains(full, [0.0, 0.5]) and contains(full, [0.0, 0.0])
    assert not contains(full, [1.01, 0.5])


def test_envelope_of_hartogs_figure_is_bidisc():
    fig = load_domain("hartogs_figure")
    env = envelope(fig)
    np.testing.assert_allclose(env.shadow.hull_vertices, [[0.0, 0.0]], atol=1e-12)
    assert env.shadow.recession_directions == frozenset({0, 1})
    r = np.random.default_rng(0)
    pts = r.uniform(0, 0.999, size=(500, 2)) * np.exp(2j * np.pi * r.random((500, 2)))
    assert np.all(contains(env, pts))
    assert not np.any(contains(env, np.array([[1.01, 0.1], [0.2, 1.001j]])))


def test_envelope_examples_membership():
    fig = load_domain("hartogs_figure")
    assert not contains(fig, [0.8, 0.3])
    assert contains(envelope(fig), [0.8, 0.3])
    assert contains(load_domain("unit_bidisc"), [0.5, 0.5])
    assert not contains(load_domain("hartogs_triangle"), [0.5, 0.3])
    assert contains(load_domain("hartogs_triangle"), [0.0, 0.5])


def test_envelope_of_l_shape_is_its_hull():
    d = load_domain("l_shape")
    env = envelope(d)
    assert env.shadow.recession_directions == frozenset()
    assert same_hull(env.shadow, log_convex_hull(d.shadow))


def test_envelope_triangle_is_itself():
    d = load_domain("hartogs_triangle")
    env = envelope(d)
    assert same_hull(env.shadow, log_convex_hull(d.shadow))
    probe = sample_interior(d, 200, seed=3, margin=1e-6)
    assert np.all(contains(env, probe))
    outside = np.array([[0.5, 0.3], [0.9, 0.5], [0.2, 1.2]])
    assert not np.any(contains(env, outside))


@pytest.mark.parametrize("name", FIXTURES)
def test_envelope_extensive_and_idempotent(name):
    d = load_domain(name)
    env = envelope(d)
    pts = sample_interior(d, 200, seed=1)
    assert np.all(contains(env, pts))
    again = envelope(env)
    assert same_hull(again.shadow, env.shadow)
    assert again.shadow.recession_directions == env.shadow.recession_directions


def test_envelope_monotone():
    small = load_domain("hartogs_triangle")
    big = load_domain("unit_bidisc")
    pts = sample_interior(envelope(small), 300, seed=2)
    assert np.all(contains(envelope(big), pts))


@given(st.integers(0, 2**31))
def test_convex_combination_witness(seed):
    r = np.random.default_rng(seed)
    d = load_domain("l_shape")
    q = sample_interior(d, 3, seed=int(seed % 1000))
    t = r.dirichlet(np.ones(3))
    x = t @ log_map(q)
    p = np.exp(x)
    for alpha in itertools.product(range(-3, 4), repeat=2):
        a = np.array(alpha)
        lhs = np.prod(np.abs(p) ** a)
        rhs = max(np.prod(np.abs(qk) ** a) for qk in q)
        assert lhs <= rhs * (1 + 1e-12)


# -- contains -----------------------------------------------------------------------


def test_contains_axis_points():
    disc = load_domain("unit_disc")
    assert contains(disc, [0.0])
    assert not contains(load_domain("punctured_disc"), [0.0])
    assert not contains(load_domain("annulus"), [0.0])
    tri = load_domain("hartogs_triangle")
    assert not contains(tri, [0.3, 0.0])
    assert contains(tri, [0.0, 0.9])


def test_contains_needs_hull_or_pieces():
    d = domain_from_points([[0.0, -1.0], [-1.0, 0.0]])
    with pytest.raises(DomainError):
        contains(d, [0.5, 0.5])
    hulled = replace(d, shadow=log_convex_hull(d.shadow))
    # a segment has no interior
    assert not contains(hulled, [0.5, 0.5])


def test_contains_vectorized_matches_scalar():
    d = load_domain("hartogs_figure")
    r = np.random.default_rng(5)
    pts = r.uniform(-1, 1, size=(50, 2)) + 1j * r.uniform(-1, 1, size=(50, 2))
    batch = contains(d, pts)
    assert batch.tolist() == [contains(d, p) for p in pts]


# -- DSL ------------------------------------------------------------------------------


def test_dsl_errors():
    with pytest.raises(DomainError):
        domain_from_dsl({"bounds": []})
    with pytest.raises(DomainError):
        domain_from_dsl({"n": 4, "bounds": [{"alpha": [1, 0, 0, 0], "lt": 1}]})
    with pytest.raises(DomainError):
        domain_from_dsl({"n": 1, "bounds": [{"alpha": [1], "lt": -1}]})
    with pytest.raises(DomainError):
        domain_from_dsl({"n": 2, "bounds": [{"alpha": [1], "lt": 1}]})
    with pytest.raises(DomainError):
        domain_from_dsl({"n": 1, "bounds": [{"alpha": [0], "lt": 1}]})
    with pytest.raises(DomainError):
        load_domain("no_such_fixture")


def test_dsl_axis_flags_default_to_recession():
    d = domain_from_dsl({"n": 2, "bounds": [{"alpha": [1, -1], "lt": 1}, {"alpha": [0, 1], "lt": 1}]})
    assert d.axis_flags == (True, False)
    assert d.well_formed()


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_well_formed(name):
    d = load_domain(name)
    assert d.well_formed()
    assert d.shadow.points.shape[0] > 0


def test_recession_rays():
    tri = load_domain("hartogs_triangle").pieces[0]
    assert tri.recession_rays() == ((-1, -1), (-1, 0))
    assert load_domain("annulus").pieces[0].recession_rays() == ()
    strip = Piece(np.array([[1, 0]]), np.array([0.0]))
    assert strip.recession_rays() is None


def test_piece_extension_sweeps_down():
    # |z1| < |z2| < 1 swept toward z2 = 0 becomes |z1| < 1, |z2| < 1
    tri = load_domain("hartogs_triangle").pieces[0]
    ext = tri.extended(1)
    x = np.array([[-0.1, -3.0], [-0.5, -0.2]])
    assert np.all(ext.slack(x) < 0)
    assert ext.slack(np.array([[0.1, -1.0]]))[0] > 0


# -- smooth monomials, monomial hull ---------------------------------------------------


def test_smooth_monomial_set_examples():
    assert smooth_monomial_set(load_domain("annulus"), 2) == {(-2,), (-1,), (0,), (1,), (2,)}
    assert smooth_monomial_set(load_domain("unit_bidisc"), 1) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    tri = smooth_monomial_set(load_domain("hartogs_triangle"), 1)
    assert tri == {(a, b) for a in (0, 1) for b in (-1, 0, 1)}


def test_monomial_hull_membership_examples():
    K = np.array([[0.3], [0.8]])
    assert monomial_hull_membership(K, [0.3], 4)
    assert monomial_hull_membership(K, [0.5j], 4)
    assert not monomial_hull_membership(K, [0.9], 4)


def test_monomial_hull_agrees_with_hull_membership():
    # polygon whose facet normals are small integer vectors
    V = np.array([[0.0, 0.0], [-2.0, 0.0], [-2.0, -1.0], [-1.0, -2.0], [0.0, -1.0]])
    hull = log_convex_hull(domain_from_points(V).shadow)
    K = np.exp(V).astype(complex)
    r = np.random.default_rng(9)
    checked = 0
    for x in r.uniform(-2.5, 0.5, size=(400, 2)):
        s = hull.slack(x)[0]
        if abs(s) < 1e-6:
            continue
        checked += 1
        assert monomial_hull_membership(K, np.exp(x), 8) == (s < 0)
    assert checked > 300


# -- extraction radius, sampling, export -------------------------------------------------


@pytest.mark.parametrize(
    "name, radii",
    [
        ("unit_disc", [0.5]),
        ("annulus", [math.sqrt(0.5)]),
        ("unit_bidisc", [0.5, 0.5]),
        ("hartogs_figure", [0.5, math.sqrt(0.5)]),
    ],
)
def test_extraction_radii(name, radii):
    np.testing.assert_allclose(extraction_radii(load_domain(name)), radii, rtol=1e-9)


def test_chebyshev_center_inside_every_fixture():
    for name in FIXTURES:
        d = load_domain(name)
        centre, depth, _ = chebyshev_center(d)
        assert depth > 0
        assert contains(d, np.exp(centre).astype(complex))


def test_sample_interior_deterministic():
    d = load_domain("hartogs_triangle")
    a = sample_interior(d, 20, seed=4)
    b = sample_interior(d, 20, seed=4)
    np.testing.assert_array_equal(a, b)
    assert np.all(contains(d, a))


def test_shadow_csv_round_trip():
    hull = log_convex_hull(load_domain("l_shape").shadow)
    buf = io.StringIO()
    shadow_to_csv(hull, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "x1,x2"
    back = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    np.testing.assert_array_equal(back, hull.hull_vertices)
