from __future__ import annotations

import io
import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from laurentlab.domains import DomainError, contains, envelope, load_domain, smooth_monomial_set
from laurentlab.laurent import (
    BergmanWeight,
    LaurentError,
    LaurentSeries,
    NonHolomorphicError,
    circle_average,
    closure_axis_contact,
    coefficient_decay_report,
    describe_constraint,
    evaluate_series,
    laurent_coefficients,
    missing_monomials_bergman,
    missing_monomials_smooth_boundary,
    radius_independence_residual,
    shell_key,
)


def box(n, k):
    return set(itertools.product(range(-k, k + 1), repeat=n))


# -- extraction ------------------------------------------------------------------


def test_one_over_z_on_annulus():
    s = laurent_coefficients(lambda z: 1 / z, load_domain("annulus"), 8, 64)
    assert s.support() == [(-1,)]
    assert abs(s[(-1,)] - 1) < 1e-14
    assert s.certificate["passed"]


def test_geometric_series_on_disc():
    s = laurent_coefficients(lambda z: 1 / (1 - z), load_domain("unit_disc"), 16, 256, radii=[0.5])
    for k in range(17):
        assert abs(s[(k,)] - 1) < 1e-12
    assert all(a[0] >= 0 for a in s.support())


def test_two_variable_geometric_series():
    s = laurent_coefficients(lambda z1, z2: 1 / (1 - z1 * z2), load_domain("unit_bidisc"), 8, 64, radii=[0.5, 0.5])
    for alpha, value in s.coefficients.items():
        assert alpha[0] == alpha[1]
        assert abs(value - 1) < 1e-12
    assert len(s.coefficients) == 9


def test_default_radii_are_chebyshev():
    s = laurent_coefficients(np.exp, load_domain("unit_disc"), 6, 32)
    assert s.extraction_radii == pytest.approx((0.5,))
    for k in range(7):
        assert abs(s[(k,)] - 1 / math.factorial(k)) < 1e-14


def test_radii_outside_domain_rejected():
    with pytest.raises(DomainError):
        laurent_coefficients(np.exp, load_domain("unit_disc"), 4, 32, radii=[1.5])


def test_non_holomorphic_detected():
    with pytest.raises(NonHolomorphicError) as info:
        laurent_coefficients(np.conj, load_domain("unit_disc"), 4, 32)
    assert info.value.alpha == (-1,)
    # on the annulus z^{-1} is allowed, so only the radius certificate catches it
    with pytest.raises(NonHolomorphicError):
        laurent_coefficients(np.conj, load_domain("annulus"), 4, 32)
    lax = laurent_coefficients(np.conj, load_domain("annulus"), 4, 32, strict=False)
    assert not lax.certificate["passed"]


def test_alias_guard():
    with pytest.raises(ValueError):
        laurent_coefficients(np.exp, load_domain("unit_disc"), 16, 32)


def test_support_within_smooth_monomials():
    d = load_domain("hartogs_triangle")
    f = lambda z1, z2: z1 / z2 + np.exp(z2) + (z1 / z2) ** 3 / (2 - z2)
    s = laurent_coefficients(f, d, 8, 64)
    assert set(s.support()) <= smooth_monomial_set(d, 8)
    assert abs(s[(1, -1)] - 1) < 1e-12
    assert abs(s[(3, -3)] - 0.5) < 1e-12


def test_coefficients_obey_cauchy_bound():
    d = load_domain("annulus")
    f = lambda z: 1 / (z - 0.1) + 1 / (3 - z)
    s = laurent_coefficients(f, d, 12, 128)
    r = s.extraction_radii[0]
    theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    sup = np.max(np.abs(f(r * np.exp(1j * theta))))
    for (a,), c in s.coefficients.items():
        assert abs(c) * r**a <= sup * (1 + 1e-12)


# -- radius independence -----------------------------------------------------------


def test_radius_residuals():
    around_half = [0.45, 0.5, 0.55]
    assert radius_independence_residual(np.exp, None, (3,), around_half, 64) <= 1e-11
    assert abs(radius_independence_residual(np.conj, None, (-1,), [0.3, 0.6], 64) - 0.27) < 1e-14
    poly = lambda z1, z2: 1 + z1 * z2**2 - 4 * z1**3
    res = radius_independence_residual(poly, load_domain("unit_bidisc"), (1, 2), [(0.2, 0.3), (0.7, 0.9)], 16)
    assert res <= 1e-12


def test_radius_residual_checks_domain():
    with pytest.raises(DomainError):
        radius_independence_residual(np.exp, load_domain("unit_disc"), (1,), [0.5, 1.2], 32)


# -- evaluation --------------------------------------------------------------------


def test_evaluate_constant():
    s = LaurentSeries(1, {(0,): 7}, (0.5,), 16, 4)
    v = evaluate_series(s, [0.3])
    assert v.value == 7 and v.tail == 0 and not v.diverging


def test_hartogs_extension_evaluates_in_envelope():
    fig = load_domain("hartogs_figure")
    f = lambda z1, z2: 1 / (2 - z1 * z2)
    s = laurent_coefficients(f, fig, 40, 128)
    hat = envelope(fig)
    z = np.array([0.8, 0.3])
    assert not contains(fig, z) and contains(hat, z)
    v = evaluate_series(s, z, domain_hat=hat)
    assert abs(v.value - f(*z)) < 1e-12
    assert not v.tail_exceeds_tol
    with pytest.raises(DomainError):
        evaluate_series(s, [1.2, 0.1], domain_hat=hat)


def test_tail_flag_near_boundary():
    s = laurent_coefficients(lambda z: 1 / (1 - z), load_domain("unit_disc"), 16, 256, radii=[0.5])
    near = evaluate_series(s, [0.99])
    assert near.tail_exceeds_tol and not near.diverging
    far = evaluate_series(s, [1.5])
    assert far.diverging
    inside = evaluate_series(s, [0.1])
    assert abs(inside.value - 1 / 0.9) < 1e-12


def test_evaluate_batch_matches_single():
    s = LaurentSeries(2, {(1, -1): 2, (0, 2): 1j, (0, 0): -1}, (0.5, 0.5), 16, 4)
    pts = np.array([[0.3, 0.4j], [0.1 + 0.1j, -0.5]])
    batch = evaluate_series(s, pts)
    for row, value in zip(pts, batch.value):
        assert evaluate_series(s, row).value == pytest.approx(value, abs=1e-15)
    with pytest.raises(LaurentError):
        evaluate_series(s, [0.3, 0.0])


# -- decay -----------------------------------------------------------------------------


def test_decay_geometric():
    s = laurent_coefficients(lambda z: 1 / (1 - z / 2), load_domain("unit_disc"), 20, 128)
    rep = coefficient_decay_report(s, 1.0)
    # deep coefficients carry rounding of order eps * 2^k, which the fit sees
    assert rep.decay_rate == pytest.approx(math.log(2), abs=1e-6)
    assert not rep.super_geometric
    buf = io.StringIO()
    rep.to_csv(buf)
    assert buf.getvalue().splitlines()[0] == "alpha1,shell,p_K"


def test_decay_exp_super_geometric():
    s = laurent_coefficients(np.exp, load_domain("unit_disc"), 16, 64)
    assert coefficient_decay_report(s, 1.0).super_geometric


def test_polynomial_has_exact_zeros():
    s = laurent_coefficients(lambda z: 3 - 2 * z + z**4, load_domain("unit_disc"), 12, 64)
    assert sorted(s.support()) == [(0,), (1,), (4,)]
    rep = coefficient_decay_report(s, 1.0)
    assert rep.shell_max[5:].tolist() == [0.0] * 8


# -- mean value ------------------------------------------------------------------------


def test_circle_average_examples():
    assert circle_average((3,), 0.5 + 0.2j, 2.0) == pytest.approx((0.5 + 0.2j) ** 3, abs=1e-14)
    assert circle_average((-2,), 1.0, 0.5) == pytest.approx(1.0, abs=1e-14)
    assert circle_average((2, -1), (0.5j, 2.0), (0.1, 1.0)) == pytest.approx((0.5j) ** 2 / 2, abs=1e-14)
    with pytest.raises(LaurentError):
        circle_average((-1,), 0.5, 0.6)


@given(
    st.integers(-6, 6),
    st.floats(0.2, 3.0),
    st.floats(0, 2 * math.pi),
    st.floats(0.05, 0.95),
)
def test_mean_value_property(a, radius, phase, ratio):
    z = radius * complex(math.cos(phase), math.sin(phase))
    rho = ratio * radius if a < 0 else ratio * 4
    got = circle_average((a,), z, rho)
    assert abs(got - z**a) <= 1e-11 * max(1.0, abs(z**a))


# -- missing monomials ----------------------------------------------------------------


def triangle_rule(a, b):
    # |z1|^{2a}|z2|^{2b} over |z1| < |z2| < 1: inner radial integral needs a >= 0,
    # the outer one then needs 2a + 2b + 4 > 0
    return a >= 0 and a + b >= -1


def test_bergman_disc_and_punctured_disc():
    for name in ("unit_disc", "punctured_disc"):
        v = missing_monomials_bergman(load_domain(name), alpha_box=4)
        assert v.method == "exact"
        assert v.allowed == {(k,) for k in range(5)}
    assert len(missing_monomials_bergman(load_domain("annulus"), alpha_box=4).allowed) == 9


def test_bergman_triangle_exact():
    v = missing_monomials_bergman(load_domain("hartogs_triangle"), alpha_box=5)
    expected = {a for a in box(2, 5) if triangle_rule(*a)}
    assert v.allowed == expected
    assert (0, -1) in v.allowed and (0, -2) in v.missing


def test_bergman_weighted_and_lp():
    d = load_domain("unit_disc")
    # |z|^{-1} weight shifts the threshold: c = 2 a + 2 - 1 > 0
    assert (0,) in missing_monomials_bergman(d, BergmanWeight(2, (-1.0,)), 3).allowed
    assert (-1,) in missing_monomials_bergman(d, BergmanWeight(2, (1.0,)), 3).allowed
    # L^1: c = a + 2, so z^{-1} is integrable
    assert missing_monomials_bergman(d, BergmanWeight(1.0), 3).allowed == {(-1,), (0,), (1,), (2,), (3,)}
    with pytest.raises(LaurentError):
        BergmanWeight(0.5)


@pytest.mark.parametrize("name", ["unit_disc", "punctured_disc", "hartogs_triangle", "unit_bidisc"])
def test_bergman_numeric_agrees_with_exact(name):
    d = load_domain(name)
    exact = missing_monomials_bergman(d, alpha_box=2, exact=True)
    numeric = missing_monomials_bergman(d, alpha_box=2, exact=False)
    assert numeric.allowed <= exact.allowed
    assert numeric.missing <= exact.missing
    assert len(numeric.indeterminate) <= 2


def test_bergman_radial_weight_forces_numeric():
    w = BergmanWeight(2, radial_weight=lambda r: 1 + r**2)
    v = missing_monomials_bergman(load_domain("unit_disc"), w, 2)
    assert v.method == "numeric"
    assert v.allowed == {(0,), (1,), (2,)}


def test_smooth_boundary_verdicts():
    bidisc = missing_monomials_smooth_boundary(load_domain("unit_bidisc"), 3)
    assert describe_constraint(bidisc, 2) == "N^2"
    annulus = missing_monomials_smooth_boundary(load_domain("annulus"), 3)
    assert describe_constraint(annulus, 1) == "Z"
    assert not annulus.missing
    tri = missing_monomials_smooth_boundary(load_domain("hartogs_triangle"), 3)
    assert closure_axis_contact(load_domain("hartogs_triangle")) == (True, True)
    assert (2, -1) in tri.missing and tri.witnesses[(2, -1)] == (0, 1)
    assert describe_constraint(tri, 2) == "N^2"
    rows = tri.to_rows()
    assert rows[0] == {"alpha": [0, 0], "verdict": "allowed"}


def test_verdict_partitions_box():
    v = missing_monomials_bergman(load_domain("hartogs_figure"), alpha_box=3)
    assert not (v.allowed & v.missing)
    assert v.allowed | v.missing | v.indeterminate == box(2, 3)


# -- serialization ---------------------------------------------------------------------


def test_json_round_trip():
    s = laurent_coefficients(lambda z1, z2: np.exp(z1) / (1 - z2), load_domain("unit_bidisc"), 5, 64)
    back = LaurentSeries.loads(s.dumps())
    assert back.coefficients == s.coefficients
    assert back.extraction_radii == s.extraction_radii
    assert back.metadata == s.metadata
    assert back.to_json() == s.to_json()


def test_series_validation_and_order():
    with pytest.raises(LaurentError):
        LaurentSeries(1, {(5,): 1}, (0.5,), 16, 4)
    with pytest.raises(LaurentError):
        LaurentSeries(1, {(1,): float("nan")}, (0.5,), 16, 4)
    s = LaurentSeries(1, {(2,): 1, (-1,): 1, (0,): 1, (1,): 1}, (0.5,), 16, 4)
    assert s.support() == [(0,), (-1,), (1,), (2,)]
    assert shell_key((-2, 1)) == (2, (-2, 1))
