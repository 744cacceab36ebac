"""Deterministic acceptance checks shared by ``laurentlab selftest`` and the test suite.

Each check returns a :class:`CriterionResult` holding the measured quantity
next to the threshold it is compared with.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .domains import contains, envelope, load_domain, log_convex_hull, same_hull, sample_interior
from .expr import parse_function
from .laurent import (
    BergmanWeight,
    circle_average,
    evaluate_series,
    laurent_coefficients,
    missing_monomials_bergman,
)
from .morera import (
    Triangle,
    areolar_derivative,
    contour_integral,
    goursat_subdivide,
    morera_test,
    taylor_from_morera,
)
from .torus_fourier import TorusGrid, cauchy_inequality_check, cesaro_fejer_sum, fejer_kernel, sample

SEED = 20240917


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: dict

    def line(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return f"[{state}] {self.number:>2} {self.name}: measured {self.measured:.3e} vs {self.threshold:.1e}"

    def to_json(self) -> dict:
        return asdict(self)


# -- 1, 2: reconstruction and extension -----------------------------------

RECONSTRUCTION_CORPUS = (
    ("1/(1-z)", "unit_disc"),
    ("exp(z)", "unit_disc"),
    ("1/z", "annulus"),
    ("1/(1-z1*z2)", "unit_bidisc"),
    ("1/(2-z1-z2)", "unit_bidisc"),
)


def _torus_points(radii: np.ndarray, count: int, rng) -> np.ndarray:
    n = radii.shape[0]
    mod = radii * rng.uniform(0.05, 0.9, size=(count, n))
    return mod * np.exp(2j * np.pi * rng.random((count, n)))


def reconstruction(threads: int = 1) -> CriterionResult:
    rng = np.random.default_rng(SEED)
    worst, per = 0.0, {}
    for expr, name in RECONSTRUCTION_CORPUS:
        dom = load_domain(name)
        f = parse_function(expr, dom.n)
        series = laurent_coefficients(f, dom, 24, 256, threads=threads)
        Z = _torus_points(np.array(series.extraction_radii), 100, rng)
        if name == "annulus":
            # 1/z lives off the origin: stay in the annulus around the extraction circle
            r = series.extraction_radii[0]
            Z = Z / np.abs(Z) * r * rng.uniform(0.9, 1.1, size=Z.shape)
        err = float(np.max(np.abs(evaluate_series(series, Z).value - f(*Z.T))))
        per[f"{expr} on {name}"] = err
        worst = max(worst, err)
    return CriterionResult(1, "Laurent reconstruction", worst <= 1e-8, worst, 1e-8, per)


def hartogs_extension(threads: int = 1) -> CriterionResult:
    fig = load_domain("hartogs_figure")
    f = parse_function("1/(2-z1-z2)")
    series = laurent_coefficients(f, fig, 24, 256, threads=threads)
    point = np.array([0.6, 0.3], dtype=complex)
    outside = not contains(fig, point)
    value = evaluate_series(series, point, envelope(fig))
    err = abs(value.value - 1 / 1.1)
    return CriterionResult(
        2,
        "Hartogs extension",
        bool(err <= 1e-6 and outside),
        err,
        1e-6,
        {"value": [value.value.real, value.value.imag], "outside_figure": outside, "tail": value.tail},
    )


# -- 3: envelope geometry ---------------------------------------------------


def envelope_geometry() -> CriterionResult:
    rng = np.random.default_rng(SEED + 3)
    fig = load_domain("hartogs_figure")
    env = envelope(fig)
    pts = rng.uniform(0.0, 0.999, size=(1000, 2)) * np.exp(2j * np.pi * rng.random((1000, 2)))
    inside = int(np.sum(contains(env, pts)))
    again = envelope(env)
    idempotent = same_hull(again.shadow, env.shadow) and again.shadow.recession_directions == env.shadow.recession_directions

    tri = load_domain("hartogs_triangle")
    tri_env = envelope(tri)
    tri_hull = log_convex_hull(tri.shadow)
    same = same_hull(tri_env.shadow, tri_hull)
    V, W = tri_env.shadow.hull_vertices, tri_hull.hull_vertices
    gap = float(np.max(np.abs(V - W))) if V.shape == W.shape else math.inf
    probe = sample_interior(tri, 500, seed=SEED, margin=1e-6)
    agree = bool(np.all(contains(tri_env, probe)))
    passed = inside == 1000 and idempotent and same and agree
    return CriterionResult(
        3,
        "Envelope geometry",
        bool(passed),
        gap,
        1e-9,
        {"bidisc_points_inside": inside, "idempotent": bool(idempotent), "triangle_fixed": bool(same and agree)},
    )


# -- 4: Fejér ---------------------------------------------------------------


def sawtooth(z):
    """Triangle wave |theta - pi|/pi: continuous, unit amplitude, kinks at 0 and pi."""
    theta = np.mod(np.angle(z), 2 * np.pi)
    return np.abs(theta - np.pi) / np.pi + 0j


def fejer_theorem() -> CriterionResult:
    # fine enough that the node errors sit within 1e-4 of the continuous ones
    grid = TorusGrid(1, 4096, (1.0,))
    g = sample(sawtooth, grid).values
    errors = []
    for N in (8, 16, 32, 64):
        c = cesaro_fejer_sum(sawtooth, N, grid).values
        errors.append(float(np.max(np.abs(c - g))))
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    theta = 2 * np.pi * np.arange(256) / 256
    kernel_min, mean_dev = math.inf, 0.0
    for N in (0, 4, 8, 32):
        F = fejer_kernel(N, theta[:, None])
        kernel_min = min(kernel_min, float(np.min(F)))
        mean_dev = max(mean_dev, abs(float(np.mean(F)) - 1.0))
    passed = monotone and errors[-1] <= 0.02 and kernel_min >= 0 and mean_dev <= 1e-12
    return CriterionResult(
        4,
        "Fejer means",
        bool(passed),
        errors[-1],
        0.02,
        {"sup_errors": errors, "monotone": monotone, "kernel_min": kernel_min, "mean_deviation": mean_dev},
    )


# -- 5: Cauchy inequalities ---------------------------------------------------


def _trig_polynomial(coeffs: dict):
    items = sorted(coeffs.items())

    def f(*zs):
        out = np.zeros(np.broadcast(*zs).shape, dtype=complex)
        for alpha, a in items:
            term = np.full(out.shape, a, dtype=complex)
            for z, e in zip(zs, alpha):
                term = term * z**e
            out += term
        return out

    return f


def cauchy_inequalities(threads: int = 1) -> CriterionResult:
    rng = np.random.default_rng(SEED + 5)
    worst, violations = -math.inf, 0
    for k in range(100):
        n = 1 if k < 50 else 2
        box = 16 if n == 1 else 4
        count = int(rng.integers(1, 9))
        coeffs = {}
        for _ in range(count):
            alpha = tuple(int(a) for a in rng.integers(-box, box + 1, size=n))
            coeffs[alpha] = complex(rng.normal(), rng.normal())
        report = cauchy_inequality_check(
            _trig_polynomial(coeffs), 16, 128, (0.3, 0.6, 0.9), n=n, eps=1e-10, threads=threads
        )
        worst = max(worst, report.max_violation)
        violations += report.violations
    return CriterionResult(
        5, "Cauchy inequalities", violations == 0, max(worst, 0.0), 1e-10, {"violations": violations}
    )


# -- 6: mean value ------------------------------------------------------------


def mean_value() -> CriterionResult:
    rng = np.random.default_rng(SEED + 6)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 3))
        alpha = tuple(int(a) for a in rng.integers(-5, 6, size=n))
        mod = rng.uniform(0.5, 1.5, size=n)
        z = mod * np.exp(2j * np.pi * rng.random(n))
        rho = np.where(np.array(alpha) < 0, rng.uniform(0.1, 0.9, size=n) * mod, rng.uniform(0.1, 2.0, size=n))
        exact = complex(np.prod(z ** np.array(alpha, dtype=float)))
        worst = max(worst, abs(circle_average(alpha, z, rho) - exact))
    return CriterionResult(6, "Mean-value property", worst <= 1e-10, worst, 1e-10, {"cases": 200})


# -- 7: missing monomials --------------------------------------------------------


def triangle_radial_oracle(alpha) -> bool:
    """Is r1^(2 a1 + 1) r2^(2 a2 + 1) integrable over 0 < r1 < r2 < 1?

    Inner integral in r1 is finite iff 2 a1 + 1 > -1 and then equals
    r2^(2 a1 + 2)/(2 a1 + 2); the outer one is finite iff
    2 a1 + 2 a2 + 3 > -1.
    """
    a1, a2 = alpha
    return 2 * a1 + 1 > -1 and (2 * a1 + 2) + (2 * a2 + 1) > -1


def missing_monomials() -> CriterionResult:
    tri = load_domain("hartogs_triangle")
    verdict = missing_monomials_bergman(tri, BergmanWeight(p=2), 6)
    box = [(a, b) for a in range(-6, 7) for b in range(-6, 7)]
    oracle = {a for a in box if triangle_radial_oracle(a)}
    mismatches = len(oracle ^ set(verdict.allowed))
    disc = missing_monomials_bergman(load_domain("unit_disc"), BergmanWeight(p=2), 6)
    disc_ok = set(disc.allowed) == {(n,) for n in range(0, 7)}
    return CriterionResult(
        7,
        "Missing monomials (Bergman)",
        mismatches == 0 and disc_ok and not verdict.indeterminate,
        float(mismatches),
        0.0,
        {"triangle_allowed": len(verdict.allowed), "disc_matches": disc_ok},
    )


# -- 8: Morera / Pompeiu ----------------------------------------------------------


def morera_pompeiu() -> CriterionResult:
    rng = np.random.default_rng(SEED + 8)
    conj = parse_function("conj(z)")
    W = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
    areolar_err = max(abs(areolar_derivative(conj, w).value - 2j) for w in W)

    ok_exp = morera_test(parse_function("exp(z)"))
    bad = morera_test(parse_function("z + 0.01*conj(z)"))
    bad_rel = abs(bad.worst_residual - 0.02) / 0.02

    trace = goursat_subdivide(conj, Triangle(0, 1, 1j), 20)
    ratio_err = max(abs(r - 2.0) for r in trace.ratios)
    levels = len(trace.ratios) - 1

    enclosing = Triangle(-1 - 1j, 2 - 1j, 1j)
    winding = abs(contour_integral(parse_function("1/z"), enclosing).value - 2j * math.pi)

    passed = (
        areolar_err <= 1e-8
        and ok_exp.passed
        and not bad.passed
        and bad_rel <= 0.1
        and ratio_err <= 1e-9
        and levels == 20
        and winding <= 1e-10
    )
    return CriterionResult(
        8,
        "Morera and Pompeiu",
        bool(passed),
        float(max(areolar_err, ratio_err, winding)),
        1e-8,
        {
            "areolar_error": areolar_err,
            "exp_residual": ok_exp.worst_residual,
            "perturbed_residual": bad.worst_residual,
            "goursat_ratio_error": ratio_err,
            "winding_error": winding,
        },
    )


# -- 9: Taylor from Morera ----------------------------------------------------------


def taylor_morera() -> CriterionResult:
    result = taylor_from_morera(parse_function("exp(z)"), 12, 256)
    rel = max(abs(a * math.factorial(n) - 1.0) for n, a in enumerate(result.coefficients))
    passed = rel <= 1e-9 and result.negative_residual <= 1e-12 and result.radius_residual <= 1e-10
    return CriterionResult(
        9,
        "Taylor from Morera",
        bool(passed),
        float(rel),
        1e-9,
        {"negative_residual": result.negative_residual, "radius_residual": result.radius_residual},
    )


def run_all(threads: int = 1) -> list[CriterionResult]:
    return [
        reconstruction(threads),
        hartogs_extension(threads),
        envelope_geometry(),
        fejer_theorem(),
        cauchy_inequalities(threads),
        mean_value(),
        missing_monomials(),
        morera_pompeiu(),
        taylor_morera(),
    ]
