"""Triangle calculus for raw continuous functions of one variable.

Contour integrals use 16-point Gauss-Legendre per edge and are repeated
with every edge halved; the difference is the error estimate. On closed
polygons f is replaced by f - f(centroid), which leaves the integral
unchanged (the integral of dz vanishes) and removes most of the rounding
error on small triangles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.stats import qmc

from . import _kernels
from .laurent import torus_coefficients

GL_NODES = 16
ADDITIVITY_TOL = 1e-12
TIE_RTOL = 1e-12
ZERO_RATIO = 1e-12


class MoreraError(ValueError):
    """Holomorphicity evidence is contradictory or missing."""

    def __init__(self, message: str, result=None):
        self.result = result
        super().__init__(message)


class QuadratureError(ArithmeticError):
    pass


def _gauss_legendre(q: int):
    x, w = np.polynomial.legendre.leggauss(q)
    return x, w


# -- geometry -------------------------------------------------------------


@dataclass(frozen=True)
class Triangle:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in "abc":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if not self.signed_area > 0:
            raise ValueError("triangle vertices must be counterclockwise and not collinear")

    @classmethod
    def oriented(cls, a, b, c) -> "Triangle":
        """Build from any vertex order, swapping to counterclockwise."""
        a, b, c = complex(a), complex(b), complex(c)
        if ((b - a).conjugate() * (c - a)).imag < 0:
            b, c = c, b
        return cls(a, b, c)

    @property
    def vertices(self) -> tuple[complex, complex, complex]:
        return (self.a, self.b, self.c)

    @property
    def signed_area(self) -> float:
        return 0.5 * ((self.b - self.a).conjugate() * (self.c - self.a)).imag

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @property
    def diameter(self) -> float:
        return max(abs(self.b - self.a), abs(self.c - self.b), abs(self.a - self.c))

    @property
    def centroid(self) -> complex:
        return (self.a + self.b + self.c) / 3

    def contains(self, w: complex, tol: float = 1e-12) -> bool:
        w = complex(w)
        scale = tol * max(self.diameter, 1e-300) ** 2
        for p, q in ((self.a, self.b), (self.b, self.c), (self.c, self.a)):
            if ((q - p).conjugate() * (w - p)).imag < -scale:
                return False
        return True

    def children(self) -> tuple["Triangle", "Triangle", "Triangle", "Triangle"]:
        """Midpoint subdivision: the three corner triangles, then the central one."""
        a, b, c = self.vertices
        mab, mbc, mca = (a + b) / 2, (b + c) / 2, (c + a) / 2
        return (
            Triangle(a, mab, mca),
            Triangle(mab, b, mbc),
            Triangle(mca, mbc, c),
            Triangle(mab, mbc, mca),
        )

    def to_json(self) -> list[list[float]]:
        return [[v.real, v.imag] for v in self.vertices]


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, theta):
        return self.center + self.radius * np.exp(1j * np.asarray(theta))


@dataclass(frozen=True)
class ContourResult:
    value: complex
    error: float


def _as_polyline(path) -> tuple[np.ndarray, bool] | None:
    if isinstance(path, Triangle):
        return np.array(path.vertices + (path.a,)), True
    if isinstance(path, Arc):
        return None
    pts = np.asarray(path, dtype=np.complex128).ravel()
    if pts.shape[0] < 2:
        raise ValueError("a polyline needs at least two points")
    closed = pts[0] == pts[-1]
    return pts, bool(closed)


def _segment_rule(f, starts, ends, splits: int, x, w, shift):
    """Composite Gauss-Legendre over straight edges, each cut into ``splits`` pieces."""
    t = np.linspace(0.0, 1.0, splits + 1)
    a = (starts[:, None] + (ends - starts)[:, None] * t[None, :-1]).ravel()
    b = (starts[:, None] + (ends - starts)[:, None] * t[None, 1:]).ravel()
    half, mid = (b - a) / 2, (b + a) / 2
    nodes = mid[:, None] + half[:, None] * x[None, :]
    values = np.asarray(f(nodes.ravel()), dtype=np.complex128).reshape(nodes.shape)
    if shift is not None:
        values = values - shift
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand is not finite on the path")
    return complex(_kernels.edge_quadrature(values, half, w))


def _arc_rule(f, arc: Arc, panels: int, x, w):
    edges = np.linspace(arc.theta0, arc.theta1, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    theta = mid[:, None] + half[:, None] * x[None, :]
    z = arc.point(theta)
    values = np.asarray(f(z.ravel()), dtype=np.complex128).reshape(z.shape)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand is not finite on the path")
    # dz = i (z - center) dtheta
    values = values * 1j * (z - arc.center)
    return complex(_kernels.edge_quadrature(values, half.astype(np.complex128), w))


def contour_integral(f: Callable, path, nodes_per_edge: int = GL_NODES) -> ContourResult:
    """Integral of f(z) dz along a triangle, a polyline, an arc, or a list of those.

    Triangles and closed polylines are integrated around their boundary in
    the given order.
    """
    if nodes_per_edge < 8:
        raise ValueError("nodes_per_edge must be at least 8")
    x, w = _gauss_legendre(nodes_per_edge)
    if isinstance(path, (list, tuple)) and path and isinstance(path[0], (Arc, list, tuple, Triangle)):
        parts = [contour_integral(f, p, nodes_per_edge) for p in path]
        return ContourResult(sum(p.value for p in parts), sum(p.error for p in parts))
    if isinstance(path, Arc):
        panels = max(1, math.ceil(abs(path.theta1 - path.theta0) / (math.pi / 2)))
        coarse = _arc_rule(f, path, panels, x, w)
        fine = _arc_rule(f, path, 2 * panels, x, w)
        return ContourResult(fine, abs(fine - coarse))
    pts, closed = _as_polyline(path)
    shift = None
    if closed:
        shift = complex(np.asarray(f(np.array([np.mean(pts[:-1])])), dtype=np.complex128)[0])
    coarse = _segment_rule(f, pts[:-1], pts[1:], 1, x, w, shift)
    fine = _segment_rule(f, pts[:-1], pts[1:], 2, x, w, shift)
    return ContourResult(fine, abs(fine - coarse))


def _triangle_integrals(f, triangles: Sequence[Triangle], x, w) -> np.ndarray:
    """Refined contour integrals of many triangles in one evaluator call."""
    T = len(triangles)
    V = np.array([t.vertices for t in triangles])
    starts = V.ravel()
    ends = np.roll(V, -1, axis=1).ravel()
    # each edge split in two, matching contour_integral's refined rule
    mids = (starts + ends) / 2
    a = np.stack([starts, mids], axis=1).ravel()
    b = np.stack([mids, ends], axis=1).ravel()
    half, mid = (b - a) / 2, (b + a) / 2
    nodes = mid[:, None] + half[:, None] * x[None, :]
    centroids = V.mean(axis=1)
    values = np.asarray(f(np.concatenate([nodes.ravel(), centroids])), dtype=np.complex128)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand is not finite on a triangle")
    shift = values[nodes.size :]
    values = values[: nodes.size].reshape(T, 6, x.shape[0]) - shift[:, None, None]
    return _kernels.edge_quadrature(values, half.reshape(T, 6), w)


# -- Goursat --------------------------------------------------------------


@dataclass(frozen=True)
class SubdivisionTrace:
    triangles: tuple[Triangle, ...]
    integrals: tuple[complex, ...]
    ratios: tuple[float, ...]
    choices: tuple[int, ...]
    witness: complex
    zero_flag: bool
    additivity_defect: float

    def to_json(self) -> dict:
        return {
            "levels": [
                {
                    "level": k,
                    "vertices": t.to_json(),
                    "integral": [v.real, v.imag],
                    "ratio": r,
                    "child": (self.choices[k - 1] if k > 0 else None),
                }
                for k, (t, v, r) in enumerate(zip(self.triangles, self.integrals, self.ratios))
            ],
            "witness": [self.witness.real, self.witness.imag],
            "zero_flag": self.zero_flag,
            "additivity_defect": self.additivity_defect,
        }


def _pick(values: np.ndarray) -> int:
    mags = np.abs(values)
    top = float(np.max(mags))
    return int(np.flatnonzero(mags >= top * (1.0 - TIE_RTOL))[0])


def goursat_subdivide(f: Callable, T0: Triangle, depth: int, zero_ratio: float = ZERO_RATIO) -> SubdivisionTrace:
    """Follow the child with the largest |integral| for ``depth`` levels.

    Stops early once |integral|/area drops to ``zero_ratio``. The witness is
    the centroid of the last triangle.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    x, w = _gauss_legendre(GL_NODES)
    current = T0
    value = complex(_triangle_integrals(f, [T0], x, w)[0])
    tris, vals, ratios, choices = [T0], [value], [abs(value) / T0.area], []
    worst_defect = 0.0
    zero = ratios[0] <= zero_ratio
    for _ in range(depth):
        if zero:
            break
        kids = current.children()
        kid_vals = _triangle_integrals(f, kids, x, w)
        defect = abs(value - complex(np.sum(kid_vals)))
        scale = 1.0 + float(np.sum(np.abs(kid_vals)))
        worst_defect = max(worst_defect, defect / scale)
        if defect > ADDITIVITY_TOL * scale:
            raise QuadratureError(f"additivity defect {defect:.3e} at level {len(tris) - 1}")
        i = _pick(kid_vals)
        current, value = kids[i], complex(kid_vals[i])
        tris.append(current)
        vals.append(value)
        ratios.append(abs(value) / current.area)
        choices.append(i)
        zero = ratios[-1] <= zero_ratio
    return SubdivisionTrace(
        tuple(tris), tuple(vals), tuple(ratios), tuple(choices), current.centroid, zero, worst_defect
    )


# -- Pompeiu --------------------------------------------------------------


def equilateral(w: complex, h: float) -> Triangle:
    """Equilateral triangle with side h and one vertex at w."""
    w = complex(w)
    return Triangle(w, w + h, w + h * complex(0.5, math.sqrt(3) / 2))


@dataclass(frozen=True)
class AreolarResult:
    value: complex
    error: float
    quotients: tuple[complex, ...]
    converged: bool


def areolar_derivative(
    f: Callable, w: complex, shrink_levels: int = 8, h0: float = 0.25, tol: float = 1e-6
) -> AreolarResult:
    """Limit of (1/|T_k|) times the integral over the boundary of T_k, T_k = equilateral(w, h0 2^-k).

    The quotients differ from the limit by a power series in h, so they are
    extrapolated with a Richardson table of up to three columns.
    """
    if shrink_levels < 2:
        raise ValueError("shrink_levels must be at least 2")
    x, w8 = _gauss_legendre(GL_NODES)
    tris = [equilateral(w, h0 * 0.5**k) for k in range(shrink_levels + 1)]
    ints = _triangle_integrals(f, tris, x, w8)
    q = [complex(v / t.area) for v, t in zip(ints, tris)]
    table = [[v] for v in q]
    cols = min(3, shrink_levels)
    for k in range(1, len(q)):
        for j in range(1, min(k, cols) + 1):
            p = 2.0**j
            table[k].append((p * table[k][j - 1] - table[k - 1][j - 1]) / (p - 1))
    best = table[-1][-1]
    prev = table[-2][min(len(table[-2]), len(table[-1])) - 1]
    err = abs(best - prev)
    return AreolarResult(best, err, tuple(q), err <= tol * (1.0 + abs(best)))


def areolar_field(f: Callable, points, h: float = 1e-3) -> np.ndarray:
    """One-step Richardson areolar estimate 2 q(h/2) - q(h) at many points."""
    pts = np.asarray(points, dtype=np.complex128).ravel()
    x, w = _gauss_legendre(GL_NODES)
    big = [equilateral(p, h) for p in pts]
    small = [equilateral(p, h / 2) for p in pts]
    q1 = _triangle_integrals(f, big, x, w) / np.array([t.area for t in big])
    q2 = _triangle_integrals(f, small, x, w) / np.array([t.area for t in small])
    return 2 * q2 - q1


# -- Morera scan ----------------------------------------------------------


@dataclass(frozen=True)
class MoreraVerdict:
    passed: bool
    worst_residual: float
    worst_triangle: Triangle
    tol: float
    sup_f: float
    triangles_tested: int
    trace: SubdivisionTrace | None = field(default=None)

    @property
    def witness(self) -> complex | None:
        return self.trace.witness if self.trace is not None else None


def triangle_family(region: Sequence[float], budget: int, scales: int = 3) -> list[Triangle]:
    """Deterministic low-discrepancy triangles inside the rectangle (x0, x1, y0, y1).

    Each triangle is equilateral; position and rotation come from a Halton
    sequence and sizes cycle through ``scales`` dyadic levels.
    """
    x0, x1, y0, y1 = (float(v) for v in region)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("region must be (x0, x1, y0, y1) with x0 < x1 and y0 < y1")
    if budget < 1:
        raise ValueError("triangle budget must be positive")
    u = qmc.Halton(d=3, scramble=False).random(budget + 1)[1:]
    span = min(x1 - x0, y1 - y0)
    out = []
    for k, (s, t, r) in enumerate(u):
        h = span * 0.5 / 4 ** (k % scales)
        # the equilateral shape fits in a disc of radius h/sqrt(3) about its centroid
        rad = h / math.sqrt(3)
        cx = x0 + rad + s * (x1 - x0 - 2 * rad)
        cy = y0 + rad + t * (y1 - y0 - 2 * rad)
        phi = 2 * math.pi * r
        verts = [complex(cx, cy) + rad * np.exp(1j * (phi + 2 * math.pi * j / 3)) for j in range(3)]
        out.append(Triangle(*verts))
    return out


def morera_test(
    f: Callable,
    region: Sequence[float] = (-0.5, 0.5, -0.5, 0.5),
    triangle_budget: int = 192,
    tol: float | None = None,
    depth: int = 12,
) -> MoreraVerdict:
    """PASS iff |integral over the boundary of T|/|T| <= tol for every sampled T.

    The default tolerance is 1e-8 (1 + sup of |f| over the quadrature nodes).
    A failing scan is followed by a Goursat subdivision of the worst triangle.
    """
    tris = triangle_family(region, triangle_budget)
    x, w = _gauss_legendre(GL_NODES)
    ints = _triangle_integrals(f, tris, x, w)
    areas = np.array([t.area for t in tris])
    residuals = np.abs(ints) / areas
    V = np.array([t.vertices for t in tris]).ravel()
    sup_f = float(np.max(np.abs(np.asarray(f(V), dtype=np.complex128))))
    if tol is None:
        tol = 1e-8 * (1.0 + sup_f)
    k = int(np.argmax(residuals))
    worst = float(residuals[k])
    passed = worst <= tol
    trace = None if passed else goursat_subdivide(f, tris[k], depth)
    return MoreraVerdict(passed, worst, tris[k], float(tol), sup_f, len(tris), trace)


# -- sector identity ------------------------------------------------------


def sector_identity_residual(
    u: Callable,
    rho: float,
    R: float,
    alpha_angle: float,
    beta_angle: float,
    nodes: int = GL_NODES,
) -> float:
    """|integral of u(|z|) dz| around the annular sector rho < |z| < R, alpha < arg z < beta.

    The boundary is the outward ray at alpha, the outer arc, the inward ray
    at beta and the inner arc backwards; the integral equals
    (e^{i beta} - e^{i alpha}) (R u(R) - rho u(rho) - int_rho^R u).
    """
    if not 0 < rho < R < 1:
        raise ValueError("need 0 < rho < R < 1")

    def f(z):
        return np.asarray(u(np.abs(z)), dtype=np.complex128) * np.ones_like(z)

    ea, eb = np.exp(1j * alpha_angle), np.exp(1j * beta_angle)
    path = [
        [rho * ea, R * ea],
        Arc(0j, R, alpha_angle, beta_angle),
        [R * eb, rho * eb],
        Arc(0j, rho, beta_angle, alpha_angle),
    ]
    return abs(contour_integral(f, path, nodes).value)


# -- Taylor coefficients ---------------------------------------------------


@dataclass(frozen=True)
class TaylorResult:
    coefficients: tuple[complex, ...]
    negative_residual: float
    radius_residual: float
    radius: float
    morera: MoreraVerdict | None


def taylor_from_morera(
    f: Callable,
    n_max: int = 12,
    grid_m: int = 256,
    radius: float = 0.7,
    *,
    precision: str = "extended",
    tol: float = 1e-12,
    check_radii: Sequence[float] = (0.3, 0.5, 0.7),
    check_morera: bool = True,
) -> TaylorResult:
    """Taylor coefficients a_0..a_n_max of f on the unit disc.

    The coefficients are angular Fourier coefficients on |z| = radius divided
    by radius^n. The l2 norm of the negative modes on that circle is the
    residual that must vanish; ``radius_residual`` compares a_0..a_n_max
    across ``check_radii``.
    """
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    if grid_m <= 2 * n_max:
        raise ValueError("grid_m must exceed 2 n_max")
    verdict = morera_test(f, (-0.5, 0.5, -0.5, 0.5), 64) if check_morera else None
    spectrum, _ = torus_coefficients(f, 1, (radius,), grid_m, precision)
    real = np.longdouble if precision == "extended" else np.float64
    coeffs = tuple(complex(spectrum[n] / real(radius) ** n) for n in range(n_max + 1))
    negative = float(np.sqrt(np.sum(np.abs(spectrum[grid_m // 2 + 1 :]) ** 2)))

    per_radius = []
    for r in check_radii:
        s, _ = torus_coefficients(f, 1, (r,), grid_m, precision)
        per_radius.append([s[n] / real(r) ** n for n in range(n_max + 1)])
    spread = 0.0
    for n in range(n_max + 1):
        vals = [row[n] for row in per_radius]
        spread = max(spread, max(float(abs(a - b)) for a in vals for b in vals))

    result = TaylorResult(coeffs, negative, spread, radius, verdict)
    if negative > tol:
        morera_note = ""
        if verdict is not None:
            state = "passed" if verdict.passed else "failed"
            morera_note = f"; Morera scan {state} (worst residual {verdict.worst_residual:.3e})"
        raise MoreraError(f"negative-mode residual {negative:.3e} exceeds {tol:.1e}{morera_note}", result)
    return result
