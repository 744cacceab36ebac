"""Laurent coefficients on Reinhardt domains, series evaluation on the
envelope, and missing-monomial verdicts.

The coefficient of z^alpha is the angular Fourier coefficient of f on a
polytorus of radii r, divided by r^alpha. For holomorphic f it does not
depend on r, and every extraction carries a small certificate that checks
this on three nearby tori.
"""
from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .domains import (
    CLIP_DEPTH,
    DomainError,
    ReinhardtDomain,
    chebyshev_center,
    contains,
    smooth_monomial_set,
)
from .torus_fourier import AliasingError, TorusGrid, sample

MultiIndex = tuple[int, ...]

CONSISTENCY_TOL = 1e-9
CERTIFICATE_TOL = 1e-7
NOISE_FLOOR = 32.0
DIVERGENCE_RATIO = 1.5


class LaurentError(ValueError):
    pass


class NonHolomorphicError(LaurentError):
    """The same coefficient came out differently on different tori."""

    def __init__(self, message: str, residual: float, alpha: MultiIndex):
        self.residual = residual
        self.alpha = alpha
        super().__init__(f"{message}: residual {residual:.3e} at alpha={alpha}")


def shell_key(alpha: Sequence[int]) -> tuple:
    """Canonical order: increasing |alpha|_inf, then lexicographic."""
    return (max((abs(a) for a in alpha), default=0), tuple(alpha))


# -- series container -----------------------------------------------------


@dataclass
class LaurentSeries:
    n: int
    coefficients: dict[MultiIndex, complex]
    extraction_radii: tuple[float, ...]
    grid_m: int
    alpha_box: int
    tail_bound: float = 0.0
    certificate: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {}
        for alpha, value in self.coefficients.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n:
                raise LaurentError("multi-index length does not match n")
            if max(abs(a) for a in alpha) > self.alpha_box:
                raise LaurentError(f"alpha={alpha} outside alpha_box={self.alpha_box}")
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise LaurentError(f"non-finite coefficient at alpha={alpha}")
            coeffs[alpha] = value
        self.coefficients = {a: coeffs[a] for a in sorted(coeffs, key=shell_key)}
        self.extraction_radii = tuple(float(r) for r in self.extraction_radii)

    def __getitem__(self, alpha) -> complex:
        return self.coefficients.get(tuple(int(a) for a in alpha), 0j)

    def support(self) -> list[MultiIndex]:
        return list(self.coefficients)

    def to_json(self) -> dict:
        return {
            "coefficients": [
                {"alpha": list(a), "re": v.real, "im": v.imag} for a, v in self.coefficients.items()
            ],
            "metadata": {
                "n": self.n,
                "extraction_radii": list(self.extraction_radii),
                "grid_m": self.grid_m,
                "alpha_box": self.alpha_box,
                "tail_bound": self.tail_bound,
                "certificate": self.certificate,
                **self.metadata,
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "LaurentSeries":
        meta = dict(data["metadata"])
        coeffs = {tuple(c["alpha"]): complex(c["re"], c["im"]) for c in data["coefficients"]}
        known = ("n", "extraction_radii", "grid_m", "alpha_box", "tail_bound", "certificate")
        extra = {k: v for k, v in meta.items() if k not in known}
        return cls(
            n=int(meta["n"]),
            coefficients=coeffs,
            extraction_radii=tuple(meta["extraction_radii"]),
            grid_m=int(meta["grid_m"]),
            alpha_box=int(meta["alpha_box"]),
            tail_bound=float(meta.get("tail_bound", 0.0)),
            certificate=meta.get("certificate", {}),
            metadata=extra,
        )

    @classmethod
    def loads(cls, text: str) -> "LaurentSeries":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class BergmanWeight:
    """Weight |f|^p * lambda(r) dV.

    ``exponents`` describes a monomial weight prod r_j^{w_j}, which keeps the
    exact verdict available; ``radial_weight`` is any positive callable of
    the radii and forces the numeric test.
    """

    p: float = 2.0
    exponents: tuple[float, ...] | None = None
    radial_weight: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.p >= 1:
            raise LaurentError("Bergman exponent p must be >= 1")
        if self.exponents is not None and self.radial_weight is not None:
            raise LaurentError("give either monomial exponents or a radial weight, not both")

    def log_weight(self, x: np.ndarray) -> np.ndarray:
        """log lambda at log-radii x (rows)."""
        if self.radial_weight is not None:
            w = np.asarray(self.radial_weight(*np.exp(x).T), dtype=float)
            if np.any(w <= 0) or not np.all(np.isfinite(w)):
                raise LaurentError("radial weight must be positive and finite")
            return np.log(w)
        if self.exponents is None:
            return np.zeros(x.shape[0])
        return x @ np.asarray(self.exponents, dtype=float)


# -- extraction -----------------------------------------------------------


def torus_coefficients(f, n: int, radii, grid_m: int, precision: str = "double", threads: int = 1):
    """Full DFT array (normalized) and grid sup of f on the torus of ``radii``."""
    grid = TorusGrid(n, grid_m, tuple(radii), precision)
    g = sample(f, grid, threads)
    return g.coefficients(), g.sup()


def _box(n: int, alpha_box: int):
    return itertools.product(range(-alpha_box, alpha_box + 1), repeat=n)


def _radius_power(radii, alpha, precision: str):
    real = np.longdouble if precision == "extended" else np.float64
    out = real(1)
    for r, a in zip(radii, alpha):
        out = out * real(r) ** int(a)
    return out


def _probe_radii(domain: ReinhardtDomain | None, radii: np.ndarray) -> list[np.ndarray]:
    """Two extra tori next to ``radii``, shifted diagonally in log space."""
    n = radii.shape[0]
    depth = 0.2
    if domain is not None:
        x = np.log(radii)
        if domain.shadow.hull_vertices is not None:
            depth = -float(domain.shadow.slack(x)[0])
        elif domain.pieces:
            depth = max(-float(p.slack(x)[0]) for p in domain.pieces)
        if not depth > 0:
            raise DomainError("extraction torus is not inside the domain")
    delta = 0.5 * min(depth, 1.0) / math.sqrt(n)
    return [radii * math.exp(-delta), radii * math.exp(delta)]


def _check_box(alpha_box: int, grid_m: int) -> None:
    if alpha_box < 0:
        raise LaurentError("alpha_box must be nonnegative")
    if grid_m <= 2 * alpha_box:
        raise AliasingError(f"grid_m={grid_m} must exceed 2*alpha_box={2 * alpha_box}")


def laurent_coefficients(
    f,
    domain: ReinhardtDomain,
    alpha_box: int,
    grid_m: int,
    radii=None,
    *,
    precision: str = "double",
    threads: int = 1,
    strict: bool = True,
    consistency_tol: float = CONSISTENCY_TOL,
    certificate_tol: float = CERTIFICATE_TOL,
) -> LaurentSeries:
    """Laurent coefficients a_alpha for |alpha_j| <= alpha_box.

    Radii default to the Chebyshev centre of the shadow. Coefficients whose
    monomial is singular on the domain (alpha_j < 0 where the domain meets
    z_j = 0) must come out negligible and are then dropped. Values below the
    rounding floor of the transform are stored as exact zeros.
    """
    _check_box(alpha_box, grid_m)
    n = domain.n
    if radii is None:
        centre, _, _ = chebyshev_center(domain)
        r = np.exp(centre)
    else:
        r = np.broadcast_to(np.asarray(radii, dtype=float), (n,)).copy()
        if not contains(domain, r.astype(complex)):
            raise DomainError("extraction radii are not inside the domain")

    spectrum, sup_f = torus_coefficients(f, n, r, grid_m, precision, threads)
    eps = float(np.finfo(np.longdouble if precision == "extended" else np.float64).eps)
    floor = NOISE_FLOOR * eps * max(sup_f, 1e-300)
    allowed = smooth_monomial_set(domain, alpha_box)
    scale = max(1.0, sup_f)

    coeffs: dict[MultiIndex, complex] = {}
    worst_forbidden = (0.0, None)
    for alpha in _box(n, alpha_box):
        c = spectrum[tuple(a % grid_m for a in alpha)]
        size = float(abs(c))
        if alpha not in allowed:
            if size > worst_forbidden[0]:
                worst_forbidden = (size, alpha)
            continue
        if size <= floor:
            continue
        coeffs[alpha] = complex(c / _radius_power(r, alpha, precision))
    if worst_forbidden[0] > consistency_tol * scale:
        raise NonHolomorphicError(
            "coefficient of a monomial that is singular on the domain is not negligible",
            worst_forbidden[0] / scale,
            worst_forbidden[1],
        )

    certificate = _certificate(f, domain, r, alpha_box, grid_m, precision, threads, spectrum, sup_f)
    certificate["tol"] = certificate_tol
    certificate["passed"] = certificate["residual"] <= certificate_tol
    if strict and not certificate["passed"]:
        raise NonHolomorphicError(
            "coefficients depend on the torus radius", certificate["residual"], tuple(certificate["alpha"])
        )

    series = LaurentSeries(
        n=n,
        coefficients=coeffs,
        extraction_radii=tuple(r),
        grid_m=grid_m,
        alpha_box=alpha_box,
        certificate=certificate,
        metadata={"domain": domain.name, "precision": precision},
    )
    series.tail_bound = float(_tail_from_shells(_shell_sums(series, r)))
    return series


def _certificate(f, domain, r, alpha_box, grid_m, precision, threads, spectrum, sup_f) -> dict:
    """Compare low-order coefficients on three tori (relative to sup|f|)."""
    n = domain.n
    probe_box = min(alpha_box, 4)
    tori = [r] + _probe_radii(domain, r)
    spectra = [spectrum] + [
        torus_coefficients(f, n, t, grid_m, precision, threads)[0] for t in tori[1:]
    ]
    worst, where = 0.0, (0,) * n
    for alpha in _box(n, probe_box):
        slot = tuple(a % grid_m for a in alpha)
        values = [s[slot] / _radius_power(t, alpha, precision) for s, t in zip(spectra, tori)]
        unit = min(float(_radius_power(t, alpha, precision)) for t in tori)
        spread = max(float(abs(a - b)) for a, b in itertools.combinations(values, 2)) * unit
        if spread > worst:
            worst, where = spread, alpha
    return {
        "radii": [[float(v) for v in t] for t in tori],
        "residual": worst / max(1.0, sup_f),
        "alpha": list(where),
    }


def radius_independence_residual(
    f,
    domain: ReinhardtDomain | None,
    alpha: Sequence[int],
    radii_list: Sequence,
    grid_m: int,
    *,
    precision: str = "double",
    threads: int = 1,
) -> float:
    """max over pairs of tori of |a_alpha(r) - a_alpha(r')|."""
    alpha = tuple(int(a) for a in alpha)
    n = len(alpha)
    _check_box(max(abs(a) for a in alpha), grid_m)
    values = []
    for radii in radii_list:
        r = np.broadcast_to(np.asarray(radii, dtype=float), (n,)).copy()
        if domain is not None and not contains(domain, r.astype(complex)):
            raise DomainError(f"radii {r.tolist()} are not inside the domain")
        spectrum, _ = torus_coefficients(f, n, r, grid_m, precision, threads)
        values.append(spectrum[tuple(a % grid_m for a in alpha)] / _radius_power(r, alpha, precision))
    if len(values) < 2:
        return 0.0
    return max(float(abs(a - b)) for a, b in itertools.combinations(values, 2))


# -- evaluation -----------------------------------------------------------


@dataclass
class SeriesValue:
    value: complex | np.ndarray
    tail: float | np.ndarray
    diverging: bool | np.ndarray
    tail_exceeds_tol: bool | np.ndarray
    shell_sums: np.ndarray


def _shell_table(series: LaurentSeries):
    alphas = list(series.coefficients)
    if not alphas:
        return np.zeros((0, series.n), dtype=np.int64), np.zeros(0, complex), np.zeros(0, np.int64)
    exps = np.array(alphas, dtype=np.int64)
    coeffs = np.array([series.coefficients[a] for a in alphas], dtype=np.complex128)
    shells = np.max(np.abs(exps), axis=1)
    return exps, coeffs, shells


def _shell_sums(series: LaurentSeries, radii) -> np.ndarray:
    """sum over each shell of |a_alpha| r^alpha."""
    exps, coeffs, shells = _shell_table(series)
    out = np.zeros(series.alpha_box + 1)
    if exps.shape[0]:
        p = np.abs(coeffs) * np.prod(np.asarray(radii, dtype=float)[None, :] ** exps, axis=1)
        np.add.at(out, shells, p)
    return out


def _tail_from_shells(sums: np.ndarray) -> float:
    """Geometric extrapolation of the shell sums beyond the last shell.

    Returns inf when the last shells do not decay.
    """
    if sums.shape[0] == 0 or sums[-1] == 0.0:
        return 0.0
    last = sums[-3:]
    k = np.flatnonzero(last > 0)
    if k.shape[0] < 2:
        return math.inf
    ratios = [(last[b] / last[a]) ** (1.0 / (b - a)) for a, b in zip(k[:-1], k[1:])]
    q = max(ratios)
    if q >= 1.0:
        return math.inf
    return float(sums[-1] * q / (1.0 - q))


def evaluate_series(
    series: LaurentSeries,
    z,
    domain_hat: ReinhardtDomain | None = None,
    tol: float = 1e-8,
) -> SeriesValue:
    """Sum the stored terms at ``z`` (one point or rows of points).

    Terms are added shell by shell in the canonical order. The tail is a
    geometric extrapolation from the last three shell sums and is an
    estimate, not a bound.
    """
    Z = np.asarray(z, dtype=np.complex128)
    single = Z.ndim == 1
    Z = np.atleast_2d(Z)
    if Z.shape[1] != series.n:
        raise LaurentError("point dimension does not match the series")
    if domain_hat is not None:
        inside = np.atleast_1d(contains(domain_hat, Z))
        if not np.all(inside):
            bad = Z[int(np.flatnonzero(~inside)[0])]
            raise DomainError(f"point {bad.tolist()} is outside the domain")
    exps, coeffs, shells = _shell_table(series)
    if exps.shape[0]:
        negative = np.any(exps < 0, axis=0)
        if np.any((Z == 0) & negative[None, :]):
            raise LaurentError("point on a coordinate hyperplane where the series has negative powers")
    values, shell_abs = _kernels.series_shells(exps, coeffs, shells, series.alpha_box + 1, Z)
    tails = np.array([_tail_from_shells(row) for row in shell_abs])
    diverging = ~np.isfinite(tails)
    exceeds = tails > tol
    if single:
        return SeriesValue(complex(values[0]), float(tails[0]), bool(diverging[0]), bool(exceeds[0]), shell_abs[0])
    return SeriesValue(values, tails, diverging, exceeds, shell_abs)


# -- decay ----------------------------------------------------------------


@dataclass
class DecayReport:
    radii: tuple[float, ...]
    rows: list[dict]
    shell_max: np.ndarray
    slope: float
    decay_rate: float
    super_geometric: bool

    def to_csv(self, fh) -> None:
        n = len(self.radii)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"alpha{j + 1}" for j in range(n)] + ["shell", "p_K"])
        for row in self.rows:
            w.writerow(list(row["alpha"]) + [row["shell"], repr(row["p_K"])])


def coefficient_decay_report(series: LaurentSeries, K) -> DecayReport:
    """Table of |a_alpha| prod K_j^alpha_j and a log-linear fit against the shell.

    ``decay_rate`` is minus the fitted slope of log(max p per shell); for a
    geometric sequence it is the log of the ratio. ``super_geometric`` is set
    when the local rate in the last third of the shells exceeds the rate in
    the first third by half.
    """
    K = tuple(float(k) for k in np.broadcast_to(np.asarray(K, dtype=float), (series.n,)))
    rows = []
    shell_max = np.zeros(series.alpha_box + 1)
    for alpha, a in series.coefficients.items():
        p = abs(a) * math.prod(k**e for k, e in zip(K, alpha))
        s = max(abs(e) for e in alpha)
        rows.append({"alpha": alpha, "shell": s, "p_K": p})
        shell_max[s] = max(shell_max[s], p)
    k = np.flatnonzero(shell_max > 0)
    if k.shape[0] >= 2:
        slope = float(np.polyfit(k, np.log(shell_max[k]), 1)[0])
    else:
        slope = -math.inf if k.shape[0] else 0.0
    super_geo = False
    if k.shape[0] >= 6:
        third = k.shape[0] // 3
        logs = np.log(shell_max[k])
        early = -(logs[third] - logs[0]) / (k[third] - k[0])
        late = -(logs[-1] - logs[-1 - third]) / (k[-1] - k[-1 - third])
        super_geo = bool(late > 1.5 * max(early, 0.0) and late > 0)
    return DecayReport(K, rows, shell_max, slope, -slope, super_geo)


# -- mean value -----------------------------------------------------------


def _circle_points(m: int, tol: float, a: int, q: float) -> int:
    """Smallest power-of-two grid >= m that resolves the expansion of (z + rho e)^a."""
    if a >= 0:
        while m <= a:
            m *= 2
        return m
    k = -a
    while m < 1 << 16:
        # aliased term: binom(m + k - 1, m) q^m
        log_err = math.lgamma(m + k) - math.lgamma(m + 1) - math.lgamma(k) + m * math.log(q)
        if log_err < math.log(tol):
            break
        m *= 2
    return m


def circle_average(alpha: Sequence[int], z, rho, grid_m: int = 64) -> complex:
    """prod_j of the circle averages of w^alpha_j over |w - z_j| = rho_j.

    The grid per circle is doubled until the aliasing error is below
    rounding level.
    """
    alpha = tuple(int(a) for a in alpha)
    n = len(alpha)
    zc = np.broadcast_to(np.asarray(z, dtype=np.complex128), (n,))
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (n,))
    if np.any(rho <= 0):
        raise LaurentError("circle radii must be positive")
    out = 1.0 + 0j
    for a, zj, rj in zip(alpha, zc, rho):
        if a < 0 and not rj < abs(zj):
            raise LaurentError(
                f"negative exponent needs rho < |z| (rho={rj}, |z|={abs(zj)}); the average is not z^alpha there"
            )
        q = rj / abs(zj) if a < 0 else 0.0
        m = _circle_points(max(4, grid_m), 1e-17, a, q)
        w = zj + rj * np.exp(2j * np.pi * np.arange(m) / m)
        out *= complex(np.mean(_kernels.numpy_backend.ipow(w, a)))
    return out


# -- missing monomials ----------------------------------------------------


@dataclass
class MonomialVerdict:
    allowed: frozenset[MultiIndex]
    missing: frozenset[MultiIndex]
    indeterminate: frozenset[MultiIndex]
    method: str
    witnesses: dict = field(default_factory=dict)

    def to_rows(self) -> list[dict]:
        rows = []
        for alpha in sorted(self.allowed | self.missing | self.indeterminate, key=shell_key):
            state = "allowed" if alpha in self.allowed else "missing" if alpha in self.missing else "indeterminate"
            row = {"alpha": list(alpha), "verdict": state}
            if alpha in self.witnesses:
                row["witness"] = list(self.witnesses[alpha])
            rows.append(row)
        return rows


def _exact_integrable(alpha, rays_per_piece, weight: BergmanWeight) -> bool:
    """Every piece integrates e^{c.x} with c = p alpha + 2 + w iff c.d < 0 on its rays."""
    p = Fraction(weight.p).limit_denominator(10**6)
    w = weight.exponents or (0,) * len(alpha)
    c = [p * a + 2 + Fraction(wj).limit_denominator(10**6) for a, wj in zip(alpha, w)]
    for rays in rays_per_piece:
        if rays is None:
            return False
        for d in rays:
            if sum(ci * di for ci, di in zip(c, d)) >= 0:
                return False
    return True


def _numeric_integral(domain: ReinhardtDomain, alpha, weight: BergmanWeight, depth: float, step: float) -> float:
    """Midpoint rule for the log-space integral of e^{c.x} lambda over the shadow, x >= -depth."""
    n = domain.n
    if domain.pieces:
        hi = np.max(np.vstack([p.clipped_vertices() for p in domain.pieces]), axis=0)
    else:
        hi = np.max(domain.shadow.hull_vertices, axis=0)
    hi = np.minimum(hi, CLIP_DEPTH)
    axes = [np.arange(-depth + step / 2, h, step) for h in hi]
    X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    if domain.shadow.hull_vertices is not None:
        inside = domain.shadow.slack(X) < 0
    else:
        inside = np.zeros(X.shape[0], dtype=bool)
        for piece in domain.pieces:
            inside |= piece.slack(X) < 0
    X = X[inside]
    if X.shape[0] == 0:
        return 0.0
    c = weight.p * np.asarray(alpha, dtype=float) + 2.0
    log_terms = X @ c + weight.log_weight(X)
    top = float(np.max(log_terms))
    if top > 700:
        return math.inf
    return float(np.sum(np.exp(log_terms))) * step**n


def missing_monomials_bergman(
    domain: ReinhardtDomain,
    weight: BergmanWeight | None = None,
    alpha_box: int = 6,
    *,
    exact: bool | None = None,
) -> MonomialVerdict:
    """Which monomials z^alpha, |alpha_j| <= alpha_box, have finite weighted L^p norm?

    In log coordinates the norm is the integral of e^{c.x} lambda over the
    shadow with c = p alpha + 2 (+ weight exponents). For domains given by
    monomial bounds with a monomial weight the verdict is exact: the integral
    over each polyhedral piece is finite iff c.d < 0 for every extreme ray d
    of its recession cone. Otherwise the integral is truncated at depths
    4, 8, 16 and the growth of the increments decides.
    """
    weight = weight or BergmanWeight()
    n = domain.n
    box = list(_box(n, alpha_box))
    if exact is None:
        exact = bool(domain.pieces) and weight.radial_weight is None
    if exact:
        if not domain.pieces:
            raise LaurentError("exact verdict needs a domain given by monomial bounds")
        rays = [p.recession_rays() for p in domain.pieces]
        allowed = frozenset(a for a in box if _exact_integrable(a, rays, weight))
        return MonomialVerdict(allowed, frozenset(box) - allowed, frozenset(), "exact")
    allowed, missing, unsure = set(), set(), set()
    step = 1.0 / 16 if n <= 2 else 1.0 / 4
    for alpha in box:
        i4, i8, i16 = (_numeric_integral(domain, alpha, weight, d, step) for d in (4.0, 8.0, 16.0))
        if not math.isfinite(i16):
            missing.add(alpha)
            continue
        first, second = i8 - i4, i16 - i8
        if second <= first / DIVERGENCE_RATIO or second <= 1e-12 * i16:
            allowed.add(alpha)
        elif second >= DIVERGENCE_RATIO * first:
            missing.add(alpha)
        else:
            unsure.add(alpha)
    return MonomialVerdict(frozenset(allowed), frozenset(missing), frozenset(unsure), "numeric")


def closure_axis_contact(domain: ReinhardtDomain) -> tuple[bool, ...]:
    """Coordinates j for which the closure of the domain meets z_j = 0.

    That happens when the shadow is unbounded toward x_j = -inf, along a
    coordinate direction or any other recession ray.
    """
    n = domain.n
    contact = [j in domain.shadow.recession_directions or domain.axis_flags[j] for j in range(n)]
    for piece in domain.pieces:
        rays = piece.recession_rays()
        if rays is None:
            contact = [True] * n
            break
        for d in rays:
            for j in range(n):
                contact[j] = contact[j] or d[j] < 0
    return tuple(contact)


def missing_monomials_smooth_boundary(domain: ReinhardtDomain, alpha_box: int = 4) -> MonomialVerdict:
    """Monomials compatible with holomorphic functions smooth up to the boundary.

    Write alpha = beta - gamma with beta, gamma >= 0 of disjoint support. If
    gamma is nonzero on a coordinate whose hyperplane meets the closure, the
    monomial blows up at boundary points and is excluded, with gamma as the
    witness.
    """
    contact = closure_axis_contact(domain)
    allowed, missing, witnesses = set(), set(), {}
    for alpha in _box(domain.n, alpha_box):
        gamma = tuple(max(-a, 0) for a in alpha)
        if any(g > 0 and c for g, c in zip(gamma, contact)):
            missing.add(alpha)
            witnesses[alpha] = gamma
        else:
            allowed.add(alpha)
    return MonomialVerdict(frozenset(allowed), frozenset(missing), frozenset(), "smooth-boundary", witnesses)


def describe_constraint(verdict: MonomialVerdict, n: int) -> str:
    """Short label such as 'N^2' or 'Z x N' for a product-shaped allowed set."""
    parts = []
    for j in range(n):
        values = {a[j] for a in verdict.allowed}
        if not values:
            return "empty"
        parts.append("N" if min(values) >= 0 else "Z")
    if len(set(parts)) == 1:
        return parts[0] + (f"^{n}" if n > 1 else "")
    return " x ".join(parts)
