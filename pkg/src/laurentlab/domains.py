"""Reinhardt domains through their logarithmic shadows.

A Reinhardt domain is stored as the image of its off-axis part under
``z -> (log|z_1|, ..., log|z_n|)`` plus one flag per coordinate saying
whether the domain meets ``{z_j = 0}``. Shadows that run off to ``-inf`` in
coordinate ``j`` carry ``j`` in ``recession_directions`` instead of points at
infinity; everything else is a finite point cloud whose convex hull is
computed exactly (monotone chain for n = 2, Qhull for n = 3).

Domains built from the JSON description also keep their defining monomial
bounds (``pieces``) so membership in the original, possibly non-convex,
domain can be decided exactly.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from . import _kernels

MultiIndex = tuple[int, ...]

GEOM_EPS = 1e-9
CLIP_DEPTH = 24.0
DEPTH_WINDOW = math.log(4.0)
MAX_DIMENSION = 3
_AXIS_PROBE = -1e6


class DomainError(ValueError):
    pass


def log_map(z) -> np.ndarray:
    """(log|z_1|, ..., log|z_n|) for a point (or rows of points) off the axes."""
    z = np.asarray(z, dtype=np.complex128)
    r = np.abs(z)
    if np.any(r == 0.0):
        raise DomainError("log map undefined on the coordinate hyperplanes")
    return np.log(r)


# -- convex pieces --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Piece:
    """Open convex log-polyhedron ``{x : <alpha_i, x> < log c_i}``.

    Each row is one monomial bound ``|z^alpha_i| < c_i``.
    """

    exponents: np.ndarray
    log_bounds: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.exponents))
        if A.size and np.any(~A.any(axis=1)):
            raise DomainError("monomial bound with zero exponent")
        object.__setattr__(self, "exponents", A)
        object.__setattr__(self, "log_bounds", np.asarray(self.log_bounds, dtype=np.float64))

    @property
    def dimension(self) -> int:
        return self.exponents.shape[1]

    @cached_property
    def _normalized(self):
        A = self.exponents.astype(np.float64)
        norms = np.linalg.norm(A, axis=1)
        return A / norms[:, None], self.log_bounds / norms

    def slack(self, x) -> np.ndarray:
        """Largest normalized constraint value; negative means inside."""
        normals, offsets = self._normalized
        return _kernels.polytope_slack(np.atleast_2d(x), normals, offsets)

    @cached_property
    def recession_coords(self) -> frozenset[int]:
        """Coordinates j with -e_j in the recession cone (all alpha_j >= 0)."""
        return frozenset(j for j in range(self.dimension) if np.all(self.exponents[:, j] >= 0))

    def recession_rays(self) -> tuple[tuple[int, ...], ...] | None:
        """Extreme rays of ``{d : A d <= 0}`` as primitive integer vectors.

        Returns ``None`` when the cone contains a line. An empty tuple means
        the shadow is bounded.
        """
        A = self.exponents.astype(np.int64)
        n = self.dimension
        if A.shape[0] == 0 or np.linalg.matrix_rank(A) < n:
            return None
        if n == 1:
            rays = [d for d in ((1,), (-1,)) if np.all(A[:, 0] * d[0] <= 0)]
            return tuple(rays)
        rays: set[tuple[int, ...]] = set()
        for rows in itertools.combinations(range(A.shape[0]), n - 1):
            d = _integer_null_vector(A[list(rows)])
            if d is None:
                continue
            for s in (1, -1):
                cand = tuple(int(s * v) for v in d)
                if np.all(A @ np.array(cand) <= 0):
                    rays.add(cand)
        return tuple(sorted(rays))

    def clipped_vertices(self, clip: float = CLIP_DEPTH) -> np.ndarray:
        """Vertices of the closure intersected with the box [-clip, clip]^n."""
        n = self.dimension
        A = self.exponents.astype(np.float64)
        rows = [(A[i], self.log_bounds[i]) for i in range(A.shape[0])]
        for j in range(n):
            e = np.zeros(n)
            e[j] = 1.0
            rows.append((e, clip))
            rows.append((-e, clip))
        M = np.array([r[0] for r in rows])
        b = np.array([r[1] for r in rows])
        scale = np.linalg.norm(M, axis=1)
        found = []
        for combo in itertools.combinations(range(len(rows)), n):
            sub = M[list(combo)]
            if abs(np.linalg.det(sub)) < 1e-12:
                continue
            x = np.linalg.solve(sub, b[list(combo)])
            if np.all(M @ x - b <= 1e-9 * scale * (1.0 + np.abs(b))):
                found.append(x)
        if not found:
            raise DomainError("monomial bounds describe an empty set")
        V = np.unique(np.round(np.array(found), 12), axis=0)
        return V

    def extended(self, j: int) -> "Piece":
        """The piece swept along -e_j, by eliminating the sweep length t >= 0.

        Rows with alpha_j > 0 bound t from above, rows with alpha_j < 0 from
        below; each (upper, lower) pair yields one combined row.
        """
        A, b = self.exponents, self.log_bounds
        pos = [i for i in range(A.shape[0]) if A[i, j] > 0]
        neg = [i for i in range(A.shape[0]) if A[i, j] < 0]
        keep = [i for i in range(A.shape[0]) if A[i, j] >= 0]
        rows = [A[i].copy() for i in keep]
        rhs = [float(b[i]) for i in keep]
        for p in pos:
            for q in neg:
                cp, cq = int(A[p, j]), int(-A[q, j])
                row = cq * A[p] + cp * A[q]
                if not np.any(row):
                    continue
                g = math.gcd(*[int(abs(v)) for v in row if v])
                rows.append(row // g)
                rhs.append((cq * b[p] + cp * b[q]) / g)
        if not rows:
            return Piece(np.zeros((0, A.shape[1]), dtype=np.int64), np.zeros(0))
        return Piece(np.array(rows, dtype=np.int64), np.array(rhs))

    def to_bounds(self) -> list[dict]:
        return [
            {"alpha": [int(v) for v in row], "lt": float(math.exp(c))}
            for row, c in zip(self.exponents, self.log_bounds)
        ]


def _integer_null_vector(rows: np.ndarray) -> tuple[int, ...] | None:
    n = rows.shape[1]
    if n == 2:
        a = rows[0]
        d = (-int(a[1]), int(a[0]))
    elif n == 3:
        a, b = rows
        d = tuple(int(v) for v in np.cross(a, b))
    else:  # pragma: no cover - dimension is capped at 3
        raise DomainError("rays only implemented for n <= 3")
    if not any(d):
        return None
    g = math.gcd(*[abs(v) for v in d if v])
    return tuple(v // g for v in d)


# -- shadows and domains --------------------------------------------------


@dataclass(frozen=True, eq=False)
class LogShadow:
    dimension: int
    points: np.ndarray
    hull_vertices: np.ndarray | None = None
    recession_directions: frozenset[int] = frozenset()

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if self.dimension < 1:
            raise DomainError("dimension must be at least 1")
        if pts.shape[0] == 0 or pts.shape[1] != self.dimension:
            raise DomainError("shadow needs at least one point of the right dimension")
        if not np.all(np.isfinite(pts)):
            raise DomainError("shadow points must be finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "recession_directions", frozenset(self.recession_directions))
        if self.hull_vertices is not None:
            hv = np.atleast_2d(np.asarray(self.hull_vertices, dtype=np.float64))
            if not np.all(np.isfinite(hv)):
                raise DomainError("hull vertices must be finite")
            object.__setattr__(self, "hull_vertices", hv)

    @cached_property
    def facets(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Outward unit normals and offsets of hull + recession cone.

        ``None`` if the set has empty interior.
        """
        if self.hull_vertices is None:
            raise DomainError("hull not computed; call log_convex_hull first")
        return _facets(self.hull_vertices, self.recession_directions, self.dimension)

    def slack(self, x) -> np.ndarray:
        """Signed distance-like slack of points to hull + cone (<= 0 inside the closure)."""
        f = self.facets
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if f is None:
            return np.full(x.shape[0], np.inf)
        return _kernels.polytope_slack(x, f[0], f[1])


@dataclass(frozen=True, eq=False)
class ReinhardtDomain:
    shadow: LogShadow
    axis_flags: tuple[bool, ...]
    pieces: tuple[Piece, ...] = ()
    name: str = ""
    source: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        flags = tuple(bool(f) for f in self.axis_flags)
        if len(flags) != self.shadow.dimension:
            raise DomainError("axis_flags length must equal the dimension")
        object.__setattr__(self, "axis_flags", flags)
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def n(self) -> int:
        return self.shadow.dimension

    def well_formed(self) -> bool:
        """Axis contact in coordinate j implies recession toward z_j = 0."""
        rec = self.shadow.recession_directions
        return all(j in rec for j, f in enumerate(self.axis_flags) if f)


def _facets(V: np.ndarray, rec: frozenset[int], n: int):
    if n == 1:
        normals, offsets = [[1.0]], [V[:, 0].max()]
        if 0 not in rec:
            normals.append([-1.0])
            offsets.append(-V[:, 0].min())
        return np.array(normals), np.array(offsets)
    span = float(np.ptp(V, axis=0).max()) if V.shape[0] > 1 else 0.0
    B = 4.0 * (span + 1.0)
    shifted = [V] + [V - B * np.eye(n)[j] for j in sorted(rec)]
    W = np.unique(np.vstack(shifted), axis=0)
    if n == 2:
        idx = _kernels.monotone_chain(W)
        if idx.shape[0] < 3:
            return None
        P = W[idx]
        Q = np.roll(P, -1, axis=0)
        edge = Q - P
        normals = np.column_stack([edge[:, 1], -edge[:, 0]])
        norms = np.linalg.norm(normals, axis=1)
        normals = normals / norms[:, None]
        offsets = np.einsum("ij,ij->i", normals, P)
    else:
        try:
            hull = ConvexHull(W)
        except QhullError:
            return None
        normals = hull.equations[:, :-1]
        offsets = -hull.equations[:, -1]
    keep = np.ones(normals.shape[0], dtype=bool)
    for j in rec:
        keep &= normals[:, j] >= -1e-12
    normals, offsets = normals[keep], offsets[keep]
    order = np.lexsort(np.column_stack([offsets, normals]).T[::-1])
    return normals[order], offsets[order]


def _extreme_points(points: np.ndarray) -> np.ndarray:
    n = points.shape[1]
    P = np.unique(points, axis=0)
    if P.shape[0] <= 1:
        return P
    if n == 1:
        return np.unique(np.array([[P[:, 0].min()], [P[:, 0].max()]]), axis=0)
    if n == 2:
        return _canonical(P[_kernels.monotone_chain(P)])
    centred = P - P.mean(axis=0)
    _, s, vt = np.linalg.svd(centred, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * max(1.0, s[0])))
    if rank < n:
        coords = centred @ vt[:rank].T
        return _canonical(P[_extreme_indices(coords)])
    hull = ConvexHull(P)
    return _canonical(P[hull.vertices])


def _extreme_indices(coords: np.ndarray) -> np.ndarray:
    k = coords.shape[1]
    if k == 0:
        return np.array([0])
    if k == 1:
        return np.unique([int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))])
    return _kernels.monotone_chain(coords)


def _canonical(V: np.ndarray) -> np.ndarray:
    return V[np.lexsort(V.T[::-1])]


def _prune(V: np.ndarray, rec: frozenset[int]) -> np.ndarray:
    """Drop generators that are not extreme once the recession cone is added."""
    if not rec or V.shape[0] <= 1:
        return V
    n = V.shape[1]
    if n == 1:
        return V[[int(np.argmax(V[:, 0]))]]
    span = float(np.ptp(V, axis=0).max())
    B = 4.0 * (span + 1.0)
    W = np.vstack([V] + [V - B * np.eye(n)[j] for j in sorted(rec)])
    if n == 2:
        idx = _kernels.monotone_chain(W)
    else:
        try:
            idx = ConvexHull(W).vertices
        except QhullError:
            return V
    keep = np.unique(idx[idx < V.shape[0]])
    return _canonical(V[keep])


# -- constructors ---------------------------------------------------------


def domain_from_points(
    points,
    axis_flags: Sequence[bool] | None = None,
    recession: Iterable[int] = (),
    name: str = "",
) -> ReinhardtDomain:
    """Domain given by a raw sample of its logarithmic shadow."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    pts = np.unique(pts, axis=0)
    n = pts.shape[1]
    if n > MAX_DIMENSION:
        raise DomainError(f"supported dimension is n <= {MAX_DIMENSION}")
    flags = tuple(axis_flags) if axis_flags is not None else (False,) * n
    shadow = LogShadow(n, pts, recession_directions=frozenset(recession))
    return ReinhardtDomain(shadow, flags, name=name)


def domain_from_dsl(spec: dict) -> ReinhardtDomain:
    """Build a domain from the JSON description.

    ``bounds`` is a list of ``{"alpha": [...], "lt": c}`` meaning
    ``|z^alpha| < c``; a union of such conjunctions goes under ``pieces``.
    """
    try:
        n = int(spec["n"])
    except (KeyError, TypeError, ValueError):
        raise DomainError("domain description needs an integer 'n'") from None
    if not 1 <= n <= MAX_DIMENSION:
        raise DomainError(f"supported dimension is 1 <= n <= {MAX_DIMENSION}")
    if "pieces" in spec:
        groups = [p["bounds"] for p in spec["pieces"]]
    elif "bounds" in spec:
        groups = [spec["bounds"]]
    else:
        raise DomainError("domain description needs 'bounds' or 'pieces'")
    pieces = []
    for bounds in groups:
        rows, logs = [], []
        for bound in bounds:
            alpha = [int(a) for a in bound["alpha"]]
            c = float(bound["lt"])
            if len(alpha) != n:
                raise DomainError("bound exponent length must equal n")
            if c <= 0:
                raise DomainError("bound constants must be positive")
            rows.append(alpha)
            logs.append(math.log(c))
        if not rows:
            raise DomainError("each piece needs at least one bound")
        pieces.append(Piece(np.array(rows, dtype=np.int64), np.array(logs)))

    per_face = int(spec.get("samples_per_face", 4))
    points = np.vstack([_piece_samples(p, per_face) for p in pieces])
    recession = frozenset().union(*(p.recession_coords for p in pieces))
    if spec.get("axis_flags") is not None:
        flags = tuple(bool(f) for f in spec["axis_flags"])
    else:
        flags = tuple(j in recession for j in range(n))
    shadow = LogShadow(n, np.unique(points, axis=0), recession_directions=recession)
    return ReinhardtDomain(
        shadow, flags, tuple(pieces), name=str(spec.get("name", "")), source=dict(spec)
    )


def load_domain(path) -> ReinhardtDomain:
    """Read a domain description from a JSON file or a bundled fixture name."""
    p = Path(path)
    if not p.exists():
        fixture = Path(__file__).with_name("fixtures") / f"{path}.json"
        if not fixture.exists():
            raise DomainError(f"no such domain file or fixture: {path}")
        p = fixture
    with open(p) as fh:
        spec = json.load(fh)
    return domain_from_dsl(spec)


def _piece_samples(piece: Piece, per_face: int) -> np.ndarray:
    V = piece.clipped_vertices()
    samples = [V]
    if per_face <= 0 or V.shape[0] < 2:
        return V
    n = piece.dimension
    normals, offsets = piece._normalized
    box = [(np.eye(n)[j], CLIP_DEPTH) for j in range(n)] + [
        (-np.eye(n)[j], CLIP_DEPTH) for j in range(n)
    ]
    faces = [(normals[i], offsets[i]) for i in range(normals.shape[0])] + box
    ts = np.arange(1, per_face + 1) / (per_face + 1)
    for a, c in faces:
        on = V[np.abs(V @ a - c) <= 1e-9 * (1.0 + abs(c))]
        if on.shape[0] < 2:
            continue
        centre = on.mean(axis=0)
        for w in on:
            samples.append(centre + ts[:, None] * (w - centre))
    return np.vstack(samples)


# -- hulls, completion, envelope ------------------------------------------


def log_convex_hull(shadow: LogShadow) -> LogShadow:
    """Shadow with hull_vertices set to the extreme points of its point cloud."""
    vertices = _prune(_extreme_points(shadow.points), shadow.recession_directions)
    return LogShadow(
        shadow.dimension,
        shadow.points,
        hull_vertices=vertices,
        recession_directions=shadow.recession_directions,
    )


def relative_completion(domain: ReinhardtDomain) -> ReinhardtDomain:
    """Complete the domain toward every hyperplane {z_j = 0} it meets."""
    wanted = {j for j, f in enumerate(domain.axis_flags) if f}
    if wanted <= domain.shadow.recession_directions and all(
        wanted <= p.recession_coords for p in domain.pieces
    ):
        return domain
    rec = domain.shadow.recession_directions | wanted
    hv = domain.shadow.hull_vertices
    shadow = replace(
        domain.shadow,
        hull_vertices=None if hv is None else _prune(hv, rec),
        recession_directions=rec,
    )
    pieces = []
    for piece in domain.pieces:
        for j in sorted(wanted - piece.recession_coords):
            piece = piece.extended(j)
        pieces.append(piece)
    return ReinhardtDomain(shadow, domain.axis_flags, tuple(pieces), domain.name)


def envelope(domain: ReinhardtDomain) -> ReinhardtDomain:
    """Smallest relatively complete log-convex Reinhardt domain containing ``domain``."""
    hulled = ReinhardtDomain(
        log_convex_hull(domain.shadow),
        domain.axis_flags,
        name=f"envelope({domain.name})" if domain.name else "",
    )
    return relative_completion(hulled)


def same_hull(a: LogShadow, b: LogShadow, tol: float = 1e-9) -> bool:
    """Hull vertex sets and recession directions agree (order-free)."""
    if a.hull_vertices is None or b.hull_vertices is None:
        raise DomainError("both shadows need computed hulls")
    if a.recession_directions != b.recession_directions:
        return False
    A, B = _canonical(a.hull_vertices), _canonical(b.hull_vertices)
    return A.shape == B.shape and bool(np.all(np.abs(A - B) <= tol))


# -- membership -----------------------------------------------------------


def contains(domain: ReinhardtDomain, z, eps: float = GEOM_EPS):
    """Membership of one point (returns bool) or rows of points (bool array).

    Uses the hull + recession cone when the shadow has a hull, otherwise the
    exact monomial bounds. Points on a coordinate hyperplane are judged by
    the limit along the recession direction.
    """
    z = np.asarray(z, dtype=np.complex128)
    single = z.ndim == 1
    Z = np.atleast_2d(z)
    if Z.shape[1] != domain.n:
        raise DomainError("point dimension does not match the domain")
    r = np.abs(Z)
    zero = r == 0.0
    flags = np.array(domain.axis_flags)
    allowed = ~np.any(zero & ~flags[None, :], axis=1)
    x = np.where(zero, 0.0, np.log(np.where(zero, 1.0, r)))
    x = np.where(zero, _AXIS_PROBE, x)

    if domain.shadow.hull_vertices is not None:
        inside = domain.shadow.slack(x) < -eps
    elif domain.pieces:
        inside = np.zeros(Z.shape[0], dtype=bool)
        for piece in domain.pieces:
            ok = piece.slack(x) < -eps
            if np.any(zero):
                rc = np.array([j in piece.recession_coords for j in range(domain.n)])
                ok &= ~np.any(zero & ~rc[None, :], axis=1)
            inside |= ok
    else:
        raise DomainError("hull not computed; call log_convex_hull or envelope first")
    if domain.shadow.hull_vertices is not None and np.any(zero):
        rc = np.array([j in domain.shadow.recession_directions for j in range(domain.n)])
        inside &= ~np.any(zero & ~rc[None, :], axis=1)
    result = inside & allowed
    return bool(result[0]) if single else result


def monomial_hull_membership(K, zeta, alpha_box: int, tol: float = 1e-12) -> bool:
    """Does ``zeta`` satisfy |z^alpha| <= max_K |z^alpha| for all |alpha_j| <= alpha_box?"""
    X = log_map(np.atleast_2d(np.asarray(K, dtype=np.complex128)))
    y = log_map(np.asarray(zeta, dtype=np.complex128).reshape(-1))
    n = X.shape[1]
    alphas = np.array(list(itertools.product(range(-alpha_box, alpha_box + 1), repeat=n)))
    lhs = alphas @ y
    rhs = np.max(alphas @ X.T, axis=1)
    scale = 1.0 + np.abs(rhs)
    return bool(np.all(lhs <= rhs + tol * scale))


def smooth_monomial_set(domain: ReinhardtDomain, box: int) -> frozenset[MultiIndex]:
    """Exponents with |alpha_j| <= box whose monomial is smooth on the domain."""
    if box < 0:
        raise DomainError("box must be nonnegative")
    ranges = [
        range(0, box + 1) if flag else range(-box, box + 1) for flag in domain.axis_flags
    ]
    return frozenset(itertools.product(*ranges))


# -- extraction radius ----------------------------------------------------


def _shadow_extent(domain: ReinhardtDomain) -> tuple[np.ndarray, np.ndarray]:
    if domain.pieces:
        V = np.vstack([p.clipped_vertices() for p in domain.pieces])
    elif domain.shadow.hull_vertices is not None:
        V = domain.shadow.hull_vertices
    else:
        V = domain.shadow.points
    lo, hi = V.min(axis=0), V.max(axis=0)
    for j in domain.shadow.recession_directions:
        lo[j] = -CLIP_DEPTH
    return lo, hi


def _window_rows(domain: ReinhardtDomain, window: float):
    lo, hi = _shadow_extent(domain)
    rows, rhs = [], []
    n = domain.n
    for j in range(n):
        e = np.eye(n)[j]
        down = lo[j] <= -CLIP_DEPTH + 1e-9
        up = hi[j] >= CLIP_DEPTH - 1e-9
        if down and up:
            a, b = -window / 2, window / 2
        elif down:
            a, b = hi[j] - window, hi[j]
        elif up:
            a, b = lo[j], lo[j] + window
        else:
            continue
        rows += [e, -e]
        rhs += [b, -a]
    return rows, rhs


def chebyshev_center(domain: ReinhardtDomain, window: float = DEPTH_WINDOW):
    """Deepest point of the shadow (log coordinates), its depth and piece index.

    Coordinates in which the shadow is unbounded are cut to a slab of width
    ``window`` next to the finite end. Among the deepest points the midpoint
    of their bounding box is returned so the answer does not depend on which
    optimal vertex the LP solver lands on.
    """
    extra_rows, extra_rhs = _window_rows(domain, window)
    if domain.pieces:
        systems = [p._normalized for p in domain.pieces]
    else:
        f = domain.shadow.facets if domain.shadow.hull_vertices is not None else None
        if f is None:
            raise DomainError("shadow has no interior (or no hull computed)")
        systems = [f]
    best = None
    for index, (normals, offsets) in enumerate(systems):
        M = np.vstack([normals] + [np.atleast_2d(r) for r in extra_rows]) if extra_rows else normals
        b = np.concatenate([offsets, np.array(extra_rhs, dtype=float)])
        centre, depth = _chebyshev_lp(M, b)
        if centre is None:
            continue
        if best is None or depth > best[1] * (1 + 1e-9) + 1e-12:
            best = (centre, depth, index)
    if best is None or best[1] <= 0:
        raise DomainError("shadow has empty interior")
    return best


def _chebyshev_lp(M: np.ndarray, b: np.ndarray):
    n = M.shape[1]
    norms = np.linalg.norm(M, axis=1)
    A_ub = np.hstack([M, norms[:, None]])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * n + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status != 0:
        return None, 0.0
    depth = float(res.x[-1])
    # box of optimal centres
    A2 = np.vstack([A_ub, -np.eye(n + 1)[-1]])
    b2 = np.concatenate([b, [-(depth - 1e-12 * (1.0 + depth))]])
    lo, hi = np.empty(n), np.empty(n)
    for j in range(n):
        cj = np.zeros(n + 1)
        cj[j] = 1.0
        r1 = linprog(cj, A_ub=A2, b_ub=b2, bounds=bounds, method="highs")
        r2 = linprog(-cj, A_ub=A2, b_ub=b2, bounds=bounds, method="highs")
        lo[j] = r1.x[j] if r1.status == 0 else res.x[j]
        hi[j] = r2.x[j] if r2.status == 0 else res.x[j]
    return 0.5 * (lo + hi), depth


def extraction_radii(domain: ReinhardtDomain, window: float = DEPTH_WINDOW) -> np.ndarray:
    centre, _, _ = chebyshev_center(domain, window)
    return np.exp(centre)


# -- sampling and export --------------------------------------------------


def sample_interior(domain: ReinhardtDomain, count: int, seed: int = 0, margin: float = 1e-3):
    """Random points strictly inside the domain (off the axes)."""
    rng = np.random.default_rng(seed)
    if domain.pieces:
        V = np.vstack([p.clipped_vertices() for p in domain.pieces])
    elif domain.shadow.hull_vertices is not None:
        V = domain.shadow.hull_vertices
    else:
        raise DomainError("domain has neither pieces nor a hull")
    lo, hi = V.min(axis=0), V.max(axis=0)
    for j in domain.shadow.recession_directions:
        lo[j] = -CLIP_DEPTH
    # sampling deep into unbounded directions only produces tiny moduli
    lo = np.maximum(lo, -8.0)
    hi = np.maximum(hi, lo + 1e-6)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 1000:
            raise DomainError("could not sample interior points")
        x = rng.uniform(lo, hi, size=(4 * count, domain.n))
        z = np.exp(x) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=x.shape))
        ok = contains(domain, z, eps=margin)
        out.extend(z[ok])
    return np.array(out[:count])


def shadow_to_csv(shadow: LogShadow, fh) -> None:
    rows = shadow.hull_vertices if shadow.hull_vertices is not None else shadow.points
    names = [f"x{j + 1}" for j in range(shadow.dimension)]
    fh.write(",".join(names) + "\n")
    for row in rows:
        fh.write(",".join(repr(float(v)) for v in row) + "\n")
