"""Command-line entry point: ``laurentlab <verb> [options]``.

Every run prints (or writes) one JSON report. Exit codes: 0 success,
2 mathematical failure (Morera FAIL, non-holomorphic input, failed
selftest, ...), 1 usage error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .domains import (
    DomainError,
    ReinhardtDomain,
    contains,
    domain_from_dsl,
    envelope,
    load_domain,
    log_convex_hull,
    same_hull,
    shadow_to_csv,
)
from .expr import ExpressionError, parse_function

COMMANDS = (
    "hull",
    "envelope",
    "laurent",
    "extend",
    "fejer",
    "missing",
    "morera-scan",
    "pompeiu",
    "goursat-trace",
    "selftest",
)
EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class UsageError(Exception):
    pass


class MathFailure(Exception):
    """Raised by a verb after its report is complete, to select exit code 2."""


@dataclass
class ExperimentConfig:
    command: str
    domain_spec: dict | None = None
    function_expr: str | None = None
    grid_m: int = 256
    alpha_box: int = 24
    tol: float = 1e-8
    seed: int = 0
    threads: int = 1
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.grid_m < 4 or self.grid_m & (self.grid_m - 1):
            raise UsageError("--grid-m must be a power of two >= 4")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.alpha_box < 0:
            raise UsageError("--alpha-box must be nonnegative")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.function_expr is not None:
            parse_function(self.function_expr)
        if self.domain_spec is not None:
            domain_from_dsl(self.domain_spec)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        return cls(**data)


def version_hash() -> str:
    """sha256 over the package sources and fixtures, in path order."""
    root = Path(__file__).parent
    h = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.suffix in (".py", ".json") and "__pycache__" not in path.parts:
            h.update(path.relative_to(root).as_posix().encode())
            h.update(path.read_bytes())
    return h.hexdigest()


# -- helpers ----------------------------------------------------------------


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse complex list {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _cpair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _domain(config: ExperimentConfig) -> ReinhardtDomain:
    if config.domain_spec is None:
        raise UsageError("this command needs --domain")
    return domain_from_dsl(config.domain_spec)


def _function(config: ExperimentConfig, n: int | None = None):
    if config.function_expr is None:
        raise UsageError("this command needs --fn")
    return parse_function(config.function_expr, n)


def _csv_path(csv_dir: str | None, name: str) -> Path | None:
    if csv_dir is None:
        return None
    path = Path(csv_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path / name


def _shadow_json(domain: ReinhardtDomain) -> dict:
    s = domain.shadow
    facets = s.facets if s.hull_vertices is not None else None
    return {
        "name": domain.name,
        "dimension": domain.n,
        "axis_flags": list(domain.axis_flags),
        "recession_directions": sorted(s.recession_directions),
        "hull_vertices": None if s.hull_vertices is None else s.hull_vertices.tolist(),
        "facets": None if facets is None else int(facets[0].shape[0]),
    }


# -- verbs ----------------------------------------------------------------------


def cmd_hull(config, csv_dir):
    dom = _domain(config)
    hull = log_convex_hull(dom.shadow)
    out = _csv_path(csv_dir, "shadow.csv")
    if out is not None:
        with out.open("w") as fh:
            shadow_to_csv(hull, fh)
    result = _shadow_json(ReinhardtDomain(hull, dom.axis_flags, name=dom.name))
    result["well_formed"] = dom.well_formed()
    return result


def cmd_envelope(config, csv_dir):
    dom = _domain(config)
    env = envelope(dom)
    again = envelope(env)
    out = _csv_path(csv_dir, "envelope.csv")
    if out is not None:
        with out.open("w") as fh:
            shadow_to_csv(env.shadow, fh)
    result = _shadow_json(env)
    result["idempotent"] = bool(same_hull(again.shadow, env.shadow, config.tol))
    result["tol"] = config.tol
    return result


def cmd_laurent(config, csv_dir):
    from .laurent import coefficient_decay_report, laurent_coefficients

    dom = _domain(config)
    f = _function(config, dom.n)
    radii = config.options.get("radii")
    series = laurent_coefficients(
        f,
        dom,
        config.alpha_box,
        config.grid_m,
        radii,
        precision=config.options.get("precision", "double"),
        threads=config.threads,
    )
    decay = coefficient_decay_report(series, series.extraction_radii)
    out = _csv_path(csv_dir, "decay.csv")
    if out is not None:
        with out.open("w") as fh:
            decay.to_csv(fh)
    return {
        "series": series.to_json(),
        "decay": {"slope": decay.slope, "decay_rate": decay.decay_rate, "super_geometric": decay.super_geometric},
    }


def cmd_extend(config, csv_dir):
    from .laurent import evaluate_series, laurent_coefficients

    dom = _domain(config)
    f = _function(config, dom.n)
    point = config.options.get("point")
    if point is None or len(point) != dom.n:
        raise UsageError(f"--point needs {dom.n} comma-separated coordinates")
    z = np.array([complex(*p) for p in point])
    series = laurent_coefficients(f, dom, config.alpha_box, config.grid_m, threads=config.threads)
    env = envelope(dom)
    if not contains(env, z):
        raise MathFailure(f"point {point} is outside the envelope")
    value = evaluate_series(series, z, env, tol=config.tol)
    result = {
        "point": point,
        "in_domain": bool(contains(dom, z)),
        "in_envelope": True,
        "value": _cpair(value.value),
        "tail_estimate": value.tail,
        "diverging": value.diverging,
        "tail_exceeds_tol": value.tail_exceeds_tol,
        "tol": config.tol,
        "certificate": series.certificate,
        "extraction_radii": list(series.extraction_radii),
    }
    if value.diverging or value.tail_exceeds_tol:
        result["verdict"] = "UNRELIABLE"
        raise MathFailure(result)
    result["verdict"] = "OK"
    return result


def cmd_fejer(config, csv_dir):
    from .torus_fourier import TorusGrid, cesaro_fejer_sum, fejer_kernel, sample, square_partial_sum

    f = _function(config, 1)
    N = int(config.options.get("N", 8))
    grid = TorusGrid(1, config.grid_m, (float(config.options.get("radius", 1.0)),))
    g = sample(f, grid, config.threads).values
    c = cesaro_fejer_sum(f, N, grid, threads=config.threads).values
    conv = cesaro_fejer_sum(f, N, grid, method="convolution", threads=config.threads).values
    s = square_partial_sum(f, N, grid, config.threads).values
    theta = grid.angles()
    kernel = fejer_kernel(N, theta[:, None])
    out = _csv_path(csv_dir, "fejer.csv")
    if out is not None:
        with out.open("w") as fh:
            fh.write("theta,f_re,f_im,C_re,C_im,S_re,S_im,kernel\n")
            for i, t in enumerate(theta):
                fh.write(
                    ",".join(
                        repr(float(v))
                        for v in (t, g[i].real, g[i].imag, c[i].real, c[i].imag, s[i].real, s[i].imag, kernel[i])
                    )
                    + "\n"
                )
    return {
        "N": N,
        "sup_error_cesaro": float(np.max(np.abs(c - g))),
        "sup_error_partial_sum": float(np.max(np.abs(s - g))),
        "methods_agree": float(np.max(np.abs(c - conv))),
        "cesaro_minus_partial_sum": float(np.max(np.abs(c - s))),
        "kernel_min": float(np.min(kernel)),
        "kernel_mean": float(np.mean(kernel)),
    }


def cmd_missing(config, csv_dir):
    from .laurent import (
        BergmanWeight,
        describe_constraint,
        missing_monomials_bergman,
        missing_monomials_smooth_boundary,
    )

    dom = _domain(config)
    kind = config.options.get("kind", "bergman")
    if kind == "bergman":
        verdict = missing_monomials_bergman(dom, BergmanWeight(p=float(config.options.get("p", 2.0))), config.alpha_box)
    elif kind == "smooth":
        verdict = missing_monomials_smooth_boundary(dom, config.alpha_box)
    else:
        raise UsageError("--kind must be 'bergman' or 'smooth'")
    rows = verdict.to_rows()
    out = _csv_path(csv_dir, "monomials.csv")
    if out is not None:
        with out.open("w") as fh:
            fh.write(",".join([f"alpha{j + 1}" for j in range(dom.n)] + ["verdict"]) + "\n")
            for row in rows:
                fh.write(",".join([str(a) for a in row["alpha"]] + [row["verdict"]]) + "\n")
    result = {
        "kind": kind,
        "method": verdict.method,
        "allowed": len(verdict.allowed),
        "missing": len(verdict.missing),
        "indeterminate": len(verdict.indeterminate),
        "constraint": describe_constraint(verdict, dom.n),
        "monomials": rows,
    }
    if verdict.indeterminate:
        raise MathFailure(result)
    return result


def _region(config) -> tuple[float, float, float, float]:
    region = config.options.get("region", [-0.5, 0.5, -0.5, 0.5])
    if len(region) != 4:
        raise UsageError("--region needs x0,x1,y0,y1")
    return tuple(region)


def cmd_morera_scan(config, csv_dir):
    from .morera import areolar_field, morera_test

    f = _function(config, 1)
    region = _region(config)
    tol = config.options.get("morera_tol")
    verdict = morera_test(f, region, int(config.options.get("budget", 192)), tol)
    out = _csv_path(csv_dir, "areolar.csv")
    if out is not None:
        k = int(config.options.get("field_points", 33))
        xs = np.linspace(region[0], region[1], k)
        ys = np.linspace(region[2], region[3], k)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        # anchor the equilateral probes so they stay inside the region
        h = 1e-3 * min(region[1] - region[0], region[3] - region[2])
        pts = (X - h * (X >= region[1] - h)) + 1j * (Y - h * (Y >= region[3] - h))
        field_values = np.abs(areolar_field(f, pts.ravel(), h)).reshape(X.shape)
        with out.open("w") as fh:
            fh.write("x,y,abs_areolar\n")
            for i in range(k):
                for j in range(k):
                    fh.write(f"{float(X[i, j])!r},{float(Y[i, j])!r},{float(field_values[i, j])!r}\n")
    result = {
        "verdict": "PASS" if verdict.passed else "FAIL",
        "worst_residual": verdict.worst_residual,
        "tol": verdict.tol,
        "sup_f": verdict.sup_f,
        "triangles_tested": verdict.triangles_tested,
        "worst_triangle": verdict.worst_triangle.to_json(),
        "witness": None if verdict.witness is None else _cpair(verdict.witness),
        "trace": None if verdict.trace is None else verdict.trace.to_json(),
    }
    if not verdict.passed:
        raise MathFailure(result)
    return result


def cmd_pompeiu(config, csv_dir):
    from .morera import areolar_derivative

    f = _function(config, 1)
    point = config.options.get("point")
    if point is None or len(point) != 1:
        raise UsageError("--point needs one complex coordinate")
    w = complex(*point[0])
    res = areolar_derivative(f, w, int(config.options.get("levels", 8)))
    result = {
        "point": _cpair(w),
        "areolar_derivative": _cpair(res.value),
        "dbar_estimate": _cpair(res.value / 2j),
        "richardson_error": res.error,
        "converged": res.converged,
        "quotients": [_cpair(q) for q in res.quotients],
    }
    if not res.converged:
        raise MathFailure(result)
    return result


def cmd_goursat_trace(config, csv_dir):
    from .morera import Triangle, goursat_subdivide

    f = _function(config, 1)
    verts = config.options.get("triangle", [[0, 0], [1, 0], [0, 1]])
    if len(verts) != 3:
        raise UsageError("--triangle needs three complex vertices")
    T = Triangle.oriented(*(complex(*v) for v in verts))
    trace = goursat_subdivide(f, T, int(config.options.get("depth", 20)))
    out = _csv_path(csv_dir, "goursat.csv")
    if out is not None:
        with out.open("w") as fh:
            fh.write("level,ax,ay,bx,by,cx,cy,ratio\n")
            for k, (t, r) in enumerate(zip(trace.triangles, trace.ratios)):
                coords = [c for v in t.to_json() for c in v]
                fh.write(",".join([str(k)] + [repr(c) for c in coords] + [repr(r)]) + "\n")
    return trace.to_json()


def cmd_selftest(config, csv_dir):
    from .acceptance import run_all

    results = run_all(config.threads)
    payload = {"criteria": [r.to_json() for r in results], "all_passed": all(r.passed for r in results)}
    if not payload["all_passed"]:
        raise MathFailure(payload)
    return payload


VERBS = {
    "hull": cmd_hull,
    "envelope": cmd_envelope,
    "laurent": cmd_laurent,
    "extend": cmd_extend,
    "fejer": cmd_fejer,
    "missing": cmd_missing,
    "morera-scan": cmd_morera_scan,
    "pompeiu": cmd_pompeiu,
    "goursat-trace": cmd_goursat_trace,
    "selftest": cmd_selftest,
}


# -- plumbing ---------------------------------------------------------------------


def run(config: ExperimentConfig, csv_dir: str | None = None, timestamp: bool = True) -> tuple[dict, int]:
    """Execute a validated config; returns (report, exit code)."""
    config.validate()
    started = time.perf_counter()
    code = EXIT_OK
    try:
        results = VERBS[config.command](config, csv_dir)
        status = "ok"
    except MathFailure as exc:
        payload = exc.args[0]
        results = payload if isinstance(payload, dict) else {"message": str(payload)}
        status, code = "failure", EXIT_MATH
    except (UsageError, ExpressionError) as exc:
        raise UsageError(str(exc)) from None
    except ArithmeticError as exc:
        results, status, code = {"error": type(exc).__name__, "message": str(exc)}, "failure", EXIT_MATH
    except ValueError as exc:
        # NonHolomorphicError, MoreraError, DomainError raised mid-computation
        info = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("residual", "alpha"):
            if hasattr(exc, attr):
                value = getattr(exc, attr)
                info[attr] = list(value) if isinstance(value, tuple) else value
        results, status, code = info, "failure", EXIT_MATH
    # thread count cannot change results, so it is reported with the run
    # environment rather than the config
    settings = config.to_json()
    threads = settings.pop("threads")
    report = {
        "command": config.command,
        "config": settings,
        "status": status,
        "results": results,
        "version": __version__,
        "version_hash": version_hash(),
        "backend": _kernels.BACKEND_NAME,
    }
    if timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
        report["wall_clock_s"] = time.perf_counter() - started
        report["threads"] = threads
    return report, code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="laurentlab", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--domain", help="domain DSL file or fixture name")
    parser.add_argument("--fn", help="function expression, e.g. '1/(2-z1-z2)'")
    parser.add_argument("--grid-m", type=int, default=256)
    parser.add_argument("--alpha-box", type=int, default=24)
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--csv-dir", help="directory for CSV side files")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--no-timestamp", action="store_true", help="omit timestamp, wall clock and thread count")
    parser.add_argument("--config", help="read an ExperimentConfig JSON (other flags ignored)")

    extra = parser.add_argument_group("verb options")
    extra.add_argument("--point", help="comma-separated complex coordinates, e.g. '0.6,0.3'")
    extra.add_argument("--radii", help="extraction radii for laurent")
    extra.add_argument("--precision", choices=("double", "extended"))
    extra.add_argument("-N", "--order", type=int, dest="N", help="Fejér order")
    extra.add_argument("--radius", type=float, help="circle radius for fejer")
    extra.add_argument("--kind", choices=("bergman", "smooth"))
    extra.add_argument("--p", type=float, help="Bergman exponent")
    extra.add_argument("--region", help="x0,x1,y0,y1 for morera-scan")
    extra.add_argument("--budget", type=int, help="triangles for morera-scan")
    extra.add_argument("--morera-tol", type=float, help="override the default scan tolerance")
    extra.add_argument("--triangle", help="three complex vertices for goursat-trace")
    extra.add_argument("--depth", type=int)
    extra.add_argument("--levels", type=int, help="shrink levels for pompeiu")
    return parser


def config_from_args(args) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_json(json.loads(Path(args.config).read_text()))
        if config.command != args.command:
            raise UsageError("config file is for a different command")
        return config
    domain_spec = None
    if args.domain:
        domain_spec = load_domain(args.domain).source
    options: dict = {}
    if args.point:
        options["point"] = [_cpair(z) for z in _complex_list(args.point)]
    if args.radii:
        options["radii"] = _float_list(args.radii)
    if args.region:
        options["region"] = _float_list(args.region)
    if args.triangle:
        options["triangle"] = [_cpair(z) for z in _complex_list(args.triangle)]
    for key in ("precision", "N", "radius", "kind", "p", "budget", "morera_tol", "depth", "levels"):
        value = getattr(args, key)
        if value is not None:
            options[key] = value
    return ExperimentConfig(
        command=args.command,
        domain_spec=domain_spec,
        function_expr=args.fn,
        grid_m=args.grid_m,
        alpha_box=args.alpha_box,
        tol=args.tol,
        seed=args.seed,
        threads=args.threads,
        options=options,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        report, code = run(config, args.csv_dir, timestamp=not args.no_timestamp)
    except (UsageError, ExpressionError, DomainError, FileNotFoundError, json.JSONDecodeError, TypeError) as exc:
        print(f"laurentlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report, indent=2, sort_keys=True, allow_nan=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "selftest":
        for row in report["results"].get("criteria", []):
            state = "PASS" if row["passed"] else "FAIL"
            print(f"[{state}] {row['number']:>2} {row['name']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
