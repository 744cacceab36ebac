"""Laurent series, envelopes and Morera tests on Reinhardt domains."""
from __future__ import annotations

__version__ = "0.1.0"

from .domains import (
    DomainError,
    ReinhardtDomain,
    contains,
    domain_from_dsl,
    envelope,
    load_domain,
    log_convex_hull,
    relative_completion,
)
from .expr import ExpressionError, parse_function
from .laurent import (
    BergmanWeight,
    LaurentSeries,
    NonHolomorphicError,
    evaluate_series,
    laurent_coefficients,
    missing_monomials_bergman,
    missing_monomials_smooth_boundary,
)
from .morera import Triangle, areolar_derivative, contour_integral, goursat_subdivide, morera_test
from .torus_fourier import TorusGrid, cesaro_fejer_sum, fejer_kernel, fourier_component

__all__ = [
    "BergmanWeight",
    "DomainError",
    "ExpressionError",
    "LaurentSeries",
    "NonHolomorphicError",
    "ReinhardtDomain",
    "TorusGrid",
    "Triangle",
    "areolar_derivative",
    "cesaro_fejer_sum",
    "contains",
    "contour_integral",
    "domain_from_dsl",
    "envelope",
    "evaluate_series",
    "fejer_kernel",
    "fourier_component",
    "goursat_subdivide",
    "laurent_coefficients",
    "load_domain",
    "log_convex_hull",
    "missing_monomials_bergman",
    "missing_monomials_smooth_boundary",
    "morera_test",
    "parse_function",
    "relative_completion",
]
