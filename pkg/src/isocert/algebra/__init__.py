"""Exact polynomial and rational-function arithmetic over Q."""
from .poly import (
    MultiPoly,
    PolyParseError,
    eval_rational,
    format_poly,
    m1,
    m2,
    m3,
    parse_poly,
    poly_arith,
    t,
)
from .ratfunc import RatFunc, rf_arith, rf_equal

__all__ = [
    "MultiPoly",
    "PolyParseError",
    "RatFunc",
    "eval_rational",
    "format_poly",
    "m1",
    "m2",
    "m3",
    "parse_poly",
    "poly_arith",
    "rf_arith",
    "rf_equal",
    "t",
]
