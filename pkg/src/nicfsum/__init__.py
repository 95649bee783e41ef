"""Nearest-integer continued fractions, the Cantor set of expansions with
digits bounded by 5, and the decomposition ``x = u + v`` it allows."""

__version__ = "0.1.0"

from .exact import (
    QuadraticNumber,
    format_number,
    mobius_apply,
    parse_number,
    quad_cmp,
    quad_normalize,
    to_decimal,
)
from .contfrac import (
    CFExpansion,
    Periodic,
    cf_eval,
    convergents,
    format_cf,
    nicf_expand,
    parse_cf,
    rcf_expand,
    validate_nicf,
)
from .cantor import CantorTree, Interval, hole_decreasing_wrap, interval_sum
from .nicf5 import MU, c_nicf, locate, node_for_prefix, verify_table1
from .decompose import Decomposition, certify, decompose_core, decompose_real
from .nicf4 import build_table2, nicf4_extremes, verify_gap, verify_union_covers

__all__ = [
    "QuadraticNumber",
    "format_number",
    "mobius_apply",
    "parse_number",
    "quad_cmp",
    "quad_normalize",
    "to_decimal",
    "CFExpansion",
    "Periodic",
    "cf_eval",
    "convergents",
    "format_cf",
    "nicf_expand",
    "parse_cf",
    "rcf_expand",
    "validate_nicf",
    "CantorTree",
    "Interval",
    "hole_decreasing_wrap",
    "interval_sum",
    "MU",
    "c_nicf",
    "locate",
    "node_for_prefix",
    "verify_table1",
    "Decomposition",
    "certify",
    "decompose_core",
    "decompose_real",
    "build_table2",
    "nicf4_extremes",
    "verify_gap",
    "verify_union_covers",
]
