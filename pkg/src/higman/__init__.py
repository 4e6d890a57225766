"""Finite p-quotients of the Higman group H(k) via a noncommutative rewriting system."""

from .gamma import GammaGroup, jacobson_check, zs_check
from .ncpoly import Poly, PolyRing, format_poly, parse_poly
from .rewrite import Context, RuleSystem, build_relators, build_rules
from .zappa import HTilde
from .zmod import KExp, Modulus, Residue

__version__ = "0.1.0"

__all__ = [
    "Context",
    "GammaGroup",
    "HTilde",
    "KExp",
    "Modulus",
    "Poly",
    "PolyRing",
    "Residue",
    "RuleSystem",
    "build_relators",
    "build_rules",
    "format_poly",
    "jacobson_check",
    "parse_poly",
    "zs_check",
    "__version__",
]
