"""Exact verification and reconstruction for Hom-Lie algebras and Hom-Lie algebroids."""
from .algebroid import HomAlgebroid, Section, apply_alpha, apply_anchor, bracket, check_axioms
from .cochains import AlphaStar, Basis, D, Evaluator, Function, PhiBar, Sum, Wedge, evaluate
from .config import RunConfig
from .equivalence import (
    DifferentialFamily,
    build_family,
    check_theorem_conditions,
    convert,
    reconstruct_anchor,
    reconstruct_bracket,
    round_trip,
)
from .homlie import HomLieAlgebra, Representation, VectorCochain
from .kernel import BaseGeometry, Poly, TwistedDerivation, apply_phi, parse_poly
from .report import CheckItem, Refusal, Report

__version__ = "0.1.0"
