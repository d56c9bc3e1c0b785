"""First-order Darboux transformations of bivariate linear partial differential operators."""
from .darboux import (ConditionReport, DarbouxResult, InvertibilityClass, Kernel,
                      LaplaceInvariants, check_condition, classify, construct,
                      construct_with_gauge, darboux_from_solution, laplace_invariants,
                      laplace_transformation, check_solution_family, verify_intertwining)
from .expr import Point, canonicalize, depends_only_on, diff, evaluate, is_zero, x, y
from .lpdo import (DX, DY, LPDO, ONE, Direction, Verdict, apply, compose, equal, gauge,
                   principal_symbol, right_divide)
from .syntax import ParseError, parse_expr, parse_operator, print_expr, print_operator
from .wronskian import WronskianSpec, wronskian, wronskian_operator

__all__ = [
    "ConditionReport", "DarbouxResult", "InvertibilityClass", "Kernel", "LaplaceInvariants",
    "check_condition", "classify", "construct", "construct_with_gauge", "darboux_from_solution",
    "laplace_invariants", "laplace_transformation", "check_solution_family", "verify_intertwining",
    "Point", "canonicalize", "depends_only_on", "diff", "evaluate", "is_zero", "x", "y",
    "DX", "DY", "LPDO", "ONE", "Direction", "Verdict", "apply", "compose", "equal", "gauge",
    "principal_symbol", "right_divide",
    "ParseError", "parse_expr", "parse_operator", "print_expr", "print_operator",
    "WronskianSpec", "wronskian", "wronskian_operator",
]
