"""Exact polynomial and rational-function arithmetic over Q."""

from .errors import (BudgetExceeded, ParseError, PolycoreError, UnboundVariableError,
                     ZeroFunctionDivision)
from .gcd import coefficients_in, poly_gcd, subresultant_gcd
from .order import DEFAULT_ORDER, GREVLEX, LEX, TermOrder
from .polynomial import NEG_INF, Polynomial, align, merge_variables, symbols, variables_of
from .rational import RationalFunction
from .reduction import groebner_basis, ideal_contains, poly_reduce, reduce_remainder
from .textio import (format_polynomial, parse_polynomial, polynomial_from_json,
                     polynomial_to_json)

__all__ = [
    "BudgetExceeded", "ParseError", "PolycoreError", "UnboundVariableError",
    "ZeroFunctionDivision", "coefficients_in", "poly_gcd", "subresultant_gcd",
    "DEFAULT_ORDER", "GREVLEX", "LEX", "TermOrder", "NEG_INF", "Polynomial", "align",
    "merge_variables", "symbols", "variables_of", "RationalFunction", "groebner_basis",
    "ideal_contains", "poly_reduce", "reduce_remainder", "format_polynomial",
    "parse_polynomial", "polynomial_from_json", "polynomial_to_json", "partial_derivative",
    "poly_arith", "poly_eval", "poly_degree", "rf_arith",
]


def poly_arith(op: str, a, b):
    """Dispatch ``add``/``sub``/``mul``/``pow`` on polynomials."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_eval(p, point):
    return p.evaluate(point)


def poly_degree(p, var=None):
    return p.degree(var)


def rf_arith(op: str, f, g):
    """Dispatch ``add``/``mul``/``div``/``compose`` on rational functions.

    For ``compose``, ``g`` maps variable names to substituted functions.
    """
    f = RationalFunction.coerce(f)
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    if op == "compose":
        return f.compose(g)
    raise ValueError(f"unknown rational-function operation {op!r}")


def partial_derivative(f, var: str):
    return RationalFunction.coerce(f).derivative(var)
