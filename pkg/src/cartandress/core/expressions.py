"""
Scenario expressions: strings over x0..x3 compiled into jet arithmetic.

Grammar: + - * / ^ (or **), exp, log, sqrt, numeric constants and I. Expressions are parsed
with sympy and lambdified against a namespace whose elementary functions accept jets, so a
compiled expression evaluated on coordinate jets returns the exact truncated Taylor series.
"""

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from cartandress.core.exceptions import ScenarioError
from cartandress.core.jets import DIM, Jet, jet_exp, jet_log, jet_sqrt

COORDINATES = sp.symbols("x0:4", real=True)

_LOCALS = {str(s): s for s in COORDINATES}
_LOCALS.update({"exp": sp.exp, "log": sp.log, "sqrt": sp.sqrt, "I": sp.I, "E": sp.E})
_ALLOWED_FUNCTIONS = {"exp", "log"}
_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_JET_NAMESPACE = {"exp": jet_exp, "log": jet_log, "sqrt": jet_sqrt}


def parse_expression(text: str) -> sp.Expr:
    """Parse and validate a scenario expression."""
    if isinstance(text, (int, float)):
        return sp.sympify(text)
    if not isinstance(text, str) or not text.strip():
        raise ScenarioError(f"Invalid expression: {text!r}")
    try:
        expr = parse_expr(text, local_dict=_LOCALS, transformations=_TRANSFORMATIONS)
    except Exception as e:
        raise ScenarioError(f"Failed to parse expression {text!r}: {e}") from e

    if not isinstance(expr, sp.Expr):
        raise ScenarioError(f"Expression {text!r} is not arithmetic")
    unknown = {str(s) for s in expr.free_symbols} - set(_LOCALS)
    if unknown:
        raise ScenarioError(f"Expression {text!r} uses unknown symbols: {sorted(unknown)}")
    functions = {type(f).__name__ for f in expr.atoms(sp.Function)}
    if functions - _ALLOWED_FUNCTIONS:
        raise ScenarioError(
            f"Expression {text!r} uses unsupported functions: {sorted(functions - _ALLOWED_FUNCTIONS)}"
        )
    return expr


@dataclass(frozen=True)
class CompiledExpression:
    """A parsed expression together with its jet-aware evaluator."""

    text: str
    expr: sp.Expr
    fn: Callable

    @property
    def is_complex(self) -> bool:
        return bool(self.expr.has(sp.I))

    def evaluate(self, x: Sequence[float], order: int) -> Jet:
        variables = [Jet.variable(x, mu, order) for mu in range(DIM)]
        result = self.fn(*variables)
        if isinstance(result, Jet):
            return result
        return Jet.constant(np.asarray(complex(result) if self.is_complex else float(result)), order)

    def __call__(self, x: Sequence[float]):
        return self.evaluate(x, 0).value


def compile_expression(text) -> CompiledExpression:
    expr = parse_expression(text)
    fn = sp.lambdify(COORDINATES, expr, modules=[_JET_NAMESPACE, "math"])
    return CompiledExpression(str(text), expr, fn)
