"""Small arithmetic expression grammar for user-defined models.

Supported: + - * / ^ (power), unary minus, numeric constants, coordinate
names, and the functions exp, sinh, cosh, log.  Expressions are compiled
through the Python ast module with a strict node whitelist; `^` is rewritten
to Python's power operator before parsing.
"""

from __future__ import annotations

import ast
import math
from typing import Callable, Sequence

from .errors import InvalidStructure

_FUNCTIONS = {"exp": math.exp, "sinh": math.sinh, "cosh": math.cosh, "log": math.log}

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.USub, ast.UAdd)


class ExpressionError(InvalidStructure):
    """Raised with position information when an expression is rejected."""


def _validate(node: ast.AST, names: set, source: str) -> None:
    for child in ast.walk(node):
        if isinstance(child, (ast.Expression, ast.Load)):
            continue
        if isinstance(child, ast.BinOp) and isinstance(child.op, _ALLOWED_BINOPS):
            continue
        if isinstance(child, ast.UnaryOp) and isinstance(child.op, _ALLOWED_UNARY):
            continue
        if isinstance(child, _ALLOWED_BINOPS + _ALLOWED_UNARY):
            continue
        if isinstance(child, ast.Constant):
            if isinstance(child.value, (int, float)):
                continue
            raise ExpressionError(f"non-numeric constant {child.value!r} in {source!r}")
        if isinstance(child, ast.Name):
            if child.id in names or child.id in _FUNCTIONS:
                continue
            raise ExpressionError(
                f"unknown name {child.id!r} at column {child.col_offset} in {source!r}"
            )
        if isinstance(child, ast.Call):
            if isinstance(child.func, ast.Name) and child.func.id in _FUNCTIONS \
                    and len(child.args) == 1 and not child.keywords:
                continue
            raise ExpressionError(f"unsupported call at column {child.col_offset} in {source!r}")
        raise ExpressionError(
            f"unsupported syntax {type(child).__name__} at column {getattr(child, 'col_offset', 0)} in {source!r}"
        )


def compile_expression(source: str, names: Sequence[str]) -> Callable:
    """Compile an expression into f(values_dict) -> float."""
    rewritten = source.replace("^", "**")
    try:
        tree = ast.parse(rewritten, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(
            f"parse error at line {exc.lineno}, column {exc.offset} in {source!r}: {exc.msg}"
        ) from None
    name_set = set(names)
    _validate(tree, name_set, source)
    code = compile(tree, "<expression>", "eval")

    def evaluate(values: dict) -> float:
        return float(eval(code, {"__builtins__": {}}, {**_FUNCTIONS, **values}))

    return evaluate


def compile_point_function(source: str, coord_names: Sequence[str]) -> Callable:
    """Compile an expression of the coordinates into f(point) -> float."""
    coord_names = list(coord_names)
    evaluate = compile_expression(source, coord_names)

    def func(x):
        return evaluate(dict(zip(coord_names, (float(v) for v in x))))

    return func


def compile_two_point_function(source: str, coord_names: Sequence[str], suffix: str = "_b") -> Callable:
    """Compile an expression of two points; second-factor names carry the suffix."""
    coord_names = list(coord_names)
    second = [name + suffix for name in coord_names]
    clash = set(coord_names) & set(second)
    if clash:
        raise ExpressionError(f"coordinate names clash with second-factor names: {sorted(clash)}")
    evaluate = compile_expression(source, coord_names + second)

    def func(g, h):
        values = dict(zip(coord_names, (float(v) for v in g)))
        values.update(zip(second, (float(v) for v in h)))
        return evaluate(values)

    return func
