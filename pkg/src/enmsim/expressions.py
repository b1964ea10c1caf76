"""Tiny arithmetic expression grammar for rate functions on the CLI.

Supported: numbers, the variable t, + - * / ^, exp, tanh, sinh, cosh and
parentheses.  Expressions are parsed once into an AST that is checked
against a whitelist, then evaluated per time point; nothing else from the
host language is reachable.
"""

from __future__ import annotations

import ast
import math
from typing import Callable

from .errors import ConfigError

_FUNCTIONS = {
    "exp": math.exp,
    "tanh": math.tanh,
    "sinh": math.sinh,
    "cosh": math.cosh,
}

_BINARY = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}

_UNARY = {
    ast.UAdd: lambda a: a,
    ast.USub: lambda a: -a,
}


def _evaluate(node: ast.AST, t: float) -> float:
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, t)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (int, float)):
            return float(node.value)
        raise ConfigError(f"unsupported constant {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id == "t":
            return t
        raise ConfigError(f"unknown variable {node.id!r} (only t is allowed)")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        return _BINARY[type(node.op)](
            _evaluate(node.left, t), _evaluate(node.right, t)
        )
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_evaluate(node.operand, t))
    if isinstance(node, ast.Call):
        if (
            isinstance(node.func, ast.Name)
            and node.func.id in _FUNCTIONS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCTIONS[node.func.id](_evaluate(node.args[0], t))
        raise ConfigError("only exp, tanh, sinh, cosh with one argument are allowed")
    raise ConfigError(f"unsupported syntax element {type(node).__name__}")


def _validate(node: ast.AST) -> None:
    if isinstance(node, ast.Expression):
        _validate(node.body)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ConfigError(f"unsupported constant {node.value!r}")
    elif isinstance(node, ast.Name):
        if node.id != "t":
            raise ConfigError(f"unknown variable {node.id!r} (only t is allowed)")
    elif isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        _validate(node.left)
        _validate(node.right)
    elif isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        _validate(node.operand)
    elif isinstance(node, ast.Call):
        if not (
            isinstance(node.func, ast.Name)
            and node.func.id in _FUNCTIONS
            and len(node.args) == 1
            and not node.keywords
        ):
            raise ConfigError(
                "only exp, tanh, sinh, cosh with one argument are allowed"
            )
        _validate(node.args[0])
    else:
        raise ConfigError(f"unsupported syntax element {type(node).__name__}")


def compile_rate_expression(text: str) -> Callable[[float], float]:
    """Compile an expression in t into a float-valued function of time."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}") from exc
    _validate(tree)

    def rate(t: float) -> float:
        return _evaluate(tree, t)

    return rate
