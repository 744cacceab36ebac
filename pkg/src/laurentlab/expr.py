"""A deliberately tiny expression language for test functions.

Expressions use Python syntax restricted to:

* numeric literals (``2``, ``0.5``, ``1e-3``, ``2j``), the names ``i`` and ``pi``;
* the coordinates ``z1 .. zn`` (``z`` is accepted when n == 1);
* ``+ - * /``, powers written ``**`` or ``^``, unary minus;
* the functions ``exp``, ``conj`` and ``abs``.

``conj`` and ``abs`` are there on purpose: they produce the non-holomorphic
inputs the detectors are meant to catch.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_COORD = re.compile(r"^z([1-9][0-9]*)$")
_FUNCS = {"exp": np.exp, "conj": np.conjugate, "abs": np.abs}
_NON_HOLOMORPHIC = {"conj", "abs"}
_CONSTS = {"i": 1j, "pi": np.pi}


class ExpressionError(ValueError):
    """Raised for syntax errors and dimension mismatches.

    ``position`` is the 1-based column of the offending token.
    """

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" (column {position})" if position is not None else ""
        super().__init__(message + where)


def _int_power(z, e: int):
    if e < 0:
        z = 1 / z
        e = -e
    result = np.ones_like(z)
    base = z
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


@dataclass(frozen=True)
class ParsedFunction:
    """Callable ``f(z1, ..., zn)`` compiled from an expression string."""

    expr: str
    n: int
    uses_nonholomorphic: bool
    _fn: Callable = field(repr=False, compare=False)

    def __call__(self, *coords):
        if len(coords) != self.n:
            raise ExpressionError(
                f"expression expects {self.n} coordinate(s), got {len(coords)}"
            )
        arrays = [np.asarray(c) for c in coords]
        if not any(np.iscomplexobj(a) for a in arrays):
            arrays = [a.astype(np.result_type(a.dtype, np.complex64)) for a in arrays]
        shape = np.broadcast_shapes(*(a.shape for a in arrays))
        out = np.asarray(self._fn(arrays))
        if not np.iscomplexobj(out):
            out = out.astype(np.result_type(*arrays))
        if out.shape != shape:
            out = np.broadcast_to(out, shape).copy()
        return out


def parse_function(expr: str, n: int | None = None) -> ParsedFunction:
    """Compile ``expr`` into a vectorized evaluator.

    If ``n`` is omitted it is the largest coordinate index used (at least 1).
    """
    source = expr.strip().replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"syntax error: {exc.msg}", exc.offset) from None

    used: set[int] = set()
    flags = {"conj": False, "bare_z": False}

    def coord_index(node: ast.Name) -> int:
        if node.id == "z":
            flags["bare_z"] = True
            used.add(1)
            return 0
        match = _COORD.match(node.id)
        if match is None:
            raise ExpressionError(f"unknown name {node.id!r}", node.col_offset + 1)
        k = int(match.group(1))
        used.add(k)
        return k - 1

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(
                node.value, (int, float, complex)
            ):
                raise ExpressionError("only numeric literals allowed", node.col_offset + 1)
            value = node.value
            return lambda zs: value
        if isinstance(node, ast.Name):
            if node.id in _CONSTS:
                value = _CONSTS[node.id]
                return lambda zs: value
            k = coord_index(node)
            return lambda zs: zs[k]
        if isinstance(node, ast.UnaryOp):
            inner = build(node.operand)
            if isinstance(node.op, ast.USub):
                return lambda zs: -inner(zs)
            if isinstance(node.op, ast.UAdd):
                return inner
            raise ExpressionError("unsupported unary operator", node.col_offset + 1)
        if isinstance(node, ast.BinOp):
            left, right = build(node.left), build(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return lambda zs: left(zs) + right(zs)
            if isinstance(op, ast.Sub):
                return lambda zs: left(zs) - right(zs)
            if isinstance(op, ast.Mult):
                return lambda zs: left(zs) * right(zs)
            if isinstance(op, ast.Div):
                return lambda zs: left(zs) / right(zs)
            if isinstance(op, ast.Pow):
                exponent = _literal_int(node.right)
                if exponent is not None:
                    return lambda zs: _int_power(np.asarray(left(zs)), exponent)
                return lambda zs: np.power(left(zs), right(zs))
            raise ExpressionError("unsupported operator", node.col_offset + 1)
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
                raise ExpressionError("unknown function", node.col_offset + 1)
            if len(node.args) != 1 or node.keywords:
                raise ExpressionError(
                    f"{node.func.id} takes exactly one argument", node.col_offset + 1
                )
            if node.func.id in _NON_HOLOMORPHIC:
                flags["conj"] = True
            fn = _FUNCS[node.func.id]
            arg = build(node.args[0])
            return lambda zs: fn(arg(zs))
        raise ExpressionError(
            f"unsupported syntax {type(node).__name__}", getattr(node, "col_offset", -1) + 1
        )

    fn = build(tree)
    needed = max(used) if used else 1
    if flags["bare_z"] and needed > 1:
        raise ExpressionError("'z' may only be used for one-variable expressions")
    if n is None:
        n = needed
    elif needed > n:
        raise ExpressionError(f"expression uses z{needed} but n = {n}")
    return ParsedFunction(expr=expr, n=n, uses_nonholomorphic=flags["conj"], _fn=fn)


def _literal_int(node) -> int | None:
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        sign, node = -1, node.operand
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return sign * node.value
    return None
