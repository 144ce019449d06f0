"""Render expressions in the input DSL with minimal parentheses.

The output re-parses to a structurally equal tree.
"""

from __future__ import annotations

from fractions import Fraction

from .nodes import Add, Call, Const, Div, Expr, Mul, Neg, Param, Pow, Var

# binding strength of each printed form
_SUM, _PRODUCT, _UNARY, _POWER, _ATOM = 1, 2, 3, 4, 5


def _const_text(q: Fraction) -> tuple[str, int]:
    if q < 0:
        text, _ = _const_text(-q)
        return "-" + text, _UNARY
    if q.denominator == 1:
        return str(q.numerator), _ATOM
    return f"({q.numerator}/{q.denominator})", _ATOM


def _render(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, (Var, Param)):
        return e.name, _ATOM
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})", _ATOM
    if isinstance(e, Add):
        left = _wrap(e.left, _SUM)
        r = e.right
        if isinstance(r, Neg):
            return f"{left} - {_wrap(r.arg, _PRODUCT)}", _SUM
        if isinstance(r, Const) and r.value < 0:
            return f"{left} - {_wrap(Const(-r.value), _PRODUCT)}", _SUM
        return f"{left} + {_wrap(r, _PRODUCT)}", _SUM
    if isinstance(e, (Mul, Div)):
        a, b = (e.left, e.right) if isinstance(e, Mul) else (e.num, e.den)
        op = "*" if isinstance(e, Mul) else "/"
        return f"{_wrap(a, _PRODUCT)}{op}{_wrap(b, _UNARY)}", _PRODUCT
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _UNARY), _UNARY
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _ATOM)}^{_wrap(e.exp, _UNARY)}", _POWER
    raise TypeError(f"unexpected node {e!r}")


def _wrap(e: Expr, need: int) -> str:
    text, strength = _render(e)
    return text if strength >= need else f"({text})"


def to_text(e: Expr) -> str:
    return _render(e)[0]
