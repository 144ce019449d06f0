"""Immutable expression trees over named variables with exact rational constants.

Nodes are frozen dataclasses, so structural equality and hashing come for
free.  Build trees through the module-level constructors (``add``, ``mul``,
...) or the Python operators; both apply local constant folding only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence, Union

FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt")

Number = Union[int, Fraction, float]


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __rpow__(self, other):
        return power(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __str__(self) -> str:
        from .printer import to_text

        return to_text(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def __repr__(self) -> str:
        return f"Const({self.value})"


@dataclass(frozen=True, eq=True)
class Param(Expr):
    """Opaque named constant, e.g. an irrational parameter such as 1+sqrt(2).

    Evaluates only in floating point; in polynomial normal forms it behaves
    as a free indeterminate, so identities proven there hold for every value.
    """

    name: str
    value: float

    def __repr__(self) -> str:
        return f"Param({self.name}={self.value!r})"


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name})"


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exp: Expr


@dataclass(frozen=True, eq=True)
class Call(Expr):
    func: str
    arg: Expr


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def const(value: Number | str) -> Const:
    if isinstance(value, float):
        return Const(Fraction(value).limit_denominator(10**12))
    return Const(Fraction(value))


def var(name: str) -> Var:
    return Var(name)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (Rational, str)):
        return Const(Fraction(value))
    if isinstance(value, float):
        return const(value)
    raise TypeError(f"cannot convert {value!r} to an expression")


def is_const(e: Expr, value=None) -> bool:
    if not isinstance(e, Const):
        return False
    return value is None or e.value == value


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if is_const(a, 0):
        return b
    if is_const(b, 0):
        return a
    return Add(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if is_const(a, 0):
        return neg(b)
    return add(a, neg(b))


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if is_const(a, 0) or is_const(b, 0):
        return ZERO
    if is_const(a, 1):
        return b
    if is_const(b, 1):
        return a
    if is_const(a, -1):
        return neg(b)
    if is_const(b, -1):
        return neg(a)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if is_const(b, 0):
        raise ZeroDivisionError("division by a literal zero")
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    if is_const(a, 0):
        return ZERO
    if is_const(b, 1):
        return a
    return Div(a, b)


def power(base: Expr, exponent: Expr) -> Expr:
    if is_const(exponent, 0):
        return ONE
    if is_const(exponent, 1):
        return base
    if isinstance(base, Const) and isinstance(exponent, Const):
        q = exponent.value
        if q.denominator == 1:
            if base.value == 0 and q < 0:
                raise ZeroDivisionError("zero raised to a negative power")
            return Const(base.value ** int(q))
    return Pow(base, exponent)


_CALL_FOLDS = {
    ("exp", 0): 1,
    ("ln", 1): 0,
    ("sin", 0): 0,
    ("cos", 0): 1,
    ("sqrt", 0): 0,
    ("sqrt", 1): 1,
}


def call(func: str, arg: Expr) -> Expr:
    if func not in FUNCTIONS:
        raise ValueError(f"unknown function {func!r}")
    if isinstance(arg, Const) and (func, arg.value) in _CALL_FOLDS:
        return Const(Fraction(_CALL_FOLDS[func, arg.value]))
    return Call(func, arg)


def exp(a) -> Expr:
    return call("exp", as_expr(a))


def ln(a) -> Expr:
    return call("ln", as_expr(a))


def sqrt(a) -> Expr:
    return call("sqrt", as_expr(a))


def sin(a) -> Expr:
    return call("sin", as_expr(a))


def cos(a) -> Expr:
    return call("cos", as_expr(a))


def total(terms: Iterable[Expr]) -> Expr:
    out: Expr = ZERO
    for t in terms:
        out = add(out, t)
    return out


def product(factors: Iterable[Expr]) -> Expr:
    out: Expr = ONE
    for f in factors:
        out = mul(out, f)
    return out


# -- traversal ---------------------------------------------------------------


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Add, Mul)):
        return (e.left, e.right)
    if isinstance(e, Div):
        return (e.num, e.den)
    if isinstance(e, Pow):
        return (e.base, e.exp)
    if isinstance(e, (Neg, Call)):
        return (e.arg,)
    return ()


def _walk(e: Expr):
    seen: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(children(node))


def free_vars(e: Expr) -> set[str]:
    return {n.name for n in _walk(e) if isinstance(n, Var)}


def params(e: Expr) -> dict[str, float]:
    return {n.name: n.value for n in _walk(e) if isinstance(n, Param)}


def has_calls(e: Expr) -> bool:
    return any(isinstance(n, Call) for n in _walk(e))


def size(e: Expr) -> int:
    return sum(1 for _ in _walk(e))


# -- rebuilding ----------------------------------------------------------------


def _rebuild(e: Expr, kids: Sequence[Expr]) -> Expr:
    if isinstance(e, Add):
        return add(*kids)
    if isinstance(e, Mul):
        return mul(*kids)
    if isinstance(e, Div):
        return div(*kids)
    if isinstance(e, Pow):
        return power(*kids)
    if isinstance(e, Neg):
        return neg(kids[0])
    if isinstance(e, Call):
        return call(e.func, kids[0])
    return e


def transform(e: Expr, leaf: Callable[[Expr], Expr]) -> Expr:
    """Rebuild ``e`` bottom-up, replacing leaves by ``leaf(node)``."""
    memo: dict[int, Expr] = {}

    def go(node: Expr) -> Expr:
        key = id(node)
        if key in memo:
            return memo[key]
        kids = children(node)
        if kids:
            out = _rebuild(node, [go(k) for k in kids])
        else:
            out = leaf(node)
        memo[key] = out
        return out

    return go(e)


class UnboundVariable(KeyError):
    pass


def substitute(e: Expr, binding: Mapping[str, Expr], strict: bool = True) -> Expr:
    """Simultaneously replace variables by expressions.

    With ``strict`` every free variable of ``e`` must be bound.
    """

    def leaf(node: Expr) -> Expr:
        if isinstance(node, Var):
            if node.name in binding:
                return as_expr(binding[node.name])
            if strict:
                raise UnboundVariable(node.name)
        return node

    return transform(e, leaf)


def bind_params(e: Expr, values: Mapping[str, Number]) -> Expr:
    """Replace opaque parameters by concrete constants."""

    def leaf(node: Expr) -> Expr:
        if isinstance(node, Param) and node.name in values:
            return as_expr(values[node.name])
        return node

    return transform(e, leaf)


# -- differentiation -----------------------------------------------------------


def _depends(e: Expr, v: str, cache: dict[int, bool]) -> bool:
    key = id(e)
    if key not in cache:
        if isinstance(e, Var):
            cache[key] = e.name == v
        else:
            cache[key] = any(_depends(k, v, cache) for k in children(e))
    return cache[key]


def diff(e: Expr, v: str) -> Expr:
    """Partial derivative of ``e`` with respect to variable ``v``."""
    memo: dict[int, Expr] = {}
    dep: dict[int, bool] = {}

    def d(node: Expr) -> Expr:
        key = id(node)
        if key in memo:
            return memo[key]
        if not _depends(node, v, dep):
            out = ZERO
        elif isinstance(node, Var):
            out = ONE
        elif isinstance(node, Add):
            out = add(d(node.left), d(node.right))
        elif isinstance(node, Neg):
            out = neg(d(node.arg))
        elif isinstance(node, Mul):
            a, b = node.left, node.right
            out = add(mul(d(a), b), mul(a, d(b)))
        elif isinstance(node, Div):
            a, b = node.num, node.den
            if not _depends(b, v, dep):
                out = div(d(a), b)
            else:
                out = div(sub(mul(d(a), b), mul(a, d(b))), power(b, Const(Fraction(2))))
        elif isinstance(node, Pow):
            b, x = node.base, node.exp
            if not _depends(x, v, dep):
                out = mul(mul(x, power(b, sub(x, ONE))), d(b))
            else:
                # b^x * (x' ln b + x b'/b)
                out = mul(node, add(mul(d(x), call("ln", b)), div(mul(x, d(b)), b)))
        elif isinstance(node, Call):
            a = node.arg
            da = d(a)
            if node.func == "exp":
                out = mul(node, da)
            elif node.func == "ln":
                out = div(da, a)
            elif node.func == "sin":
                out = mul(call("cos", a), da)
            elif node.func == "cos":
                out = neg(mul(call("sin", a), da))
            else:  # sqrt
                out = div(da, mul(Const(Fraction(2)), node))
        else:
            raise TypeError(f"unexpected node {node!r}")
        memo[key] = out
        return out

    return d(e)


def gradient(e: Expr, vars: Sequence[str]) -> list[Expr]:
    return [diff(e, v) for v in vars]


# -- evaluation ----------------------------------------------------------------


class NotExact(ValueError):
    """Raised when exact evaluation meets a call, parameter or irrational power."""


class DomainError(ArithmeticError):
    """Evaluation left the domain of the expression (pole, log of x<=0, ...)."""


def _exact_pow(b: Fraction, x: Fraction) -> Fraction:
    if x.denominator != 1:
        raise NotExact("non-integer exponent in exact mode")
    if b == 0 and x < 0:
        raise DomainError("zero to a negative power")
    return b ** int(x)


def _float_pow(b: float, x: float) -> float:
    if x == int(x) and abs(x) <= 64:
        if b == 0.0 and x < 0:
            raise DomainError("zero to a negative power")
        return b ** int(x)
    try:
        return math.pow(b, x)
    except (ValueError, OverflowError) as err:
        raise DomainError(str(err)) from err


def _float_call(func: str, a: float) -> float:
    try:
        if func == "exp":
            return math.exp(a)
        if func == "ln":
            return math.log(a)
        if func == "sqrt":
            return math.sqrt(a)
        if func == "sin":
            return math.sin(a)
        return math.cos(a)
    except (ValueError, OverflowError) as err:
        raise DomainError(f"{func}({a}): {err}") from err


def evaluate(e: Expr, env: Mapping[str, Number], exact: bool = True):
    """Evaluate ``e`` at a point given as ``{name: value}``.

    Exact mode returns a :class:`Fraction` and raises :class:`NotExact` on
    calls, parameters and non-integer exponents.  Float mode raises
    :class:`DomainError` at poles and outside function domains.
    """
    memo: dict[int, object] = {}

    def ev(node: Expr):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Const):
            out = node.value if exact else float(node.value)
        elif isinstance(node, Var):
            try:
                val = env[node.name]
            except KeyError:
                raise UnboundVariable(node.name) from None
            out = Fraction(val) if exact else float(val)
        elif isinstance(node, Param):
            if exact:
                raise NotExact(f"parameter {node.name} has no exact value")
            out = node.value
        elif isinstance(node, Add):
            out = ev(node.left) + ev(node.right)
        elif isinstance(node, Mul):
            out = ev(node.left) * ev(node.right)
        elif isinstance(node, Neg):
            out = -ev(node.arg)
        elif isinstance(node, Div):
            den = ev(node.den)
            if den == 0:
                raise DomainError("division by zero")
            out = ev(node.num) / den
        elif isinstance(node, Pow):
            b, x = ev(node.base), ev(node.exp)
            out = _exact_pow(b, x) if exact else _float_pow(b, x)
        elif isinstance(node, Call):
            if exact:
                raise NotExact(f"call to {node.func} in exact mode")
            out = _float_call(node.func, ev(node.arg))
        else:
            raise TypeError(f"unexpected node {node!r}")
        if not exact and not math.isfinite(out):
            raise DomainError("non-finite intermediate value")
        memo[key] = out
        return out

    try:
        return ev(e)
    except OverflowError as err:
        raise DomainError(str(err)) from err


def lambdify(exprs: Sequence[Expr], vars: Sequence[str]) -> Callable[..., tuple[float, ...]]:
    """Compile expressions into one float function ``f(*values) -> tuple``.

    The generated code is straight-line (one temporary per shared node), so
    deep trees never hit parser nesting limits.  Evaluation errors surface
    as :class:`DomainError`.
    """
    lines: list[str] = []
    names: dict[int, str] = {}
    consts: dict[str, object] = {
        "_pow": _float_pow,
        "_call": _float_call,
        "_DomainError": DomainError,
    }
    var_index = {v: i for i, v in enumerate(vars)}

    def leaf_ref(node: Expr) -> str:
        if isinstance(node, Const):
            return repr(float(node.value))
        if isinstance(node, Param):
            return repr(node.value)
        if isinstance(node, Var):
            if node.name not in var_index:
                raise UnboundVariable(node.name)
            return f"a{var_index[node.name]}"
        raise TypeError(f"unexpected node {node!r}")

    def emit(root: Expr) -> str:
        # explicit post-order walk: tree depth is not bounded by the call stack
        stack = [(root, False)]
        while stack:
            node, ready = stack.pop()
            if id(node) in names:
                continue
            kids = children(node)
            if not kids:
                names[id(node)] = leaf_ref(node)
                continue
            if not ready:
                stack.append((node, True))
                stack.extend((k, False) for k in reversed(kids))
                continue
            r = [names[id(k)] for k in kids]
            if isinstance(node, Add):
                code = f"{r[0]} + {r[1]}"
            elif isinstance(node, Mul):
                code = f"{r[0]} * {r[1]}"
            elif isinstance(node, Neg):
                code = f"-{r[0]}"
            elif isinstance(node, Div):
                code = f"{r[0]} / {r[1]}"
            elif isinstance(node, Pow):
                code = f"_pow({r[0]}, {r[1]})"
            elif isinstance(node, Call):
                code = f"_call({node.func!r}, {r[0]})"
            else:
                raise TypeError(f"unexpected node {node!r}")
            ref = f"t{len(lines)}"
            lines.append(f"    {ref} = {code}")
            names[id(node)] = ref
        return names[id(root)]

    outs = [emit(e) for e in exprs]
    args = ", ".join(f"a{i}" for i in range(len(vars)))
    body = "".join("    " + ln + "\n" for ln in lines)
    src = (
        f"def _f({args}):\n"
        "    try:\n"
        "        pass\n"
        f"{body}"
        "    except (ZeroDivisionError, OverflowError) as err:\n"
        "        raise _DomainError(str(err)) from err\n"
        f"    return ({', '.join(outs)}{',' if len(outs) == 1 else ''})\n"
    )
    scope = dict(consts)
    exec(compile(src, "<adjflow.lambdify>", "exec"), scope)
    return scope["_f"]


def classify(e: Expr) -> str:
    """Coarse smoothness label: ``polynomial``, ``rational`` or ``general``."""
    from .poly import to_poly_nf

    if to_poly_nf(e) is not None:
        return "polynomial"
    if to_poly_nf(e, laurent=True) is not None:
        return "rational"
    return "general"
