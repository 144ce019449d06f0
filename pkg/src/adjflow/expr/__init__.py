"""Symbolic expressions: parsing, evaluation, differentiation, normal forms."""

from .nodes import (
    FUNCTIONS,
    ONE,
    ZERO,
    Add,
    Call,
    Const,
    Div,
    DomainError,
    Expr,
    Mul,
    Neg,
    NotExact,
    Param,
    Pow,
    UnboundVariable,
    Var,
    add,
    as_expr,
    bind_params,
    call,
    classify,
    const,
    diff,
    div,
    evaluate,
    exp,
    free_vars,
    gradient,
    lambdify,
    ln,
    mul,
    neg,
    params,
    power,
    product,
    size,
    sqrt,
    sub,
    substitute,
    total,
    var,
)
from .parser import ParseError, parse
from .poly import PolyNF, polys_over, to_poly_nf
from .printer import to_text
from .zero import (
    AllSamplesNonFinite,
    ConstKind,
    ConstVerdict,
    SamplePlan,
    ZeroKind,
    ZeroVerdict,
    equivalent,
    float_samples,
    is_constant,
    is_zero,
    sample_points,
)

__all__ = [
    "Add",
    "add",
    "AllSamplesNonFinite",
    "as_expr",
    "bind_params",
    "call",
    "Call",
    "classify",
    "const",
    "Const",
    "ConstKind",
    "ConstVerdict",
    "diff",
    "Div",
    "div",
    "DomainError",
    "equivalent",
    "evaluate",
    "exp",
    "Expr",
    "float_samples",
    "free_vars",
    "FUNCTIONS",
    "gradient",
    "is_constant",
    "is_zero",
    "lambdify",
    "ln",
    "Mul",
    "mul",
    "neg",
    "Neg",
    "NotExact",
    "ONE",
    "Param",
    "params",
    "parse",
    "ParseError",
    "PolyNF",
    "polys_over",
    "Pow",
    "power",
    "product",
    "sample_points",
    "SamplePlan",
    "size",
    "sqrt",
    "sub",
    "substitute",
    "to_poly_nf",
    "to_text",
    "total",
    "UnboundVariable",
    "var",
    "Var",
    "ZERO",
    "ZeroKind",
    "ZeroVerdict",
]
