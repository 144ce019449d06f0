from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from adjflow.expr import (
    DomainError,
    NotExact,
    ParseError,
    PolyNF,
    SamplePlan,
    ZeroKind,
    equivalent,
    is_constant,
    is_zero,
    parse,
    to_poly_nf,
)
from adjflow.expr import nodes as N

from .strategies import VARS, expressions, points, polynomials, rational_points, smooth

X, Y, Z = (N.Var(v) for v in VARS)
PLAN = SamplePlan(seed=7, count=100)


def sym(e: N.Expr):
    """Independent translation into sympy."""
    return sympy.sympify(str(e).replace("^", "**").replace("ln(", "log("), locals={v: sympy.Symbol(v) for v in VARS})


# -- parser ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, value",
    [
        ("1 + 2*3", 7),
        ("2^3^2", 512),
        ("-2^2", -4),
        ("(-2)^2", 4),
        ("2^-1", Fraction(1, 2)),
        ("8/4/2", 1),
        ("1 - 2 - 3", -4),
        ("3/4", Fraction(3, 4)),
        ("0.25 * 4", 1),
        ("x*y - x/y", Fraction(3, 2) * 2 - Fraction(3, 2) / 2),
    ],
)
def test_parse_evaluates(text, value):
    e = parse(text, ("x", "y"))
    assert N.evaluate(e, {"x": Fraction(3, 2), "y": 2}) == value


def test_parse_structure():
    assert parse("x + y*z", VARS) == N.add(X, N.mul(Y, Z))
    assert parse("x^y^z", VARS) == N.power(X, N.power(Y, Z))
    assert parse("-x^2", VARS) == N.neg(N.power(X, N.Const(2)))
    assert parse("exp(x) # trailing comment", VARS) == N.exp(X)


def test_parse_constants_substituted():
    a = N.Param("a", 1 + math.sqrt(2))
    e = parse("a*x", ("x",), {"a": a})
    assert N.params(e) == {"a": a.value}


@pytest.mark.parametrize(
    "text, fragment, pos",
    [
        ("x + * y", "unexpected", 4),
        ("foo(x)", "unknown function", 0),
        ("x + q", "undeclared identifier", 4),
        ("exp(x, y)", "exactly one argument", 5),
        ("(x + y", "expected ')'", 6),
        ("x $ y", "unexpected character", 2),
        ("x / 0", "division by literal zero", 2),
        ("x y", "unexpected", 2),
    ],
)
def test_parse_errors_are_positioned(text, fragment, pos):
    with pytest.raises(ParseError) as info:
        parse(text, VARS)
    assert fragment in info.value.message
    assert info.value.pos == pos


@given(expressions)
def test_print_parse_round_trip(e):
    assert parse(str(e), VARS) == e


# -- smart constructors -----------------------------------------------------------


def test_folding():
    assert N.add(N.ZERO, X) is X
    assert N.mul(N.ONE, X) is X
    assert N.mul(N.ZERO, X) == N.ZERO
    assert N.mul(N.Const(-1), X) == N.neg(X)
    assert N.neg(N.neg(X)) is X
    assert N.power(X, N.ONE) is X
    assert N.power(X, N.ZERO) == N.ONE
    assert N.power(N.Const(2), N.Const(-2)) == N.Const(Fraction(1, 4))
    assert N.exp(N.ZERO) == N.ONE
    assert N.div(X, N.ONE) is X


# -- differentiation ------------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    ["x^3*y - 2*x", "exp(-x - x*y)*x*y", "sin(x*y)/(2 + cos(z))", "ln(1 + x^2)*sqrt(2 + y^2)", "x^y", "(x^2 + 1)^(1/3)"],
)
def test_diff_matches_sympy(text):
    e = parse(text, VARS)
    for v in VARS:
        got = sym(N.diff(e, v))
        want = sympy.diff(sym(e), sympy.Symbol(v))
        pt = {sympy.Symbol("x"): sympy.Rational(1, 3), sympy.Symbol("y"): sympy.Rational(5, 7),
              sympy.Symbol("z"): sympy.Rational(-1, 2)}
        assert abs(float((got - want).subs(pt).evalf(30))) < 1e-12


@given(smooth, points, st.sampled_from(VARS))
def test_diff_matches_central_difference(e, pt, v):
    env = dict(zip(VARS, pt))
    h = 1e-5
    try:
        up = N.evaluate(e, {**env, v: env[v] + h}, exact=False)
        dn = N.evaluate(e, {**env, v: env[v] - h}, exact=False)
        d = N.evaluate(N.diff(e, v), env, exact=False)
    except (DomainError, OverflowError):
        assume(False)
    fd = (up - dn) / (2 * h)
    assume(all(math.isfinite(t) for t in (up, dn, d)) and abs(d) < 1e6)
    assert abs(fd - d) <= 1e-4 * max(1.0, abs(d))


@given(polynomials, st.sampled_from(VARS), st.sampled_from(VARS))
def test_mixed_partials_commute(e, a, b):
    lhs = to_poly_nf(N.diff(N.diff(e, a), b), VARS)
    rhs = to_poly_nf(N.diff(N.diff(e, b), a), VARS)
    assert lhs == rhs


# -- evaluation -----------------------------------------------------------------


def test_evaluate_exact_and_float():
    e = parse("x^2/3 + y", ("x", "y"))
    assert N.evaluate(e, {"x": 1, "y": Fraction(1, 3)}) == Fraction(2, 3)
    with pytest.raises(NotExact):
        N.evaluate(N.exp(X), {"x": 1})
    with pytest.raises(DomainError):
        N.evaluate(N.ln(X), {"x": -1.0}, exact=False)
    with pytest.raises(N.UnboundVariable):
        N.evaluate(X, {})


@given(expressions, points)
def test_lambdify_agrees_with_evaluate(e, pt):
    env = dict(zip(VARS, pt))
    try:
        want = N.evaluate(e, env, exact=False)
    except (DomainError, OverflowError):
        want = None
    f = N.lambdify([e], VARS)
    try:
        got = f(*pt)[0]
    except (DomainError, OverflowError):
        got = None
    if want is None or got is None or not math.isfinite(want):
        return
    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_lambdify_deep_expression():
    e = X
    for k in range(2000):
        e = N.add(N.mul(e, N.Const(Fraction(1, 2))), N.Const(k % 3))
    f = N.lambdify([e], ("x",))
    assert math.isfinite(f(0.5)[0])


# -- PolyNF ---------------------------------------------------------------------


@given(polynomials)
def test_poly_nf_matches_sympy_expand(e):
    p = to_poly_nf(e, VARS)
    assert p is not None
    expected = sympy.Poly(sympy.expand(sym(e)), *[sympy.Symbol(v) for v in VARS])
    got = {mono: sympy.Rational(c.numerator, c.denominator) for mono, c in p.terms}
    assert got == {k: v for k, v in expected.as_dict().items() if v != 0}


@given(polynomials, polynomials, rational_points)
def test_poly_nf_is_a_ring_homomorphism(a, b, pt):
    env = dict(zip(VARS, pt))
    pa, pb = to_poly_nf(a, VARS), to_poly_nf(b, VARS)
    assert to_poly_nf(N.add(a, b), VARS) == pa + pb
    assert to_poly_nf(N.mul(a, b), VARS) == pa * pb
    assert to_poly_nf(N.neg(a), VARS) == -pa
    assert pa.evaluate(env) == N.evaluate(a, env)


@given(polynomials, polynomials, polynomials)
def test_poly_ring_laws(a, b, c):
    pa, pb, pc = (to_poly_nf(e, VARS) for e in (a, b, c))
    assert pa * pb == pb * pa
    assert pa * (pb + pc) == pa * pb + pa * pc
    assert (pa + pb) + pc == pa + (pb + pc)
    assert (pa * pb) * pc == pa * (pb * pc)
    assert pa - pa == PolyNF(VARS)


@given(polynomials, polynomials)
def test_divmod_reconstructs(a, b):
    pa, pb = to_poly_nf(a, VARS), to_poly_nf(b, VARS)
    assume(not pb.is_zero())
    q, r = pa.divmod(pb)
    assert q * pb + r == pa
    assert (pa * pb).exact_div(pb) == pa


@given(polynomials)
def test_poly_to_expr_round_trip(e):
    p = to_poly_nf(e, VARS)
    assert to_poly_nf(p.to_expr(), VARS) == p


def test_poly_nf_rejects_non_polynomials():
    assert to_poly_nf(N.exp(X)) is None
    assert to_poly_nf(N.div(N.ONE, X)) is None
    assert to_poly_nf(N.power(X, N.Const(Fraction(1, 2)))) is None
    lp = to_poly_nf(N.div(Y, N.mul(N.Const(2), Z)), ("y", "z"), laurent=True)
    assert lp.coefficient((1, -1)) == Fraction(1, 2)


def test_params_are_indeterminates():
    a = N.Param("a", 1 + math.sqrt(2))
    e = N.sub(N.mul(N.add(a, X), N.sub(a, X)), N.sub(N.power(a, N.Const(2)), N.power(X, N.Const(2))))
    assert to_poly_nf(e).is_zero()


def test_poly_str():
    p = to_poly_nf(parse("x*(-1 + x*y + y^2)", ("x", "y")), ("x", "y"))
    assert str(p) == "x^2*y + x*y^2 - x"


# -- zero and constancy tests ---------------------------------------------------


def test_zero_test_verdicts():
    assert is_zero(parse("(x + y)^2 - x^2 - 2*x*y - y^2", VARS), PLAN).kind is ZeroKind.ZERO_SYMBOLIC
    assert is_zero(parse("exp(x)*exp(y) - exp(x + y)", VARS), PLAN).kind is ZeroKind.ZERO_NUMERIC
    assert is_zero(parse("sin(x)^2 + cos(x)^2 - 1", VARS), PLAN).kind is ZeroKind.ZERO_NUMERIC
    assert is_zero(parse("z^-1*z - 1", VARS), PLAN).kind is ZeroKind.ZERO_SYMBOLIC
    v = is_zero(parse("x*y - 1/1000", VARS), PLAN)
    assert v.kind is ZeroKind.NONZERO and v.method == "exact"
    v = is_zero(parse("exp(x) - 1 - x", VARS), PLAN)
    assert v.kind is ZeroKind.NONZERO and v.witness is not None


@given(polynomials)
def test_nonzero_verdicts_carry_true_witnesses(e):
    v = is_zero(e, PLAN, VARS)
    p = to_poly_nf(e, VARS)
    assert v.is_zero == p.is_zero()
    if not v.is_zero:
        assert p.evaluate(dict(zip(VARS, (Fraction(c) for c in v.witness)))) != 0


@given(expressions)
def test_zero_test_is_deterministic(e):
    try:
        a = is_zero(e, PLAN, VARS)
        b = is_zero(e, PLAN, VARS)
    except ArithmeticError:
        return
    assert a == b


def test_equivalent_is_relative():
    big = N.mul(N.Const(10**6), N.exp(X))
    near = N.add(big, N.Const(Fraction(1, 10**6)))
    assert equivalent(big, near, PLAN, ("x",)).is_zero


def test_constancy():
    assert is_constant(parse("x^2 + 3 - x^2", VARS), PLAN, VARS).is_constant
    assert not is_constant(parse("x*y", VARS), PLAN, VARS).is_constant
    assert is_constant(parse("sin(x)^2 + cos(x)^2", VARS), PLAN, VARS).is_constant
    assert not is_constant(parse("exp(x*y)", VARS), PLAN, VARS).is_constant
