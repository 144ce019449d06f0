from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adjflow import catalog
from adjflow.construct import (
    SystemSpec,
    build_system,
    chain_residual,
    check_hypotheses,
    pullback,
    reduced_names,
    translated,
    value_at,
)
from adjflow.expr import SamplePlan, is_zero, parse, to_poly_nf
from adjflow.expr import nodes as N
from adjflow.sysfile import parse_system

PLAN = SamplePlan(seed=3, count=60)

EX3_2 = """
vars = x, y
phi = x*y, x + y^2/2
G = u, 1 - u
"""


def test_reduced_names():
    assert reduced_names(3) == ("u", "v", "w")
    assert reduced_names(5) == ("u1", "u2", "u3", "u4", "u5")


def test_example_3_2_field_exact():
    spec = parse_system(EX3_2)
    F = build_system(spec)
    want = [parse("x*(-1 + x*y + y^2)", ("x", "y")), parse("y*(1 - x - x*y)", ("x", "y"))]
    for got, w in zip(F.components, want):
        assert to_poly_nf(N.sub(got, w), ("x", "y")).is_zero()


def test_field_scales_with_R():
    spec = parse_system(EX3_2)
    F1 = build_system(spec)
    F2 = build_system(replace(spec, R=N.Const(2)))
    for a, b in zip(F1.components, F2.components):
        assert to_poly_nf(N.sub(N.mul(N.Const(2), a), b), ("x", "y")).is_zero()


def test_expected_F_mismatch_is_recorded_not_raised():
    spec = parse_system(EX3_2 + "expected_F = x, y\n")
    F = build_system(spec, PLAN)
    assert [m["component"] for m in F.mismatches] == [0, 1]


def test_spec_validation():
    with pytest.raises(ValueError):
        SystemSpec(("x", "x"), (N.Var("x"),) * 2, (N.ONE,) * 2)
    with pytest.raises(ValueError):
        SystemSpec(("x", "y"), (N.Var("x"),), (N.ONE, N.ONE))
    with pytest.raises(ValueError):
        SystemSpec(("x",), (N.Var("y"),), (N.ONE,))
    with pytest.raises(ValueError):
        SystemSpec(("x",), (N.Var("x"),), (N.Var("x"),))


def reduced_functions(names):
    """Test integrands; the chain identity holds for any I, integral or not."""
    a, b = N.Var(names[0]), N.Var(names[-1])
    return [
        N.sub(N.mul(N.power(a, N.Const(2)), b), N.mul(N.Const(3), b)),
        N.add(N.mul(a, b), N.Var(names[len(names) // 2])),
        N.mul(N.exp(a), b),
        N.sin(N.sub(a, b)),
    ]


@pytest.mark.parametrize("entry", catalog.entries(), ids=lambda e: e.id)
@pytest.mark.parametrize("R", ["1", "2", "1 + X^2"])
def test_chain_identity(entry, R):
    spec = entry.spec
    spec = replace(spec, R=N.mul(spec.R, parse(R.replace("X", spec.state_vars[0]), spec.state_vars)))
    F = build_system(spec)
    for I in reduced_functions(spec.reduced_vars):
        res = chain_residual(spec, F, I)
        assert is_zero(res, PLAN, spec.state_vars, spec.base_point).is_zero, (entry.id, str(I))


@settings(max_examples=25)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_chain_identity_random_polynomial_integrand(cs):
    spec = catalog.get("ex4_4").spec
    u, v, w = (N.Var(r) for r in spec.reduced_vars)
    I = N.total([N.mul(N.Const(cs[0]), N.mul(u, v)), N.mul(N.Const(cs[1]), N.power(w, N.Const(2))),
                 N.mul(N.Const(cs[2]), u), N.Const(cs[3])])
    res = chain_residual(spec, build_system(spec), I)
    assert to_poly_nf(res, spec.state_vars).is_zero()


def test_pullback_flags_constant():
    H = pullback(catalog.get("rem1_2i").spec, parse("u^2 + v", ("u", "v")), "I", PLAN)
    assert "DegeneratePullback" in H.flags


def test_hypotheses_example_3_2():
    spec = parse_system(EX3_2)
    h = check_hypotheses(spec, PLAN)
    assert h.theorem_applies
    assert h.q == (0, 0)
    assert h.G_at_q == (0, 1)
    assert h.base_is_singular
    assert h.preserves_dimension == "certified"


def test_hypotheses_degenerate_phi():
    h = check_hypotheses(catalog.get("ex3_9").spec, PLAN)
    assert "SufficientConditionFailed" in h.flags
    assert h.det == "0"
    assert not h.theorem_applies


def test_hypotheses_vanishing_G_is_a_flag():
    h = check_hypotheses(catalog.get("ex4_5").spec, PLAN)
    assert "GVanishesAtBase" in h.flags


def test_translation_rikitake():
    """Centring at p = (1, 1, 0) gives Phi(0) = 0 and the same field shifted."""
    spec = catalog.get("ex4_4").spec
    t = translated(spec, spec.base_point)
    env0 = {v: Fraction(0) for v in spec.state_vars}
    assert all(value_at(c, env0) == 0 for c in t.phi)
    assert check_hypotheses(t, PLAN).G_nonzero_at_q
    F = build_system(spec)
    Ft = build_system(t)
    shift = {v: N.add(N.Var(v), N.as_expr(c)) for v, c in zip(spec.state_vars, spec.base_point)}
    for a, b in zip(F.components, Ft.components):
        assert to_poly_nf(N.sub(N.substitute(a, shift), b), spec.state_vars).is_zero()
