from __future__ import annotations

import json
from fractions import Fraction

import pytest

from adjflow import catalog
from adjflow.construct import build_system
from adjflow.expr import SamplePlan, parse, to_poly_nf
from adjflow.expr import nodes as N
from adjflow.symmat import adjugate, jacobian
from adjflow.sysfile import parse_system
from adjflow.verify import verify_spec

PLAN = SamplePlan(seed=5, count=80)
IDS = list(catalog.ENTRIES)


def test_listing_is_sorted_and_complete():
    ids = [row["id"] for row in catalog.list_entries()]
    assert ids == sorted(ids)
    for required in ["ex3_2", "ex3_3", "ex3_4", "ex3_5", "ex3_6", "ex3_7", "ex3_8", "ex3_9",
                     "ex4_1", "ex4_2", "ex4_3", "ex4_4", "ex4_5", "ex4_6", "ex5_1", "ex5_2", "ex5_3",
                     "rem1_2i", "rem1_2ii"]:
        assert required in ids


def test_anchors_quote_the_source():
    assert "constructed by R" in catalog.get("ex4_3").anchor
    assert "(a,b,c)" in catalog.get("ex4_5").anchor and "Lotka--Volterra systems" in catalog.get("ex4_5").anchor
    assert "not a first integral" in catalog.get("rem1_2i").anchor


def test_unknown_id():
    with pytest.raises(KeyError):
        catalog.get("ex9_9")


@pytest.mark.parametrize("entry_id", IDS)
def test_entry_meets_expectation(entry_id):
    result = catalog.run(entry_id, PLAN)
    assert result.report.mismatches == []
    assert result.report.classification.value == result.entry.spec.expect
    assert result.passed
    if result.drift is not None:
        assert result.drift.max_drift <= 1e-6


@pytest.mark.parametrize("entry_id", [e.id for e in catalog.entries() if e.spec.expected_F is not None])
def test_constructed_field_matches_display(entry_id):
    spec = catalog.get(entry_id).spec
    F = build_system(spec)
    for got, want in zip(F.components, spec.expected_F):
        diff = to_poly_nf(N.sub(got, want), spec.state_vars, laurent=True)
        assert diff is not None and diff.is_zero()


@pytest.mark.parametrize("entry_id", [e.id for e in catalog.entries() if e.kolmogorov])
def test_kolmogorov_shape(entry_id):
    spec = catalog.get(entry_id).spec
    F = build_system(spec)
    for v, comp in zip(spec.state_vars, F.components):
        p = to_poly_nf(comp, spec.state_vars)
        x = to_poly_nf(N.Var(v), spec.state_vars)
        q, r = p.divmod(x)
        assert r.is_zero() and q * x == p


def test_rikitake_integrals():
    report = catalog.run("ex4_4", PLAN).report
    H1, H2 = (r.H for r in report.integrals)
    xyz = ("x", "y", "z")
    assert to_poly_nf(N.sub(H1, parse("(y^2 - x^2)/2", xyz)), xyz).is_zero()
    assert report.integrals[1].verdict.value == "VerifiedNumeric"
    assert report.classification.value == "CompletelyIntegrableVerified"
    assert str(H2) == "(y - x)^2*exp(x^2 + z^2)"


def test_example_4_2_integrals():
    report = catalog.run("ex4_2", PLAN).report
    xyz = ("x", "y", "z")
    for r, want in zip(report.integrals, ("y*z*(x*z + x^2)", "y*z*(x*z - y)")):
        assert to_poly_nf(N.sub(r.H, parse(want, xyz)), xyz).is_zero()
    assert report.independence.rank == 2


def test_remark_counterexamples():
    r1 = catalog.run("rem1_2i", PLAN).report
    assert r1.integrals[0].verdict.value == "DegenerateConstant"
    assert "DegeneratePullback" in r1.integrals[0].flags
    r2 = catalog.run("rem1_2ii", PLAN).report
    assert r2.independence.rank_counts == {1: PLAN.count}


def test_n_dimensional_kolmogorov_adjugate_pattern():
    """adj(DPhi) is lower triangular with entries x_i P_ij and P_nn in the corner."""
    spec = catalog.get("ex5_3").spec
    xs = spec.state_vars
    n = len(xs)
    adj = adjugate(jacobian(spec.phi, xs))

    def P(i, j):  # 1-based, as in the closed form
        prod = N.ONE
        for mu in range(1, j - 1):
            prod = N.mul(prod, N.Var(xs[mu - 1]))
        for nu in range(j + 1, n):
            prod = N.mul(prod, N.Var(xs[nu - 1]))
        return prod if (i + j) % 2 == 0 else N.neg(prod)

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if j > i:
                want = N.ZERO
            elif i == j == n:
                want = P(n, n)
            else:
                want = N.mul(N.Var(xs[i - 1]), P(i, j))
            assert to_poly_nf(N.sub(adj[i - 1, j - 1], want), xs).is_zero(), (i, j)


@pytest.mark.parametrize("entry_id", IDS)
def test_export_round_trip(entry_id):
    entry = catalog.get(entry_id)
    again = parse_system(entry.export())
    assert again == entry.spec
    a = json.dumps(verify_spec(entry.spec, PLAN).to_dict(), sort_keys=True)
    b = json.dumps(verify_spec(again, PLAN).to_dict(), sort_keys=True)
    assert a == b


def test_bindings_surface_in_results():
    doc = catalog.run("ex3_4", PLAN).to_dict()
    assert doc["bindings"]["k"] == "1"
    assert doc["params"]["a"] == "sqrt(2) + k"
    assert isinstance(Fraction(catalog.get("ex3_3").bindings["b"]), Fraction)
