from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from adjflow.expr import nodes as N
from adjflow.expr import PolyNF, parse, to_poly_nf
from adjflow.symmat import SymMatrix, adjugate, determinant, jacobian, matvec, rational_matrix

from .strategies import VARS, polynomials, rational_matrices


def exact(m: SymMatrix) -> list[list[Fraction]]:
    return [[N.evaluate(x, {}) for x in row] for row in m.entries]


def poly_rows(m: SymMatrix):
    return [[to_poly_nf(x, VARS) for x in row] for row in m.entries]


def test_two_by_two():
    m = rational_matrix([[1, 2], [3, 4]])
    assert exact(adjugate(m)) == [[4, -2], [-3, 1]]
    assert N.evaluate(determinant(m), {}) == -2


def test_one_by_one_adjugate_is_identity():
    assert exact(adjugate(rational_matrix([[5]]))) == [[1]]


def test_rikitake_adjugate():
    phi = [parse(t, VARS) for t in ("(x + y)/2", "y - x", "x^2 + z^2")]
    adj = adjugate(jacobian(phi, VARS))
    want = [[parse(t, VARS) for t in row] for row in (("2*z", "-z", "0"), ("2*z", "z", "0"), ("-2*x", "x", "1"))]
    for got_row, want_row in zip(adj.entries, want):
        for got, w in zip(got_row, want_row):
            assert to_poly_nf(N.sub(got, w), VARS).is_zero()
    assert to_poly_nf(determinant(jacobian(phi, VARS)), VARS) == to_poly_nf(parse("2*z", VARS), VARS)


@given(rational_matrices())
def test_determinant_matches_sympy(rows):
    assert N.evaluate(determinant(rational_matrix(rows)), {}) == Fraction(str(sympy.Matrix(rows).det()))


@given(rational_matrices())
def test_adjugate_identity_exact(rows):
    m = rational_matrix(rows)
    d = N.evaluate(determinant(m), {})
    n = len(rows)
    prod = exact(m @ adjugate(m))
    assert prod == [[d if i == j else 0 for j in range(n)] for i in range(n)]


@given(rational_matrices())
def test_transpose_invariance(rows):
    m = rational_matrix(rows)
    assert N.evaluate(determinant(m), {}) == N.evaluate(determinant(m.transpose()), {})


@given(rational_matrices(min_n=2, max_n=4))
def test_adjugate_of_adjugate(rows):
    m = rational_matrix(rows)
    n = len(rows)
    d = N.evaluate(determinant(m), {})
    assert exact(adjugate(adjugate(m))) == [[d ** (n - 2) * x for x in row] for row in rows]


@settings(max_examples=30)
@given(st.integers(5, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_fraction_free_elimination_matches_numpy(rows):
    got = float(N.evaluate(determinant(rational_matrix(rows)), {}))
    assert got == pytest.approx(np.linalg.det(np.array(rows, dtype=float)), abs=1e-6)


@settings(max_examples=40)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(polynomials, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_adjugate_identity_polynomial(rows):
    m = SymMatrix.from_rows(rows)
    n = len(rows)
    det = to_poly_nf(determinant(m), VARS)
    prod = poly_rows(m @ adjugate(m))
    for i in range(n):
        for j in range(n):
            assert prod[i][j] == (det if i == j else PolyNF(VARS))


def test_bareiss_on_polynomial_five_by_five():
    # the Jacobian of (x1, x1 x2, x2 x3, x3 x4, x4 x5) is lower triangular
    xs = [f"x{i}" for i in range(1, 6)]
    phi = [N.Var("x1")] + [N.mul(N.Var(xs[i - 1]), N.Var(xs[i])) for i in range(1, 5)]
    d = determinant(jacobian(phi, xs))
    want = parse("x1*x2*x3*x4", xs)
    assert to_poly_nf(N.sub(d, want), xs).is_zero()


def test_matvec_and_shape_errors():
    m = rational_matrix([[1, 2], [3, 4]])
    assert [N.evaluate(x, {}) for x in matvec(m, [N.ONE, N.ONE])] == [3, 7]
    with pytest.raises(ValueError):
        determinant(rational_matrix([[1, 2]]))
    with pytest.raises(ValueError):
        SymMatrix(((N.ONE,), (N.ONE, N.ONE)))
