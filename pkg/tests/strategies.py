"""Hypothesis strategies for expressions, polynomials and matrices."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from adjflow.expr import nodes as N

VARS = ("x", "y", "z")

small_fractions = st.builds(
    Fraction,
    st.integers(-6, 6),
    st.integers(1, 4),
)
consts = small_fractions.map(N.Const)
variables = st.sampled_from(VARS).map(N.Var)


def _binary(children):
    return st.one_of(
        st.builds(N.add, children, children),
        st.builds(N.sub, children, children),
        st.builds(N.mul, children, children),
        st.builds(N.neg, children),
        st.builds(lambda b, k: N.power(b, N.Const(k)), children, st.integers(0, 3)),
    )


polynomials = st.recursive(st.one_of(consts, variables), _binary, max_leaves=8)


def _general(children):
    return st.one_of(
        _binary(children),
        st.builds(N.div, children, st.one_of(consts.filter(lambda c: c.value != 0), variables)),
        st.builds(N.exp, children),
        st.builds(N.sin, children),
        st.builds(N.cos, children),
    )


expressions = st.recursive(st.one_of(consts, variables), _general, max_leaves=8)


def _smooth(children):
    """Everywhere-defined smooth functions (for derivative checks)."""
    return st.one_of(
        _binary(children),
        st.builds(lambda e: N.exp(N.mul(N.Const(Fraction(1, 4)), e)), children),
        st.builds(N.sin, children),
        st.builds(N.cos, children),
        st.builds(lambda e: N.div(N.ONE, N.add(N.Const(2), N.sin(e))), children),
    )


smooth = st.recursive(st.one_of(consts, variables), _smooth, max_leaves=6)

points = st.tuples(*[st.floats(-1, 1, allow_nan=False) for _ in VARS])
rational_points = st.tuples(*[small_fractions for _ in VARS])


@st.composite
def rational_matrices(draw, min_n: int = 1, max_n: int = 5):
    n = draw(st.integers(min_n, max_n))
    return [[draw(small_fractions) for _ in range(n)] for _ in range(n)]
