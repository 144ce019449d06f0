"""Matrices of expressions: Jacobians, determinants, adjugates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expr import nodes as N
from .expr.nodes import Expr
from .expr.poly import PolyNF, polys_over

# cofactor expansion up to this size; fraction-free elimination above
LAPLACE_MAX = 4


@dataclass(frozen=True)
class SymMatrix:
    entries: tuple[tuple[Expr, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(N.as_expr(x) for x in row) for row in self.entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows) -> "SymMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(tuple(tuple(N.ONE if i == j else N.ZERO for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Expr:
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "SymMatrix":
        return SymMatrix(tuple(zip(*self.entries)))

    def minor(self, i: int, j: int) -> "SymMatrix":
        return SymMatrix(tuple(
            tuple(x for c, x in enumerate(row) if c != j)
            for r, row in enumerate(self.entries) if r != i
        ))

    def map(self, fn) -> "SymMatrix":
        return SymMatrix(tuple(tuple(fn(x) for x in row) for row in self.entries))

    def __matmul__(self, other: "SymMatrix") -> "SymMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return SymMatrix(tuple(
            tuple(N.total(N.mul(self[i, k], other[k, j]) for k in range(self.cols)) for j in range(other.cols))
            for i in range(self.rows)
        ))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries) + "]"


def jacobian(components: Sequence[Expr], vars: Sequence[str]) -> SymMatrix:
    """Entry (i, j) is the derivative of component i with respect to vars[j]."""
    return SymMatrix(tuple(tuple(N.diff(c, v) for v in vars) for c in components))


def _laplace(m: SymMatrix) -> Expr:
    n = m.rows
    if n == 0:
        return N.ONE
    if n == 1:
        return m[0, 0]
    if n == 2:
        return N.sub(N.mul(m[0, 0], m[1, 1]), N.mul(m[0, 1], m[1, 0]))
    # expand along the row with the most literal zeros
    row = max(range(n), key=lambda r: sum(N.is_const(x, 0) for x in m.entries[r]))
    terms = []
    for j, a in enumerate(m.entries[row]):
        if N.is_const(a, 0):
            continue
        t = N.mul(a, _laplace(m.minor(row, j)))
        terms.append(N.neg(t) if (row + j) % 2 else t)
    return N.total(terms)


def _bareiss(polys: list[list[PolyNF]]) -> PolyNF:
    a = [row[:] for row in polys]
    n = len(a)
    names = a[0][0].names
    sign = 1
    prev = PolyNF.constant(names, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if swap is None:
                return PolyNF(names)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1].scale(sign)


def determinant(m: SymMatrix) -> Expr:
    """Exact determinant; cofactor expansion for n <= 4, Bareiss above."""
    if not m.is_square:
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    if m.rows <= LAPLACE_MAX:
        return _laplace(m)
    flat = [x for row in m.entries for x in row]
    polys = polys_over(flat, ())
    if polys is None:
        return _laplace(m)
    n = m.rows
    grid = [polys[i * n:(i + 1) * n] for i in range(n)]
    pvals = {}
    for x in flat:
        pvals.update(N.params(x))
    return _bareiss(grid).to_expr(pvals)


def adjugate(m: SymMatrix) -> SymMatrix:
    """Transpose of the cofactor matrix: entry (i, j) = (-1)^(i+j) det(minor(j, i))."""
    if not m.is_square:
        raise ValueError(f"adjugate of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 1:
        return SymMatrix(((N.ONE,),))
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            d = determinant(m.minor(j, i))
            row.append(N.neg(d) if (i + j) % 2 else d)
        out.append(tuple(row))
    return SymMatrix(tuple(out))


def matvec(m: SymMatrix, v: Sequence[Expr]) -> list[Expr]:
    if m.cols != len(v):
        raise ValueError(f"matrix has {m.cols} columns, vector has {len(v)} entries")
    return [N.total(N.mul(a, b) for a, b in zip(row, v)) for row in m.entries]


def rational_matrix(rows: Sequence[Sequence]) -> SymMatrix:
    return SymMatrix(tuple(tuple(N.Const(Fraction(x)) for x in row) for row in rows))
