"""Sparse multivariate polynomials with exact rational coefficients.

``PolyNF`` is the canonical form used to decide polynomial identities
exactly.  A Laurent variant (negative integer exponents allowed) covers
fields with monomial denominators such as ``z^-1``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import nodes as N
from .nodes import Expr

Monomial = tuple[int, ...]


def _grlex(m: Monomial):
    return (sum(m), m)


class PolyNF:
    """Polynomial in the indeterminates ``names``.

    ``terms`` never stores a zero coefficient, so two polynomials over the
    same names are equal iff their term maps are equal.
    """

    __slots__ = ("names", "_terms")

    def __init__(self, names: Sequence[str], terms: Mapping[Monomial, Fraction] | None = None):
        self.names = tuple(names)
        clean = {}
        for mono, c in (terms or {}).items():
            if len(mono) != len(self.names):
                raise ValueError("exponent vector length does not match variable count")
            if c:
                clean[tuple(mono)] = Fraction(c)
        self._terms = clean

    # -- construction --------------------------------------------------------

    @classmethod
    def constant(cls, names: Sequence[str], c) -> "PolyNF":
        return cls(names, {(0,) * len(names): Fraction(c)})

    @classmethod
    def variable(cls, names: Sequence[str], name: str) -> "PolyNF":
        mono = tuple(int(n == name) for n in names)
        return cls(names, {mono: Fraction(1)})

    # -- inspection ------------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def is_laurent(self) -> bool:
        return any(e < 0 for m in self._terms for e in m)

    def depends_on(self, name: str) -> bool:
        if name not in self.names:
            return False
        i = self.names.index(name)
        return any(m[i] for m in self._terms)

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def min_exponent(self, name: str) -> int:
        i = self.names.index(name)
        return min((m[i] for m in self._terms), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyNF):
            return self.names == other.names and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.names, frozenset(self._terms.items())))

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "PolyNF") -> None:
        if self.names != other.names:
            raise ValueError(f"variable mismatch: {self.names} vs {other.names}")

    def _lift(self, other) -> "PolyNF":
        if isinstance(other, PolyNF):
            self._check(other)
            return other
        return PolyNF.constant(self.names, other)

    def __add__(self, other) -> "PolyNF":
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return PolyNF(self.names, out)

    __radd__ = __add__

    def __neg__(self) -> "PolyNF":
        return PolyNF(self.names, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "PolyNF":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "PolyNF":
        return self._lift(other) - self

    def __mul__(self, other) -> "PolyNF":
        other = self._lift(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return PolyNF(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PolyNF":
        if k < 0:
            inv = self.monomial_inverse()
            if inv is None:
                raise ValueError("negative power of a non-monomial")
            return inv ** (-k)
        result = PolyNF.constant(self.names, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monomial_inverse(self) -> "PolyNF | None":
        """Inverse of a single-term polynomial, else None."""
        if len(self._terms) != 1:
            return None
        (m, c), = self._terms.items()
        return PolyNF(self.names, {tuple(-e for e in m): 1 / c})

    def scale(self, c) -> "PolyNF":
        return PolyNF(self.names, {m: v * c for m, v in self._terms.items()})

    def leading(self) -> tuple[Monomial, Fraction]:
        m = max(self._terms, key=_grlex)
        return m, self._terms[m]

    def divmod(self, divisor: "PolyNF") -> tuple["PolyNF", "PolyNF"]:
        """Multivariate division by a single divisor (grlex leading terms)."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lm, lc = divisor.leading()
        quot: dict[Monomial, Fraction] = {}
        rem: dict[Monomial, Fraction] = {}
        work = PolyNF(self.names, self._terms)
        while not work.is_zero():
            m, c = work.leading()
            if all(a >= b for a, b in zip(m, lm)):
                qm = tuple(a - b for a, b in zip(m, lm))
                qc = c / lc
                quot[qm] = quot.get(qm, 0) + qc
                work = work - PolyNF(self.names, {qm: qc}) * divisor
            else:
                rem[m] = rem.get(m, 0) + c
                work = work - PolyNF(self.names, {m: c})
        return PolyNF(self.names, quot), PolyNF(self.names, rem)

    def exact_div(self, divisor: "PolyNF") -> "PolyNF":
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def divisible_by_var(self, name: str) -> bool:
        """True if every term carries ``name`` to a positive power."""
        i = self.names.index(name)
        return all(m[i] >= 1 for m in self._terms)

    def with_names(self, names: Sequence[str]) -> "PolyNF":
        """Re-express over a superset (or reordering) of the current names."""
        names = tuple(names)
        missing = [n for n in self.names if n not in names]
        for n in missing:
            if self.depends_on(n):
                raise ValueError(f"polynomial depends on dropped variable {n}")
        idx = {n: i for i, n in enumerate(self.names)}
        out = {}
        for m, c in self._terms.items():
            out[tuple(m[idx[n]] if n in idx else 0 for n in names)] = c
        return PolyNF(names, out)

    # -- evaluation and conversion ---------------------------------------------

    def evaluate(self, point: Mapping[str, object] | Sequence, exact: bool = True):
        if isinstance(point, Mapping):
            values = [point[n] for n in self.names]
        else:
            values = list(point)
        values = [Fraction(v) if exact else float(v) for v in values]
        acc = Fraction(0) if exact else 0.0
        for m, c in self._terms.items():
            t = c if exact else float(c)
            for v, e in zip(values, m):
                if e:
                    t = t * v**e
            acc += t
        return acc

    def to_expr(self, params: Mapping[str, float] | None = None) -> Expr:
        """Expanded expression; names found in ``params`` become parameters."""
        params = params or {}
        atoms = [N.Param(n, params[n]) if n in params else N.Var(n) for n in self.names]
        out: Expr = N.ZERO
        for m, c in self.terms:
            mono: Expr = N.ONE
            for atom, e in zip(atoms, m):
                if e:
                    mono = N.mul(mono, N.power(atom, N.Const(Fraction(e))))
            if c < 0:
                out = N.sub(out, N.mul(N.Const(-c), mono))
            else:
                out = N.add(out, N.mul(N.Const(c), mono))
        return out

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.terms:
            factors = []
            for n, e in zip(self.names, m):
                if e == 1:
                    factors.append(n)
                elif e:
                    factors.append(f"{n}^{e}" if e > 0 else f"{n}^({e})")
            mag = abs(c)
            coef = "" if mag == 1 and factors else (str(mag) if mag.denominator == 1 else f"({mag})")
            body = "*".join(([coef] if coef else []) + factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"PolyNF({self.names}, {self})"


class _NotPolynomial(Exception):
    pass


def default_names(e: Expr) -> tuple[str, ...]:
    return tuple(sorted(N.free_vars(e))) + tuple(sorted(N.params(e)))


def to_poly_nf(e: Expr, names: Sequence[str] | None = None, laurent: bool = False) -> PolyNF | None:
    """Canonical polynomial form of ``e``, or ``None`` if it is not polynomial.

    Parameters count as indeterminates.  Names absent from ``names`` are
    appended (variables first, then parameters, each sorted).  With
    ``laurent`` negative integer powers and division by monomials are
    accepted.
    """
    names = tuple(names) if names is not None else ()
    extra = [n for n in default_names(e) if n not in names]
    names = names + tuple(extra)
    memo: dict[int, PolyNF] = {}

    def go(node: Expr) -> PolyNF:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, N.Const):
            out = PolyNF.constant(names, node.value)
        elif isinstance(node, (N.Var, N.Param)):
            out = PolyNF.variable(names, node.name)
        elif isinstance(node, N.Add):
            out = go(node.left) + go(node.right)
        elif isinstance(node, N.Mul):
            out = go(node.left) * go(node.right)
        elif isinstance(node, N.Neg):
            out = -go(node.arg)
        elif isinstance(node, N.Div):
            den = go(node.den)
            if den.is_zero():
                raise _NotPolynomial
            if den.is_constant():
                out = go(node.num).scale(1 / den.coefficient((0,) * len(names)))
            elif laurent and len(den) == 1:
                out = go(node.num) * den.monomial_inverse()
            else:
                raise _NotPolynomial
        elif isinstance(node, N.Pow):
            x = node.exp
            if not isinstance(x, N.Const) or x.value.denominator != 1:
                raise _NotPolynomial
            k = int(x.value)
            base = go(node.base)
            if k < 0 and not (laurent and len(base) == 1):
                raise _NotPolynomial
            out = base ** k
        else:
            raise _NotPolynomial
        if out.is_laurent() and not laurent:
            raise _NotPolynomial
        memo[key] = out
        return out

    try:
        return go(e)
    except _NotPolynomial:
        return None


def polys_over(exprs: Iterable[Expr], names: Sequence[str], laurent: bool = False) -> list[PolyNF] | None:
    """Normal forms of several expressions over one common variable list."""
    exprs = list(exprs)
    allnames = tuple(names)
    for e in exprs:
        allnames += tuple(n for n in default_names(e) if n not in allnames)
    out = []
    for e in exprs:
        p = to_poly_nf(e, allnames, laurent=laurent)
        if p is None:
            return None
        out.append(p)
    return out
