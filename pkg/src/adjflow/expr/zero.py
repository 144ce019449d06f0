"""Zero and constancy tests: exact through normal forms, else by seeded sampling."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import nodes as N
from .nodes import DomainError, Expr
from .poly import PolyNF, to_poly_nf

# sample coordinates live on a dyadic grid so float and exact paths share points
GRID_BITS = 20


class AllSamplesNonFinite(ArithmeticError):
    """Too many sample evaluations hit poles or domain errors."""


@dataclass(frozen=True)
class SamplePlan:
    seed: int = 0
    count: int = 200
    half_width: float = 1.0
    box: tuple[tuple[float, float], ...] | None = None
    zero_tol: float = 1e-9
    rank_tol: float = 1e-8
    max_nonfinite: float = 0.5
    independence_threshold: float = 0.99

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.zero_tol <= 0 or self.rank_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.half_width <= 0:
            raise ValueError("box must have positive width")
        if self.box is not None:
            object.__setattr__(self, "box", tuple((float(lo), float(hi)) for lo, hi in self.box))
            if any(hi <= lo for lo, hi in self.box):
                raise ValueError("box must have positive width in every coordinate")

    def bounds(self, nvars: int, center: Sequence | None = None) -> list[tuple[Fraction, Fraction]]:
        if self.box is not None:
            if len(self.box) != nvars:
                raise ValueError(f"box has {len(self.box)} intervals for {nvars} variables")
            return [(Fraction(lo), Fraction(hi)) for lo, hi in self.box]
        center = center if center is not None else [0] * nvars
        w = Fraction(self.half_width)
        return [(Fraction(c) - w, Fraction(c) + w) for c in center]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "half_width": self.half_width,
            "box": [list(b) for b in self.box] if self.box else None,
            "zero_tol": self.zero_tol,
            "rank_tol": self.rank_tol,
            "max_nonfinite": self.max_nonfinite,
            "independence_threshold": self.independence_threshold,
        }


def sample_points(plan: SamplePlan, nvars: int, center: Sequence | None = None) -> Iterator[tuple[Fraction, ...]]:
    """Deterministic stream of at most ``2 * plan.count`` dyadic points."""
    bounds = plan.bounds(nvars, center)
    rng = np.random.default_rng(plan.seed)
    scale = 2**GRID_BITS
    ks = rng.integers(0, scale + 1, size=(2 * plan.count, nvars))
    for row in ks:
        yield tuple(lo + (hi - lo) * Fraction(int(k), scale) for (lo, hi), k in zip(bounds, row))


def _state_names(e: Expr, vars: Sequence[str] | None) -> tuple[str, ...]:
    names = tuple(vars) if vars is not None else ()
    return names + tuple(sorted(N.free_vars(e) - set(names)))


@dataclass
class FloatSamples:
    points: list[tuple[Fraction, ...]] = field(default_factory=list)
    values: list[tuple[float, ...]] = field(default_factory=list)
    nonfinite: int = 0


def float_samples(exprs: Sequence[Expr], names: Sequence[str], plan: SamplePlan, center=None) -> FloatSamples:
    """Evaluate ``exprs`` at up to ``plan.count`` finite sample points."""
    f = N.lambdify(exprs, names)
    out = FloatSamples()
    for pt in sample_points(plan, len(names), center):
        try:
            vals = f(*(float(c) for c in pt))
        except DomainError:
            vals = None
        if vals is None or not all(math.isfinite(v) for v in vals):
            out.nonfinite += 1
        else:
            out.points.append(pt)
            out.values.append(vals)
            if len(out.points) == plan.count:
                break
    attempts = len(out.points) + out.nonfinite
    if not out.points or out.nonfinite > plan.max_nonfinite * attempts:
        raise AllSamplesNonFinite(f"{out.nonfinite} of {attempts} sample evaluations were not finite")
    return out


class ZeroKind(str, enum.Enum):
    ZERO_SYMBOLIC = "ZeroSymbolic"
    ZERO_NUMERIC = "ZeroNumeric"
    NONZERO = "NonZero"


@dataclass(frozen=True)
class ZeroVerdict:
    kind: ZeroKind
    method: str
    samples: int = 0
    nonfinite: int = 0
    max_abs: float | None = None
    witness: tuple[float, ...] | None = None
    value: float | None = None

    @property
    def is_zero(self) -> bool:
        return self.kind is not ZeroKind.NONZERO

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "method": self.method,
            "samples": self.samples,
            "nonfinite": self.nonfinite,
            "max_abs": self.max_abs,
            "witness": list(self.witness) if self.witness is not None else None,
            "value": self.value,
        }


def _normal_form(e: Expr, names: Sequence[str]) -> PolyNF | None:
    p = to_poly_nf(e, names)
    return p if p is not None else to_poly_nf(e, names, laurent=True)


def _exact_witness(p: PolyNF, names: Sequence[str], plan: SamplePlan, center) -> ZeroVerdict | None:
    for i, pt in enumerate(sample_points(plan, len(names), center)):
        env = dict(zip(names, pt))
        if any(env[n] == 0 and p.min_exponent(n) < 0 for n in names):
            continue
        val = p.evaluate(env)
        if val != 0:
            return ZeroVerdict(
                ZeroKind.NONZERO, "exact", samples=i + 1,
                witness=tuple(float(c) for c in pt), value=float(val),
            )
    return None


def is_zero(e: Expr, plan: SamplePlan, vars: Sequence[str] | None = None, center=None,
            scale: Sequence[Expr] = ()) -> ZeroVerdict:
    """Decide whether ``e`` vanishes identically.

    Polynomial (or Laurent) expressions are decided exactly.  Anything else
    is sampled: zero iff ``|e| <= zero_tol * max(1, |s| for s in scale)`` at
    every finite sample.
    """
    names = _state_names(e, vars)
    p = _normal_form(e, names)
    if p is not None:
        if p.is_zero():
            return ZeroVerdict(ZeroKind.ZERO_SYMBOLIC, "laurent" if p.is_laurent() else "polynomial")
        if not N.params(e):
            found = _exact_witness(p, names, plan, center)
            if found is not None:
                return found
    fs = float_samples([e, *scale], names, plan, center)
    worst, where, excess = 0.0, None, 0.0
    for pt, vals in zip(fs.points, fs.values):
        mag = abs(vals[0])
        bound = plan.zero_tol * max([1.0] + [abs(v) for v in vals[1:]])
        if mag > worst:
            worst = mag
        if mag - bound > excess:
            excess, where = mag - bound, (pt, vals[0])
    if where is None:
        return ZeroVerdict(ZeroKind.ZERO_NUMERIC, "sampled", len(fs.points), fs.nonfinite, worst)
    pt, val = where
    return ZeroVerdict(
        ZeroKind.NONZERO, "sampled", len(fs.points), fs.nonfinite, worst,
        tuple(float(c) for c in pt), val,
    )


def equivalent(a: Expr, b: Expr, plan: SamplePlan, vars: Sequence[str] | None = None, center=None) -> ZeroVerdict:
    """Zero test of ``a - b``, sampled tolerance relative to ``max(1, |a|, |b|)``."""
    return is_zero(N.sub(a, b), plan, vars, center, scale=(a, b))


class ConstKind(str, enum.Enum):
    CONSTANT_SYMBOLIC = "ConstantSymbolic"
    CONSTANT_NUMERIC = "ConstantNumeric"
    NONCONSTANT = "NonConstant"


@dataclass(frozen=True)
class ConstVerdict:
    kind: ConstKind
    method: str
    spread: float | None = None
    samples: int = 0

    @property
    def is_constant(self) -> bool:
        return self.kind is not ConstKind.NONCONSTANT

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "method": self.method, "spread": self.spread, "samples": self.samples}


def is_constant(e: Expr, plan: SamplePlan, vars: Sequence[str] | None = None, center=None) -> ConstVerdict:
    """Decide whether ``e`` is locally constant in the variables."""
    names = _state_names(e, vars)
    state = N.free_vars(e)
    if not state:
        return ConstVerdict(ConstKind.CONSTANT_SYMBOLIC, "no variables")
    p = _normal_form(e, names)
    if p is not None:
        if any(p.depends_on(v) for v in state):
            return ConstVerdict(ConstKind.NONCONSTANT, "polynomial")
        return ConstVerdict(ConstKind.CONSTANT_SYMBOLIC, "polynomial")
    fs = float_samples([e], names, plan, center)
    vals = [v[0] for v in fs.values]
    spread = max(vals) - min(vals)
    kind = ConstKind.CONSTANT_NUMERIC if spread <= plan.zero_tol else ConstKind.NONCONSTANT
    return ConstVerdict(kind, "sampled", spread, len(vals))
