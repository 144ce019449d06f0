"""Lie-derivative checks, functional-independence ranks and the verification report."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .construct import (
    FirstIntegral,
    HypothesisReport,
    SystemSpec,
    VectorField,
    check_hypotheses,
)
from .expr import nodes as N
from .expr.nodes import Expr
from .expr.poly import polys_over
from .expr.zero import (
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

REPORT_SCHEMA = "adjflow.report/1"


def lie_derivative(H: Expr, F: VectorField) -> Expr:
    """grad(H) . F"""
    return N.total(N.mul(N.diff(H, v), f) for v, f in zip(F.state_vars, F.components))


class IntegralVerdict(str, enum.Enum):
    VERIFIED_SYMBOLIC = "VerifiedSymbolic"
    VERIFIED_NUMERIC = "VerifiedNumeric"
    FAILED_NONZERO = "FailedNonZero"
    DEGENERATE_CONSTANT = "DegenerateConstant"

    @property
    def verified(self) -> bool:
        return self in (IntegralVerdict.VERIFIED_SYMBOLIC, IntegralVerdict.VERIFIED_NUMERIC)


@dataclass(frozen=True)
class IntegralRecord:
    label: str
    provenance: str
    H: Expr
    verdict: IntegralVerdict
    lie: ZeroVerdict | None
    constancy: ConstVerdict
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "provenance": self.provenance,
            "H": str(self.H),
            "verdict": self.verdict.value,
            "lie_derivative": self.lie.to_dict() if self.lie else None,
            "constancy": self.constancy.to_dict(),
            "flags": list(self.flags),
        }


def verify_first_integral(H: FirstIntegral, F: VectorField, plan: SamplePlan, center=None) -> IntegralRecord:
    """Lie derivative zero test combined with non-constancy of H."""
    constancy = H.constancy or is_constant(H.H, plan, F.state_vars, center)
    if constancy.is_constant:
        return IntegralRecord(H.label, H.provenance, H.H, IntegralVerdict.DEGENERATE_CONSTANT, None, constancy, H.flags)
    lie = is_zero(lie_derivative(H.H, F), plan, F.state_vars, center)
    if lie.kind is ZeroKind.ZERO_SYMBOLIC:
        verdict = IntegralVerdict.VERIFIED_SYMBOLIC
    elif lie.kind is ZeroKind.ZERO_NUMERIC:
        verdict = IntegralVerdict.VERIFIED_NUMERIC
    else:
        verdict = IntegralVerdict.FAILED_NONZERO
    return IntegralRecord(H.label, H.provenance, H.H, verdict, lie, constancy, H.flags)


@dataclass(frozen=True)
class IndependenceRecord:
    m: int
    n: int
    method: str
    samples: int
    nonfinite: int
    rank_counts: dict[int, int]
    pass_fraction: float
    independent: bool

    @property
    def rank(self) -> int:
        """Most frequent rank over the samples (ties resolved downwards)."""
        if not self.rank_counts:
            return 0
        return min(self.rank_counts, key=lambda r: (-self.rank_counts[r], r))

    @property
    def max_rank(self) -> int:
        return max(self.rank_counts, default=0)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "method": self.method,
            "samples": self.samples,
            "nonfinite": self.nonfinite,
            "rank_counts": {str(k): v for k, v in sorted(self.rank_counts.items())},
            "rank": self.rank,
            "pass_fraction": self.pass_fraction,
            "independent": self.independent,
        }


def exact_rank(rows: list[list[Fraction]]) -> int:
    a = [r[:] for r in rows]
    rank, ncols = 0, len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, len(a)):
            if a[r][c]:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def numeric_rank(mat: np.ndarray, rank_tol: float) -> int:
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def independence_rank(Hs: Sequence[Expr], vars: Sequence[str], plan: SamplePlan, center=None) -> IndependenceRecord:
    """Rank of the gradient matrix of ``Hs`` at sampled points."""
    if not Hs:
        raise ValueError("independence_rank needs at least one function")
    m, n = len(Hs), len(vars)
    grads = [N.diff(H, v) for H in Hs for v in vars]
    counts: Counter[int] = Counter()
    polys = None
    if not any(N.params(g) for g in grads):
        polys = polys_over(grads, vars)
    if polys is not None:
        method, nonfinite = "exact", 0
        for pt in sample_points(plan, n, center):
            vals = [p.evaluate(pt) for p in polys]
            counts[exact_rank([vals[i * n:(i + 1) * n] for i in range(m)])] += 1
            if sum(counts.values()) == plan.count:
                break
    else:
        method = "svd"
        fs = float_samples(grads, vars, plan, center)
        nonfinite = fs.nonfinite
        for vals in fs.values:
            counts[numeric_rank(np.asarray(vals, dtype=float).reshape(m, n), plan.rank_tol)] += 1
    total = sum(counts.values())
    frac = counts.get(m, 0) / total
    return IndependenceRecord(m, n, method, total, nonfinite, dict(counts), frac,
                              frac >= plan.independence_threshold)


class Classification(str, enum.Enum):
    FAILED = "Failed"
    DEGENERATE = "Degenerate"
    PARTIALLY_VERIFIED = "PartiallyVerified"
    COMPLETELY_INTEGRABLE_VERIFIED = "CompletelyIntegrableVerified"

    @property
    def rank(self) -> int:
        return list(Classification).index(self)

    def __ge__(self, other):
        if isinstance(other, Classification):
            return self.rank >= other.rank
        return NotImplemented


def classify(n: int, hypotheses: HypothesisReport, records: Sequence[IntegralRecord],
             independence: IndependenceRecord | None) -> tuple[Classification, dict | None]:
    """Overall classification and, for failures, a witness."""
    for r in records:
        if r.verdict is IntegralVerdict.FAILED_NONZERO:
            return Classification.FAILED, {"integral": r.label, "lie_derivative": r.lie.to_dict()}
    if any(r.verdict is IntegralVerdict.DEGENERATE_CONSTANT for r in records):
        return Classification.DEGENERATE, None
    verified = [r for r in records if r.verdict.verified]
    if verified and (independence is None or not independence.independent):
        return Classification.DEGENERATE, None
    if len(verified) >= n - 1 and verified:
        return Classification.COMPLETELY_INTEGRABLE_VERIFIED, None
    if n == 1 or verified or hypotheses.theorem_applies:
        return Classification.PARTIALLY_VERIFIED, None
    return Classification.FAILED, {"hypotheses": list(hypotheses.flags)}


@dataclass
class VerificationReport:
    spec: SystemSpec
    field: VectorField
    hypotheses: HypothesisReport
    integrals: list[IntegralRecord]
    independence: IndependenceRecord | None
    classification: Classification
    witness: dict | None
    plan: SamplePlan
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Classification meets the declared expectation and nothing mismatched."""
        if self.mismatches:
            return False
        if self.spec.expect is None:
            return self.classification is not Classification.FAILED
        return self.classification >= Classification(self.spec.expect)

    def to_dict(self) -> dict:
        spec = self.spec
        return {
            "schema": REPORT_SCHEMA,
            "name": spec.name,
            "n": spec.n,
            "state_vars": list(spec.state_vars),
            "reduced_vars": list(spec.reduced_vars),
            "params": {k: v for k, v in spec.params},
            "phi": [str(e) for e in spec.phi],
            "G": [str(e) for e in spec.G],
            "R": str(spec.R),
            "F": [field_text(c, spec.state_vars) for c in self.field.components],
            "plan": self.plan.to_dict(),
            "hypotheses": self.hypotheses.to_dict(),
            "integrals": [r.to_dict() for r in self.integrals],
            "independence": self.independence.to_dict() if self.independence else None,
            "expectation_mismatches": self.mismatches,
            "expected_classification": spec.expect,
            "classification": self.classification.value,
            "witness": self.witness,
        }


def field_text(e: Expr, vars: Sequence[str]) -> str:
    """Expanded normal form when polynomial (or Laurent), otherwise the raw tree."""
    from .expr.poly import to_poly_nf

    for laurent in (False, True):
        p = to_poly_nf(e, vars, laurent=laurent)
        if p is not None:
            return str(p)
    return str(e)


def assemble_report(spec: SystemSpec, field: VectorField, integrals: Sequence[FirstIntegral],
                    plan: SamplePlan) -> VerificationReport:
    center = spec.base_point
    hyp = check_hypotheses(spec, plan, field)
    records = [verify_first_integral(H, field, plan, center) for H in integrals]
    verified = [r.H for r in records if r.verdict.verified]
    independence = independence_rank(verified, spec.state_vars, plan, center) if verified else None
    mismatches = list(field.mismatches)
    if spec.expected_H is not None:
        pulled = [H for H in integrals if H.provenance.startswith("pullback")]
        if len(pulled) != len(spec.expected_H):
            mismatches.append({"kind": "ExpectationMismatch", "integrals": len(pulled),
                               "expected": len(spec.expected_H)})
        for H, want in zip(pulled, spec.expected_H):
            verdict = equivalent(H.H, want, plan, spec.state_vars, center)
            if not verdict.is_zero:
                mismatches.append({"kind": "ExpectationMismatch", "integral": H.label,
                                   "verdict": verdict.to_dict()})
    cls, witness = classify(spec.n, hyp, records, independence)
    return VerificationReport(spec, field, hyp, records, independence, cls, witness, plan, mismatches)


def verify_spec(spec: SystemSpec, plan: SamplePlan | None = None) -> VerificationReport:
    """Full pipeline short of trajectory integration."""
    from .construct import build_system, pullback, user_integral

    plan = plan or SamplePlan()
    F = build_system(spec, plan)
    integrals = [pullback(spec, I, label, plan) for label, I in spec.reduced_integrals]
    integrals += [user_integral(spec, H, label, plan) for label, H in spec.state_integrals]
    return assemble_report(spec, F, integrals, plan)
