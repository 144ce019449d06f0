"""Build F = R * adj(DPhi) * (G o Phi), pull integrals back and check hypotheses."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .expr import nodes as N
from .expr.nodes import DomainError, Expr, NotExact
from .expr.poly import to_poly_nf
from .expr.zero import ConstVerdict, SamplePlan, ZeroKind, ZeroVerdict, equivalent, is_constant, is_zero
from .symmat import SymMatrix, adjugate, determinant, jacobian, matvec

ALIASES = ("u", "v", "w", "s")


def reduced_names(n: int) -> tuple[str, ...]:
    """Reduced-system variable names: u, v, w, s up to n=4, else u1..un."""
    return ALIASES[:n] if n <= len(ALIASES) else tuple(f"u{i + 1}" for i in range(n))


def canonical_reduced(n: int) -> tuple[str, ...]:
    return tuple(f"u{i + 1}" for i in range(n))


@dataclass(frozen=True)
class SystemSpec:
    state_vars: tuple[str, ...]
    phi: tuple[Expr, ...]
    G: tuple[Expr, ...]
    R: Expr = N.ONE
    base_point: tuple = ()
    reduced_integrals: tuple[tuple[str, Expr], ...] = ()
    state_integrals: tuple[tuple[str, Expr], ...] = ()
    expected_F: tuple[Expr, ...] | None = None
    expected_H: tuple[Expr, ...] | None = None
    params: tuple[tuple[str, str], ...] = ()
    name: str = ""
    expect: str | None = None
    x0: tuple | None = None
    t_end: float | None = None

    def __post_init__(self):
        n = len(self.state_vars)
        if n < 1:
            raise ValueError("at least one state variable is required")
        if len(set(self.state_vars)) != n:
            raise ValueError(f"duplicate state variables {self.state_vars}")
        for label, comp in (("phi", self.phi), ("G", self.G)):
            if len(comp) != n:
                raise ValueError(f"{label} has {len(comp)} components, expected {n}")
        if not self.base_point:
            object.__setattr__(self, "base_point", (Fraction(0),) * n)
        if len(self.base_point) != n:
            raise ValueError(f"base point has {len(self.base_point)} coordinates, expected {n}")
        if self.expected_F is not None and len(self.expected_F) != n:
            raise ValueError(f"expected_F has {len(self.expected_F)} components, expected {n}")
        if self.x0 is not None and len(self.x0) != n:
            raise ValueError(f"x0 has {len(self.x0)} coordinates, expected {n}")
        stray = set().union(*(N.free_vars(e) for e in (*self.phi, self.R))) - set(self.state_vars)
        if stray:
            raise ValueError(f"phi/R use undeclared variables {sorted(stray)}")
        stray = set().union(*(N.free_vars(e) for e in self.G)) - set(self.reduced_vars)
        if stray:
            raise ValueError(f"G uses non-reduced variables {sorted(stray)}")

    @property
    def n(self) -> int:
        return len(self.state_vars)

    @property
    def reduced_vars(self) -> tuple[str, ...]:
        return reduced_names(self.n)

    def phi_binding(self) -> dict[str, Expr]:
        return dict(zip(self.reduced_vars, self.phi))


@dataclass(frozen=True)
class VectorField:
    state_vars: tuple[str, ...]
    components: tuple[Expr, ...]
    mismatches: tuple[dict, ...] = ()

    def __post_init__(self):
        if len(self.components) != len(self.state_vars):
            raise ValueError("component count must equal the dimension")

    @property
    def n(self) -> int:
        return len(self.state_vars)


@dataclass(frozen=True)
class FirstIntegral:
    label: str
    H: Expr
    provenance: str
    constancy: ConstVerdict | None = None
    flags: tuple[str, ...] = ()


def compose_G(spec: SystemSpec) -> list[Expr]:
    binding = spec.phi_binding()
    return [N.substitute(g, binding) for g in spec.G]


def dphi(spec: SystemSpec) -> SymMatrix:
    return jacobian(spec.phi, spec.state_vars)


def build_system(spec: SystemSpec, plan: SamplePlan | None = None) -> VectorField:
    """Vector field R * adj(DPhi) * (G o Phi), compared against ``expected_F``."""
    adj = adjugate(dphi(spec))
    comps = [N.mul(spec.R, c) for c in matvec(adj, compose_G(spec))]
    mismatches = []
    if spec.expected_F is not None:
        plan = plan or SamplePlan()
        for i, (got, want) in enumerate(zip(comps, spec.expected_F)):
            verdict = equivalent(got, want, plan, spec.state_vars, spec.base_point)
            if not verdict.is_zero:
                mismatches.append({"kind": "ExpectationMismatch", "component": i, "verdict": verdict.to_dict()})
    return VectorField(spec.state_vars, tuple(comps), tuple(mismatches))


def pullback(spec: SystemSpec, I: Expr, label: str = "I", plan: SamplePlan | None = None) -> FirstIntegral:
    """H = I o Phi with its constancy verdict; constant pullbacks are flagged."""
    plan = plan or SamplePlan()
    H = N.substitute(I, spec.phi_binding())
    verdict = is_constant(H, plan, spec.state_vars, spec.base_point)
    flags = ("DegeneratePullback",) if verdict.is_constant else ()
    return FirstIntegral(label, H, f"pullback({label})", verdict, flags)


def user_integral(spec: SystemSpec, H: Expr, label: str, plan: SamplePlan | None = None) -> FirstIntegral:
    plan = plan or SamplePlan()
    verdict = is_constant(H, plan, spec.state_vars, spec.base_point)
    return FirstIntegral(label, H, "user-supplied", verdict, ("Constant",) if verdict.is_constant else ())


def chain_residual(spec: SystemSpec, F: VectorField, I: Expr, R: Expr | None = None) -> Expr:
    """grad(I o Phi) . F  -  R det(DPhi) ((grad I) o Phi) . (G o Phi); zero for every I."""
    R = spec.R if R is None else R
    binding = spec.phi_binding()
    H = N.substitute(I, binding)
    lhs = N.total(N.mul(N.diff(H, v), f) for v, f in zip(spec.state_vars, F.components))
    gI = [N.substitute(N.diff(I, u), binding) for u in spec.reduced_vars]
    rhs = N.mul(N.mul(R, determinant(dphi(spec))), N.total(N.mul(a, b) for a, b in zip(gI, compose_G(spec))))
    return N.sub(lhs, rhs)


# -- values at a point ----------------------------------------------------------


def value_at(e: Expr, env) -> Fraction | float | None:
    """Exact value when possible, else float; None outside the domain."""
    try:
        return N.evaluate(e, env, exact=True)
    except NotExact:
        pass
    except DomainError:
        return None
    try:
        return N.evaluate(e, env, exact=False)
    except DomainError:
        return None


def num_json(v):
    if v is None:
        return None
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return v
    return float(v)


@dataclass
class HypothesisReport:
    base_point: tuple
    q: tuple
    phi_maps_base: bool
    G_at_q: tuple
    G_nonzero_at_q: bool
    F_at_p: tuple
    base_is_singular: bool
    R_verdict: ZeroVerdict
    R_nonzero_ae: bool
    det: str
    det_verdict: ZeroVerdict
    det_nonvanishing: bool
    preserves_dimension: str
    global_candidate: bool
    flags: list[str] = field(default_factory=list)

    @property
    def theorem_applies(self) -> bool:
        return self.phi_maps_base and self.G_nonzero_at_q and self.R_nonzero_ae and self.det_nonvanishing

    def to_dict(self) -> dict:
        return {
            "base_point": [num_json(v) for v in self.base_point],
            "q": [num_json(v) for v in self.q],
            "phi_maps_base": self.phi_maps_base,
            "G_at_q": [num_json(v) for v in self.G_at_q],
            "G_nonzero_at_q": self.G_nonzero_at_q,
            "F_at_p": [num_json(v) for v in self.F_at_p],
            "base_is_singular": self.base_is_singular,
            "R_nonzero_ae": self.R_nonzero_ae,
            "R_verdict": self.R_verdict.to_dict(),
            "det": self.det,
            "det_nonvanishing": self.det_nonvanishing,
            "det_verdict": self.det_verdict.to_dict(),
            "preserves_dimension": self.preserves_dimension,
            "global_candidate": self.global_candidate,
            "theorem_applies": self.theorem_applies,
            "flags": list(self.flags),
        }


def check_hypotheses(spec: SystemSpec, plan: SamplePlan | None = None, field: VectorField | None = None) -> HypothesisReport:
    """Evaluate the construction's hypotheses; findings are report fields, never errors."""
    plan = plan or SamplePlan()
    field = field or build_system(spec)
    p_env = dict(zip(spec.state_vars, spec.base_point))
    q = tuple(value_at(c, p_env) for c in spec.phi)
    phi_maps_base = all(v is not None for v in q)
    flags: list[str] = []

    G_at_q: tuple = (None,) * spec.n
    if phi_maps_base:
        G_at_q = tuple(value_at(g, dict(zip(spec.reduced_vars, q))) for g in spec.G)
    else:
        flags.append("PhiUndefinedAtBase")
    G_nonzero = any(v is not None and v != 0 for v in G_at_q)
    if not G_nonzero:
        flags.append("GVanishesAtBase")

    F_at_p = tuple(value_at(c, p_env) for c in field.components)
    singular = all(v is not None and v == 0 for v in F_at_p)

    R_verdict = is_zero(spec.R, plan, spec.state_vars, spec.base_point)
    R_nonzero = R_verdict.kind is ZeroKind.NONZERO
    if not R_nonzero:
        flags.append("RVanishes")

    det = determinant(dphi(spec))
    det_verdict = is_zero(det, plan, spec.state_vars, spec.base_point)
    det_ok = det_verdict.kind is ZeroKind.NONZERO
    if not det_ok:
        flags.append("SufficientConditionFailed")

    polynomial = all(to_poly_nf(e) is not None and not N.params(e) for e in (*spec.phi, *spec.G, spec.R))
    det_nf = to_poly_nf(det, spec.state_vars)
    return HypothesisReport(
        base_point=tuple(spec.base_point),
        q=q,
        phi_maps_base=phi_maps_base,
        G_at_q=G_at_q,
        G_nonzero_at_q=G_nonzero,
        F_at_p=F_at_p,
        base_is_singular=singular,
        R_verdict=R_verdict,
        R_nonzero_ae=R_nonzero,
        det=str(det_nf) if det_nf is not None else str(det),
        det_verdict=det_verdict,
        det_nonvanishing=det_ok,
        preserves_dimension="certified" if det_ok else "unknown",
        global_candidate=polynomial,
        flags=flags,
    )


def translated(spec: SystemSpec, p: Sequence) -> SystemSpec:
    """Re-express ``spec`` in coordinates centred at state point ``p`` and image q = Phi(p).

    Returns a spec over the same names with x -> x + p, u -> u + q, base point 0.
    """
    p = tuple(Fraction(c) if not isinstance(c, float) else c for c in p)
    env = dict(zip(spec.state_vars, p))
    q = [value_at(c, env) for c in spec.phi]
    shift_x = {v: N.add(N.Var(v), N.as_expr(c)) for v, c in zip(spec.state_vars, p)}
    shift_u = {u: N.add(N.Var(u), N.as_expr(c)) for u, c in zip(spec.reduced_vars, q)}
    phi = tuple(N.sub(N.substitute(c, shift_x), N.as_expr(qc)) for c, qc in zip(spec.phi, q))
    G = tuple(N.substitute(g, shift_u, strict=False) for g in spec.G)
    R = N.substitute(spec.R, shift_x, strict=False)
    integrals = tuple((lab, N.substitute(I, shift_u, strict=False)) for lab, I in spec.reduced_integrals)
    return replace(
        spec, phi=phi, G=G, R=R, base_point=(Fraction(0),) * spec.n,
        reduced_integrals=integrals, state_integrals=(), expected_F=None, expected_H=None, x0=None,
    )
