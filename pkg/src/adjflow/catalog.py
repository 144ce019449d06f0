"""Worked examples as pinned system specs: the regression corpus."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .construct import SystemSpec
from .expr.zero import SamplePlan
from .odeint import DriftRecord, TrajectoryRequest, conservation_drift, integrate
from .sysfile import format_system, parse_system
from .verify import VerificationReport, verify_spec


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    locus: str
    anchor: str
    system: str
    bindings: dict[str, str] = field(default_factory=dict)
    displays_F: bool = True
    kolmogorov: bool = False

    @cached_property
    def spec(self) -> SystemSpec:
        return parse_system(self.system, f"catalog:{self.id}")

    def summary(self) -> dict:
        spec = self.spec
        return {
            "id": self.id,
            "locus": self.locus,
            "anchor": self.anchor,
            "n": spec.n,
            "expect": spec.expect,
            "bindings": dict(self.bindings),
        }

    def export(self) -> str:
        return f"# {self.id}: {self.locus}\n" + format_system(self.spec)


_ENTRIES = [
    CatalogEntry(
        "ex3_2", "planar Kolmogorov system", "which is a  Kolmogorov planar system",
        """
        name = ex3_2
        vars = x, y
        phi = x*y, x + y^2/2
        G = u, 1 - u
        R = 1
        integrals = I: u*exp(-u - v)
        expected_F = x*(-1 + x*y + y^2), y*(1 - x - x*y)
        expected_H = x*y*exp(-x - x*y - y^2/2)
        expect = CompletelyIntegrableVerified
        x0 = 1/2, 1/2
        """,
        kolmogorov=True,
    ),
    CatalogEntry(
        "ex3_3", "planar nilpotent center", "polynomial first integral",
        """
        name = ex3_3
        vars = x, y
        params = b = 1
        phi = x^2/2 + b*y^2/2, y^2/2
        G = 1, -2*u
        R = 1
        integrals = I: v + u^2
        expected_F = y + b*x^2*y + b^2*y^3, -x^3 - b*x*y^2
        expected_H = y^2/2 + (x^2/2 + b*y^2/2)^2
        expect = CompletelyIntegrableVerified
        x0 = 1/2, 3/10
        """,
        {"b": "1"},
    ),
    CatalogEntry(
        "ex3_4", "degenerate center with a C^k first integral", "has a degenerated global center at",
        """
        name = ex3_4
        vars = x, y
        params = k = 1, a = sqrt(2) + k
        phi = x^2, y^2
        G = (a + 3)*u + 2*a*v, -2*a*u - (4*a - 3)*v
        R = 1
        integrals = I: (u + 2*v)*(2*u + v)^(a - 1)
        expected_F = 2*(a + 3)*x^2*y + 4*a*y^3, -4*a*x^3 - 2*(4*a - 3)*x*y^2
        expected_H = (x^2 + 2*y^2)*(2*x^2 + y^2)^(a - 1)
        expect = CompletelyIntegrableVerified
        x0 = 1/2, 3/10
        """,
        {"k": "1", "a": "sqrt(2) + 1 (opaque irrational)"},
    ),
    CatalogEntry(
        "ex3_5", "Loud system, quadratic reduced system", "also called  Loud systems",
        """
        name = ex3_5
        vars = x, y
        params = alpha = 1, beta = 1, gamma = 2
        phi = x, y^2/2
        G = 1 + alpha*u, -u + beta*u^2 + 2*gamma*v
        R = 1
        expected_F = y + alpha*x*y, -x + beta*x^2 + gamma*y^2
        expect = PartiallyVerified
        """,
        {"alpha": "1", "beta": "1", "gamma": "2"},
    ),
    CatalogEntry(
        "ex3_5_linear", "Loud system, linear reduced system", "we can get a reduced system that is linear",
        """
        name = ex3_5_linear
        vars = x, y
        params = alpha = 1, beta = 1, gamma = 2
        phi = x^2 + (gamma - alpha)*y^2/beta, (gamma - alpha)*x
        G = -beta*gamma*u/(gamma - alpha)^2 + (gamma - alpha - beta)*v/(gamma - alpha)^3, -(1/2)*beta*alpha*v/(gamma - alpha)^2 - (1/2)*beta/(gamma - alpha)
        R = 1
        expected_F = y + alpha*x*y, -x + beta*x^2 + gamma*y^2
        expect = PartiallyVerified
        """,
        {"alpha": "1", "beta": "1", "gamma": "2"},
        displays_F=False,
    ),
    CatalogEntry(
        "ex3_6", "Lienard system", "The analytic Li\\'enard system",
        """
        name = ex3_6
        vars = x, y
        phi = x^2, y
        G = v, -((1 + u) + v*u)/2
        R = 1
        expected_F = y, -x*(1 + x^2) - x*y*x^2
        expect = PartiallyVerified
        """,
        {"g(s)": "1 + s", "f(s)": "s"},
        displays_F=False,
    ),
    CatalogEntry(
        "ex3_7", "Lotka-Volterra subcase", "subcase of the classical Lotka--Volterra systems",
        """
        name = ex3_7
        vars = x, y
        params = a = 1, b = -2, c = 1, B = 1
        phi = x*y, y - a*x/B
        G = (b + B)*u, B*v - c
        R = 1
        integrals = I: u*(B*v - c)^(-(b + B)/B)
        expected_F = x*(a*x + b*y + c), y*(a*b*x/B + B*y - c)
        expected_H = x*y*(B*y - a*x - c)^(-(b + B)/B)
        expect = CompletelyIntegrableVerified
        x0 = -3/10, 3/10
        """,
        {"a": "1", "b": "-2", "c": "1", "B": "1", "p": "1", "q": "1"},
    ),
    CatalogEntry(
        "ex3_8", "Lotka-Volterra second family", "The planar Lotka--Volterra system",
        """
        name = ex3_8
        vars = x, y
        params = a = 1, b = -1, c = 1, B = 1
        phi = x, c*y + a*x*y + b*y^2/2
        G = u, B*v/b
        R = 1
        integrals = I: u*v^(-b/B)
        expected_F = x*(a*x + b*y + c), y*(a*(B - b)*x/b + B*y/2 + B*c/b)
        expected_H = x*(c*y + a*x*y + b*y^2/2)^(-b/B)
        expect = CompletelyIntegrableVerified
        x0 = -3/10, 3/5
        """,
        {"a": "1", "b": "-1", "c": "1", "B": "1"},
    ),
    CatalogEntry(
        "ex3_9", "planar example with degenerate Phi", "x^2+s(x)$ is not constant",
        """
        name = ex3_9
        vars = x, y
        phi = x, x^3
        G = 1, 2*u
        R = 1
        integrals = I: u^2 + v
        expected_F = 0, 2*x - 3*x^2
        expected_H = x^2 + x^3
        expect = CompletelyIntegrableVerified
        x0 = 1/2, 1/10
        """,
        {"s(x)": "x^3"},
    ),
    CatalogEntry(
        "ex4_1", "Kolmogorov system in the space", "A Kolmogorov system",
        """
        name = ex4_1
        vars = x, y, z
        phi = x*y*z, x + y + z, z
        G = 0, 0, 1
        R = 1
        integrals = I1: u, I2: v
        expected_F = x*(z - y), y*(x - z), z*(y - x)
        expected_H = x*y*z, x + y + z
        expect = CompletelyIntegrableVerified
        x0 = 1/5, 3/10, 2/5
        """,
        {"psi(x,y,z)": "x + y + z"},
        kolmogorov=True,
    ),
    CatalogEntry(
        "ex4_2", "second Kolmogorov system", "functionally independent polynomial first integrals",
        """
        name = ex4_2
        vars = x, y, z
        phi = y*z, x*z + x^2, x*z - y
        G = u, -v, -w
        R = 1
        integrals = I1: u*v, I2: u*w
        expected_F = x*(x*y + 3*y*z + x^2*z), y*(2*x*y + y*z - 3*x^2*z), z*(-4*x*y - 2*y*z + x^2*z)
        expected_H = y*z*(x*z + x^2), y*z*(x*z - y)
        expect = CompletelyIntegrableVerified
        x0 = 1/5, -3/10, 1/5
        """,
        kolmogorov=True,
    ),
    CatalogEntry(
        "ex4_3", "Rossler system", "constructed by R\\\"ossler",
        """
        name = ex4_3
        vars = x, y, z
        phi = (x^2 + y^2)/2 + z, y, z
        G = 0, 1, w
        R = 1
        integrals = I1: u, I2: w*exp(-v)
        expected_F = -y - z, x, x*z
        expected_H = (x^2 + y^2)/2 + z, z*exp(-y)
        expect = CompletelyIntegrableVerified
        x0 = 3/10, 1/5, 1/10
        """,
    ),
    CatalogEntry(
        "ex4_4", "Rikitake system", "a particular case of the Rikitake system",
        """
        name = ex4_4
        vars = x, y, z
        base = 1, 1, 0
        phi = (x + y)/2, y - x, x^2 + z^2
        G = u/2, -v/2, 1
        R = 1
        integrals = I1: u*v, I2: v^2*exp(w)
        expected_F = y*z, x*z, 1 - x*y
        expected_H = (y^2 - x^2)/2, (y - x)^2*exp(x^2 + z^2)
        expect = CompletelyIntegrableVerified
        x0 = 3/10, 1/2, 1/5
        """,
        {"p": "(1, 1, 0)"},
    ),
    CatalogEntry(
        "ex4_5", "(a,b,c) Lotka-Volterra system", "(a,b,c)$  Lotka--Volterra systems",
        """
        name = ex4_5
        vars = x, y, z
        params = a = 1, c = 2
        phi = a*c*z + c*y + x, y, x*z^c
        G = 0, v, -w/a
        R = (1/c)*z^(1 - c)
        integrals = I1: u, I2: v*w^a
        expected_F = x*(z - c*y), y*(x - a*z), z*(y - x/(a*c))
        expected_H = x + c*y + a*c*z, x*y*z^2
        expect = CompletelyIntegrableVerified
        x0 = 1/2, 2/5, 3/10
        """,
        {"a": "1", "c": "2 (branch c >= 1)", "c < 1 branch": "not encoded"},
    ),
    CatalogEntry(
        "ex4_6", "3D example with degenerate Phi", "its components satisfy $\\varphi-\\psi-\\eta=0.$",
        """
        name = ex4_6
        vars = x, y, z
        phi = x*z - y^2, y*z - y^2, x*z - y*z
        G = 0, 0, 1
        R = 1
        integrals = I1: u, I2: v
        expected_F = 2*x*y - x*z - 2*y^2, -y*z, -2*y*z + z^2
        expected_H = x*z - y^2, y*z - y^2
        expect = CompletelyIntegrableVerified
        x0 = 1/5, 3/10, -1/5
        """,
    ),
    CatalogEntry(
        "ex5_1", "4D Kolmogorov system, l = 1", "Some 4D complete integrable",
        """
        name = ex5_1
        vars = x1, x2, x3, x4
        params = l = 1
        phi = x1, x1*x3, x2*x4, x1^l + x2^l + x3^l + x4^l
        G = 1/l, 0, 0, 0
        R = 1
        integrals = I1: u2, I2: u3, I3: u4
        expected_F = x1*(x2^l - x4^l), x2*(x3^l - x1^l), x3*(x4^l - x2^l), x4*(x1^l - x3^l)
        expected_H = x1*x3, x2*x4, x1^l + x2^l + x3^l + x4^l
        expect = CompletelyIntegrableVerified
        x0 = 1/5, 3/10, 2/5, 1/2
        """,
        {"l": "1"},
        kolmogorov=True,
    ),
    CatalogEntry(
        "ex5_1_l2", "4D Kolmogorov system, l = 2", "Some 4D complete integrable",
        """
        name = ex5_1_l2
        vars = x1, x2, x3, x4
        params = l = 2
        phi = x1, x1*x3, x2*x4, x1^l + x2^l + x3^l + x4^l
        G = 1/l, 0, 0, 0
        R = 1
        integrals = I1: u2, I2: u3, I3: u4
        expected_F = x1*(x2^l - x4^l), x2*(x3^l - x1^l), x3*(x4^l - x2^l), x4*(x1^l - x3^l)
        expected_H = x1*x3, x2*x4, x1^l + x2^l + x3^l + x4^l
        expect = CompletelyIntegrableVerified
        x0 = 1/5, 3/10, 2/5, 1/2
        """,
        {"l": "2"},
        kolmogorov=True,
    ),
    CatalogEntry(
        "ex5_2", "4D nilpotent system", "nilpotent differential system",
        """
        name = ex5_2
        vars = x1, x2, x3, x4
        params = d2 = 1, d3 = 1
        phi = x1, x2 + x1, x3 + x1/d2, x4 + x1/d3
        G = u2 + 1, u3 + 1, u4, 0
        R = 1
        integrals = I: u4
        expected_F = (x2 + x1) + 1, ((x3 + x1/d2) + 1) - ((x2 + x1) + 1), (x4 + x1/d3) - ((x2 + x1) + 1)/d2, -((x2 + x1) + 1)/d3
        expected_H = x4 + x1
        expect = PartiallyVerified
        x0 = 1/10, 1/5, 3/10, 2/5
        """,
        {"P1(s)": "s + 1", "P2(s)": "s + 1", "P3(s)": "s", "A_i(x1)": "x1", "d2": "1", "d3": "1"},
        displays_F=False,
    ),
    CatalogEntry(
        "ex5_3", "n-dimensional Kolmogorov family, n = 5", "dimensional  family of Kolmogorov",
        """
        name = ex5_3
        vars = x1, x2, x3, x4, x5
        phi = x1, x1*x2, x2*x3, x3*x4, x4*x5
        G = 0, 1, 1, 1, 0
        R = 1
        integrals = I1: u1, I2: u5, I3: u2 - u3, I4: u3 - u4
        expected_H = x1, x4*x5, x1*x2 - x2*x3, x2*x3 - x3*x4
        expect = CompletelyIntegrableVerified
        x0 = 3/10, -1/5, 1/10, 1/5, 3/10
        """,
        {"n": "5", "G_i": "0 for all i"},
        displays_F=False,
        kolmogorov=True,
    ),
    CatalogEntry(
        "rem1_2i", "counterexample: constant pullback", "it is not a first integral",
        """
        name = rem1_2i
        vars = x, y
        params = k = 1
        phi = x, -x^2 + k
        G = 1, 2*u
        R = 1
        integrals = I: u^2 + v
        expect = Degenerate
        """,
        {"k": "1"},
        displays_F=False,
    ),
    CatalogEntry(
        "rem1_2ii", "counterexample: coinciding pullbacks", "they are not functionally independent",
        """
        name = rem1_2ii
        vars = x, y, z
        phi = y*z, y, z
        G = 0, v, -w
        R = 1
        integrals = I1: u, I2: v*w
        expected_H = y*z, y*z
        expect = Degenerate
        """,
        {"I2": "v*w (the printed u*v is not an integral of the reduced system)"},
        displays_F=False,
    ),
]

ENTRIES: dict[str, CatalogEntry] = {e.id: e for e in sorted(_ENTRIES, key=lambda e: e.id)}


def _dedent(entry: CatalogEntry) -> CatalogEntry:
    text = "\n".join(line.strip() for line in entry.system.strip().splitlines())
    object.__setattr__(entry, "system", text + "\n")
    return entry


for _e in ENTRIES.values():
    _dedent(_e)


def entries() -> list[CatalogEntry]:
    return list(ENTRIES.values())


def list_entries() -> list[dict]:
    return [e.summary() for e in ENTRIES.values()]


def get(entry_id: str) -> CatalogEntry:
    try:
        return ENTRIES[entry_id]
    except KeyError:
        raise KeyError(f"unknown catalog entry {entry_id!r}") from None


@dataclass
class CatalogResult:
    entry: CatalogEntry
    report: VerificationReport
    drift: DriftRecord | None

    @property
    def passed(self) -> bool:
        spec = self.report.spec
        ok = not self.report.mismatches and self.report.classification.value == spec.expect
        return ok

    def to_dict(self) -> dict:
        out = {"id": self.entry.id, "locus": self.entry.locus, "anchor": self.entry.anchor,
               "bindings": dict(self.entry.bindings)}
        out.update(self.report.to_dict())
        out["drift"] = self.drift.to_dict() if self.drift else None
        out["passed"] = self.passed
        return out


DRIFT_T = 10.0
DRIFT_RTOL = 1e-10
DRIFT_ATOL = 1e-12


def drift_for(spec: SystemSpec, report: VerificationReport, rtol: float = DRIFT_RTOL,
              atol: float = DRIFT_ATOL, t_end: float | None = None) -> DriftRecord | None:
    if spec.x0 is None:
        return None
    from .construct import FirstIntegral

    verified = [FirstIntegral(r.label, r.H, r.provenance) for r in report.integrals if r.verdict.verified]
    if not verified:
        return None
    req = TrajectoryRequest(report.field, tuple(float(c) for c in spec.x0),
                            t_end or spec.t_end or DRIFT_T, rtol, atol)
    return conservation_drift(integrate(req), verified, spec.state_vars)


def run(entry_id: str, plan: SamplePlan | None = None, drift: bool = True) -> CatalogResult:
    entry = get(entry_id)
    plan = plan or SamplePlan()
    report = verify_spec(entry.spec, plan)
    return CatalogResult(entry, report, drift_for(entry.spec, report) if drift else None)


def run_all(plan: SamplePlan | None = None, drift: bool = True) -> list[CatalogResult]:
    return [run(e, plan, drift) for e in ENTRIES]
