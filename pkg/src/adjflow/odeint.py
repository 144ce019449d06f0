"""Adaptive Dormand-Prince 5(4) integration and conservation drift along orbits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction as Fr
from typing import Sequence

import numpy as np

from .construct import FirstIntegral, VectorField
from .expr import nodes as N
from .expr.nodes import DomainError

# Dormand & Prince (1980), RK5(4)7M.  Stage nodes, coupling rows, the
# 5th-order propagating weights and the embedded 4th-order weights.
C = [Fr(0), Fr(1, 5), Fr(3, 10), Fr(4, 5), Fr(8, 9), Fr(1), Fr(1)]
A = [
    [],
    [Fr(1, 5)],
    [Fr(3, 40), Fr(9, 40)],
    [Fr(44, 45), Fr(-56, 15), Fr(32, 9)],
    [Fr(19372, 6561), Fr(-25360, 2187), Fr(64448, 6561), Fr(-212, 729)],
    [Fr(9017, 3168), Fr(-355, 33), Fr(46732, 5247), Fr(49, 176), Fr(-5103, 18656)],
    [Fr(35, 384), Fr(0), Fr(500, 1113), Fr(125, 192), Fr(-2187, 6784), Fr(11, 84)],
]
B5 = [Fr(35, 384), Fr(0), Fr(500, 1113), Fr(125, 192), Fr(-2187, 6784), Fr(11, 84), Fr(0)]
B4 = [Fr(5179, 57600), Fr(0), Fr(7571, 16695), Fr(393, 640), Fr(-92097, 339200), Fr(187, 2100), Fr(1, 40)]

_C = np.array([float(c) for c in C])
_A = [np.array([float(a) for a in row]) for row in A]
_B5 = np.array([float(b) for b in B5])
_E = np.array([float(b5 - b4) for b5, b4 in zip(B5, B4)])

SAFETY, MIN_FACTOR, MAX_FACTOR = 0.9, 0.2, 5.0
MIN_STEP = 1e-14


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrajectoryRequest:
    field: VectorField
    x0: tuple[float, ...]
    t_end: float = 10.0
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 200_000
    bound: float = 1e6

    def __post_init__(self):
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if len(self.x0) != self.field.n:
            raise ValueError(f"x0 has {len(self.x0)} coordinates, field has dimension {self.field.n}")


@dataclass
class Trajectory:
    ts: list[float]
    xs: list[np.ndarray]
    reason: str
    rejected: int = 0

    @property
    def steps(self) -> int:
        return len(self.ts) - 1

    @property
    def final(self) -> np.ndarray:
        return self.xs[-1]


def _rhs(field: VectorField):
    f = N.lambdify(field.components, field.state_vars)

    def rhs(x: np.ndarray) -> np.ndarray:
        return np.array(f(*x.tolist()), dtype=float)

    return rhs


def _initial_step(rhs, x0, f0, rtol, atol) -> float:
    # Hairer, Norsett & Wanner, Solving ODEs I, II.4
    scale = atol + rtol * np.abs(x0)
    d0 = np.sqrt(np.mean((x0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = rhs(x0 + h0 * f0)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def integrate(req: TrajectoryRequest) -> Trajectory:
    """Integrate to ``t_end``, stopping early at ``max_steps`` or when |x_i| > bound."""
    rhs = _rhs(req.field)
    x = np.array(req.x0, dtype=float)
    try:
        fx = rhs(x)
    except DomainError as err:
        raise IntegrationError(f"field not evaluable at x0: {err}") from err
    if not np.all(np.isfinite(fx)):
        raise IntegrationError("non-finite derivative at the initial state")
    t, T = 0.0, req.t_end
    ts, xs = [t], [x.copy()]
    h = min(_initial_step(rhs, x, fx, req.rtol, req.atol), T)
    rejected = 0
    k = np.empty((7, x.size))
    while True:
        if t >= T:
            return Trajectory(ts, xs, "t_end", rejected)
        if len(ts) > req.max_steps:
            return Trajectory(ts, xs, "max_steps", rejected)
        if h < MIN_STEP:
            raise IntegrationError(f"step size underflow at t={t}")
        h = min(h, T - t)
        k[0] = fx
        try:
            for s in range(1, 7):
                k[s] = rhs(x + h * (_A[s] @ k[:s]))
            ok = np.all(np.isfinite(k))
        except DomainError:
            ok = False
        if not ok:
            h *= 0.5
            rejected += 1
            continue
        x_new = x + h * (_B5 @ k)
        err_vec = h * (_E @ k)
        scale = req.atol + req.rtol * np.maximum(np.abs(x), np.abs(x_new))
        err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
        if err <= 1.0:
            t = T if T - (t + h) < 1e-15 * max(1.0, T) else t + h
            x = x_new
            fx = k[6]  # first-same-as-last
            ts.append(t)
            xs.append(x.copy())
            if np.any(np.abs(x) > req.bound):
                return Trajectory(ts, xs, "left_box", rejected)
            factor = MAX_FACTOR if err == 0 else min(MAX_FACTOR, SAFETY * err ** -0.2)
        else:
            rejected += 1
            factor = max(MIN_FACTOR, SAFETY * err ** -0.2)
        h *= factor


@dataclass
class DriftRecord:
    labels: list[str]
    drift: list[float | None]
    errors: list[str | None]
    steps: int
    reason: str
    final_state: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "integrals": [
                {"label": lab, "drift": d, "error": e}
                for lab, d, e in zip(self.labels, self.drift, self.errors)
            ],
            "steps": self.steps,
            "reason": self.reason,
            "final_state": self.final_state,
        }

    @property
    def max_drift(self) -> float:
        vals = [d for d in self.drift if d is not None]
        return max(vals, default=0.0)


def conservation_drift(traj: Trajectory, Hs: Sequence[FirstIntegral], vars: Sequence[str]) -> DriftRecord:
    """max_t |H(x(t)) - H(x0)| / max(1, |H(x0)|) for each integral."""
    if not traj.xs:
        raise ValueError("empty trajectory")
    drifts: list[float | None] = []
    errors: list[str | None] = []
    for H in Hs:
        f = N.lambdify([H.H], vars)
        try:
            vals = np.array([f(*x.tolist())[0] for x in traj.xs])
        except DomainError as err:
            drifts.append(None)
            errors.append(f"non-finite H along trajectory: {err}")
            continue
        if not np.all(np.isfinite(vals)):
            drifts.append(None)
            errors.append("non-finite H along trajectory")
            continue
        h0 = vals[0]
        drifts.append(float(np.max(np.abs(vals - h0)) / max(1.0, abs(h0))))
        errors.append(None)
    return DriftRecord([H.label for H in Hs], drifts, errors, traj.steps, traj.reason,
                       [float(v) for v in traj.final])
