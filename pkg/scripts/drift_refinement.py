"""Conservation drift of the verified integrals as the integrator tolerance shrinks."""

from __future__ import annotations

import argparse

from adjflow import catalog
from adjflow.construct import FirstIntegral
from adjflow.odeint import TrajectoryRequest, conservation_drift, integrate


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("ids", nargs="*", default=["ex3_2", "ex4_3", "ex4_4", "ex4_5"])
    parser.add_argument("--t", type=float, default=10.0, help="final time")
    parser.add_argument("--rungs", type=int, default=12, help="number of halvings from rtol=1e-6")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    rtols = [1e-6 / 2**k for k in range(args.rungs)]
    print("rtol      " + " ".join(f"{eid:>10}" for eid in args.ids))
    cases = []
    for eid in args.ids:
        res = catalog.run(eid, drift=False)
        Hs = [FirstIntegral(r.label, r.H, r.provenance) for r in res.report.integrals if r.verdict.verified]
        cases.append((res.report.field, Hs, res.entry.spec))
    for rtol in rtols:
        cells = []
        for field, Hs, spec in cases:
            traj = integrate(TrajectoryRequest(field, tuple(float(c) for c in spec.x0), args.t, rtol, rtol / 100))
            cells.append(f"{conservation_drift(traj, Hs, spec.state_vars).max_drift:10.2e}")
        print(f"{rtol:8.2e}  " + " ".join(cells))


if __name__ == "__main__":
    main()
