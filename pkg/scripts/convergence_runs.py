#!/usr/bin/env python
"""Finite-N convergence runs for the four scaling regimes, written as CSV.

    python scripts/convergence_runs.py --out results/convergence
"""

import argparse
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from circjack import __version__
from circjack.ensemble import EnsembleParams
from circjack.limits import LimitQuery, bulk_edge_check, limit_measure, singularity_limit_check, transition_check


@dataclass
class RunPlan:
    singularity: list = field(default_factory=lambda: [
        (2.0, 0.0, 1, 1, (0.5, -0.5)),
        (2.0, 1.0, 1, 0, (0.0,)),
        (2.0, 1.0, 1, 0, (0.7,)),
        (4.0, 0.5, 1, 1, (1.3, 0.4)),
    ])
    singularity_N: tuple = (8, 16, 32, 64)
    bulk: list = field(default_factory=lambda: [((0.0, 0.0), math.pi), ((0.2, -0.1), math.pi), ((0.3, 0.1), 2.0)])
    bulk_N: tuple = (8, 16, 24, 32)
    edge_x: tuple = (-0.5, 0.0, 0.5)
    edge_N: tuple = (10, 20, 40, 80)
    transition_eta: tuple = (-1.0, 0.0, 1.0)
    transition_b: tuple = (20.0, 40.0, 80.0, 160.0)


def write(report, path, **meta):
    header = {"version": __version__, **{k: json.dumps(v) for k, v in meta.items()}}
    text = report.to_csv(header)
    path.write_text(text)
    errs = ", ".join(f"{e:.4g}" for e in report.errors)
    print(f"{path.name:40s} decreasing={report.strictly_decreasing()!s:5s} [{errs}]")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/convergence")
    ap.add_argument("--only", choices=("singularity", "bulk", "edge", "transition"), default=None)
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    plan = RunPlan()
    todo = [args.only] if args.only else ["singularity", "bulk", "edge", "transition"]

    if "singularity" in todo:
        for beta, b, m, n, x in plan.singularity:
            rep = singularity_limit_check(EnsembleParams(beta, b, 1), m, n, list(x), N_list=plan.singularity_N)
            tag = f"singularity_beta{beta:g}_b{b:g}_m{m}n{n}_x{'_'.join(f'{v:g}' for v in x)}.csv"
            write(rep, out / tag, regime="singularity", beta=beta, b=b, m=m, n=n, x=list(x))

    if "bulk" in todo:
        for x, theta in plan.bulk:
            rep = bulk_edge_check(LimitQuery("bulk", x, 1, 1, d=1.0, theta=theta), 2.0, plan.bulk_N)
            phases = [r.phase_offset for r in rep.rows]
            tag = f"bulk_theta{theta:.3f}_x{'_'.join(f'{v:g}' for v in x)}.csv"
            write(rep, out / tag, regime="bulk", theta=theta, x=list(x), phase_offset=phases)

    if "edge" in todo:
        th = limit_measure(1.0).theta_d
        for x in plan.edge_x:
            rep = bulk_edge_check(LimitQuery("edge", (x,), 1, 0, d=1.0, theta=th), 2.0, plan.edge_N)
            write(rep, out / f"edge_x{x:g}.csv", regime="edge", theta=th, x=[x])
            # error against N^{-1/3}: a straight line in log-log means the slow rate
            e = np.array(rep.errors)
            slope = np.polyfit(np.log(plan.edge_N), np.log(e), 1)[0]
            print(f"{'':40s} fitted rate N^{slope:.3f}")

    if "transition" in todo:
        for eta in plan.transition_eta:
            rep = transition_check(list(plan.transition_b), 1.0, 1, 0, [eta])
            write(rep, out / f"transition_eta{eta:g}.csv", regime="transition", alpha=1.0, eta=[eta])

    (out / "plan.json").write_text(json.dumps(asdict(plan), indent=1))


if __name__ == "__main__":
    main()
