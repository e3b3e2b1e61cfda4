"""Casimir drift against tolerance for every catalog system with a Casimir.

    python3 scripts/conservation_sweep.py --seeds 5 --out drift.csv
"""
import argparse
import csv
import sys

import numpy as np

from liehamilton.integrate import TDSystem, drift, integrate, random_trig
from liehamilton.kks import basis_fields, kks_bivector
from liehamilton.lie_algebra import all_entries


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--tols", type=float, nargs="+", default=[1e-6, 1e-8, 1e-10, 1e-12])
    ap.add_argument("--t-end", type=float, default=5.0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    rows = []
    for e in all_entries():
        if not e.casimirs:
            continue
        F = basis_fields(kks_bivector(e.sc))
        for seed in range(args.seeds):
            rng = np.random.default_rng(seed)
            coeffs = tuple(random_trig(rng) for _ in F)
            x0 = rng.uniform(-1, 1, e.sc.dim)
            for tol in args.tols:
                tr = integrate(TDSystem(e.sc.dim, tuple(F), coeffs), x0, (0, args.t_end), tol)
                d = max(drift(tr, C.numeric()) for C in e.casimirs)
                rows.append({"algebra": e.name, "seed": seed, "tol": tol, "steps": tr.stats["steps"],
                             "drift": d, "drift_over_tol": d / tol})
    w = csv.DictWriter(open(args.out, "w") if args.out else sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    worst = max(r["drift_over_tol"] for r in rows)
    print(f"# worst drift/tol = {worst:.3g}", file=sys.stderr)


if __name__ == "__main__":
    main()
