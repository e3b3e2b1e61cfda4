"""Projectability residual of every left-invariant bivector X_i^L ^ X_j^L
and every mixed wedge X_i^L ^ X_j^R on a group, onto its default quotient."""
import argparse

import numpy as np

from liehamilton import group as grp


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("group", choices=grp.GROUP_NAMES)
    ap.add_argument("--r", type=int, default=None)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args(argv)
    m = grp.group_model(args.group, r=args.r)
    q = grp.quotient(m)
    pts = m.sample(np.random.default_rng(args.seed), args.points)
    print(f"{m.name} -> {q.name}")
    for kind, build in (("L^L", grp.left_wedge), ("L^R", grp.right_wedge_left)):
        for i in range(1, m.dim + 1):
            for j in range(i + 1, m.dim + 1):
                res = grp.projectability_residual(m, build(m, i, j), q, pts)
                print(f"  {kind} X{i}^X{j}: {res:.3e}  {'projectable' if res < 1e-10 else ''}")


if __name__ == "__main__":
    main()
