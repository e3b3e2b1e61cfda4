"""Pushforward residuals of the leaf-chart transitions onto the planar
normal forms, as a function of the sample radius."""
import argparse

import numpy as np

from liehamilton import leaf
from liehamilton.lie_algebra import catalog


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    for alg, k in (("sl2", 1.0), ("sl2", -1.0), ("sl2", 0.0), ("so3", 1.0), ("so3", 2.5)):
        t = leaf.canonical_transition(alg, k)
        spec = leaf.restrict(catalog(alg), t.chart)
        res = leaf.chart_equivalence_residual(spec, t.target, t.map, t.chart.sample(rng, args.points))
        print(f"{alg:4s} k={k:5.2f} {t.chart.name:>9s} -> {t.label:3s}  residual {res:.3e}")


if __name__ == "__main__":
    main()
