"""Observed convergence order of the Dormand-Prince stepper.

Fixed-step runs on the sl2 system with b(t) = (cos t, 0, 0), whose exact
solution from (1, 0, 0) is (1, sin t, sin^2 t).
"""
import argparse
import math

from liehamilton.verify import order_ratios


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h0", type=float, default=0.4)
    ap.add_argument("--levels", type=int, default=5)
    args = ap.parse_args(argv)
    steps = [args.h0 / 2 ** i for i in range(args.levels)]
    ratios = order_ratios(tuple(steps))
    print("h_coarse        ratio    order")
    for h, q in zip(steps, ratios):
        print(f"{h:<14.6g} {q:8.2f} {math.log2(q):8.3f}")


if __name__ == "__main__":
    main()
