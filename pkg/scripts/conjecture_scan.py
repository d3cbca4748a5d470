"""Scan even-n reciprocal matrices with A1 != A2 for elliptical components.

Prints the smallest ellipse-fit residual over all components per (n, A1, A2).
A value near round-off would be a counterexample to the non-ellipticity
conjecture for even n.
"""

import argparse
import itertools
from dataclasses import dataclass

import numpy as np

from kippenhahn.reciprocal import conjecture_probe


@dataclass
class Config:
    sizes: tuple = (4, 6, 8)
    values: tuple = (1.05, 1.25, 1.5, 2.0, 3.0)
    samples: int = 512


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(Config.sizes))
    args = ap.parse_args()
    cfg = Config(tuple(args.sizes), Config.values, args.samples)

    worst = np.inf
    for n in cfg.sizes:
        for A1, A2 in itertools.permutations(cfg.values, 2):
            res = dict(conjecture_probe(n, A1, A2, cfg.samples))
            k = min(res, key=res.get)
            worst = min(worst, res[k])
            print(f"n={n} A1={A1:<5g} A2={A2:<5g} min residual {res[k]:.2e} (k={k})")
    print(f"\nsmallest residual over the scan: {worst:.2e}")


if __name__ == "__main__":
    main()
