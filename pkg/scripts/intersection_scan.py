"""Where do gamma_2 and gamma_3 of a 6x6 reciprocal matrix cross?

Scans a grid of (A1, A2) and reports the crossing count together with the
minimum distance between the two sampled curves.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from kippenhahn.geometry import polyline_distance, to_xy
from kippenhahn.numerical_range import curve_intersections, kippenhahn_components
from kippenhahn.reciprocal import ReciprocalSpec, build
from kippenhahn.tridiagonal import to_dense


@dataclass
class Config:
    n: int = 6
    values: tuple = (1.001, 1.01, 1.05, 1.25, 1.62, 2.0)
    samples: int = 1024


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--samples", type=int, default=Config.samples)
    args = ap.parse_args()
    cfg = Config(args.n, Config.values, args.samples)

    print(f"n={cfg.n}: rows A1, columns A2; entries 'crossings/min distance'")
    print("A1\\A2 " + "".join(f"{a:>14g}" for a in cfg.values))
    for A1 in cfg.values:
        cells = []
        for A2 in cfg.values:
            M = to_dense(build(ReciprocalSpec.from_A(cfg.n, A1, A2)))
            c2, c3 = kippenhahn_components(M, [2, 3], cfg.samples)
            hits = curve_intersections(c2, c3)
            d = float(np.min(polyline_distance(to_xy(c3.points), to_xy(c2.points))))
            cells.append(f"{len(hits):>4d}/{d:9.2e}")
        print(f"{A1:<6g}" + "".join(cells))


if __name__ == "__main__":
    main()
