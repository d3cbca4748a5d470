"""Write the example figures as SVG and print a one-line summary per figure."""

import argparse
import time

import numpy as np

from kippenhahn.figures import catalogue, write_figures
from kippenhahn.numerical_range import ellipse_fit, kippenhahn_components


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--samples", type=int, default=1024)
    args = ap.parse_args()

    t0 = time.perf_counter()
    paths = write_figures(args.out, args.samples)
    print(f"wrote {len(paths)} figures to {args.out}/ in {time.perf_counter() - t0:.1f}s")
    for spec in catalogue():
        comps = kippenhahn_components(spec.matrix, None, args.samples)
        cells = []
        for c in comps:
            if c.spread() <= 1e-9 * max(1.0, float(np.abs(c.points).max())):
                cells.append(f"g{c.k}=point")
            else:
                cells.append(f"g{c.k} res={ellipse_fit(c.points).residual:.1e}")
        print(f"{spec.name:14s} " + "  ".join(cells))


if __name__ == "__main__":
    main()
