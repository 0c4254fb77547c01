"""Do wide-stencil solves inherit one-dimensional structure from the data?

Solves the degenerate Dirichlet problem on a square with boundary data
that depends on y alone, then measures two things per resolution:

  * sup distance between the solved field and the 1D profile extended
    constantly in x, and
  * variation along x on every horizontal line (flatness), which would
    vanish identically for an exactly one-dimensional field.

Exploratory: flatness far below the profile error suggests the discrete
solutions pick the flat extension rather than some genuinely 2D state.
"""

import argparse
import time

import numpy as np

from trunclap import catalog, fdlab


def profile_error(result, boundary_name):
    g = catalog.make_boundary(boundary_name)
    field = result.field
    ref = np.array([[g(x, y) for y in field.ys()] for x in field.xs()])
    return float(np.max(np.abs(field.values - ref)))


def run_case(boundary_name, h, radius, reaction):
    cfg = fdlab.SolveConfig(box=(-2.0, 2.0, -2.0, 2.0), h=h, radius=radius)
    t0 = time.perf_counter()
    result = fdlab.solve_dirichlet(reaction, catalog.make_boundary(boundary_name), cfg)
    elapsed = time.perf_counter() - t0
    flat = fdlab.flatness_probe(result.field, axis="x")
    err = profile_error(result, boundary_name)
    print(f"{boundary_name:22s} h={h:<6g} R={radius} "
          f"iters={result.iterations:<6d} profile err={err:9.2e} "
          f"flatness={flat.sup:9.2e} [{elapsed:5.1f}s]")
    return err, flat.sup


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, nargs="+", default=[0.1, 0.05])
    ap.add_argument("--radius", type=int, default=2)
    ap.add_argument("--boundaries", nargs="+",
                    default=["halfline-tanh-y", "tanh-shifted-y:1"])
    args = ap.parse_args()

    reaction = catalog.make_nonlinearity("allen-cahn")
    for name in args.boundaries:
        errs = [run_case(name, h, args.radius, reaction) for h in args.h]
        if len(errs) > 1 and errs[-1][0] >= errs[0][0]:
            print(f"  note: profile error did not drop when h went "
                  f"{args.h[0]} -> {args.h[-1]}")


if __name__ == "__main__":
    main()
