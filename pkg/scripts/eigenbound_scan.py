"""Grid certificates on the collapsing strip images, one per aspect index.

Runs the sign-and-residual scan plus the Monte Carlo area cross-check
for a range of aspect indices n and prints a summary line per domain.
The domains flatten as n grows while the certified eigenvalue bound
stays fixed at 1, so the interesting columns are the area (should decay
like 1/n) and the worst interior residual (should stay negative).
"""

import argparse

from trunclap import eigenbound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 5, 8, 13])
    ap.add_argument("--grid", type=int, default=200)
    ap.add_argument("--area-samples", type=int, default=200_000)
    args = ap.parse_args()

    print(f"{'n':>3} {'area (exact)':>13} {'area (MC)':>12} "
          f"{'max residual':>13} {'max w':>10} regions")
    for n in args.n:
        cert = eigenbound.eigenvalue_bound_certificate(
            n, resolution=args.grid, area_samples=args.area_samples)
        scan = cert["scan"]
        counts = scan["region_counts"]
        print(f"{n:3d} {cert['area']['change_of_variables']:13.6f} "
              f"{cert['area']['monte_carlo']:12.6f} "
              f"{scan['max_residual']:13.4e} {scan['max_interior_w']:10.2e} "
              f"A={counts['A']} B={counts['B']} C={counts['C']}")


if __name__ == "__main__":
    main()
