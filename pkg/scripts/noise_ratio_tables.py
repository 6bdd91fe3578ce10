#!/usr/bin/env python3
"""Tabulate tomographic-vs-direct noise ratios for coherent states.

Writes the analytic sweep over all four observables as CSV (one row per
(observable, eta, nbar)); pass --empirical to run the Monte-Carlo version
instead. Plotting is left to external tools.
"""

import argparse

from tomonoise import ComplexAmplitude, Intensity, Phase, RealField, sweep, write_sweep_csv


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="noise_ratios.csv")
    p.add_argument("--eta-list", default="1.0", help="comma list of efficiencies")
    p.add_argument("--nbar-grid", default="0.5,1,2,4,8,16", help="comma list of nbar values")
    p.add_argument("--empirical", action="store_true", help="simulate instead of closed forms")
    p.add_argument("--n", type=int, default=10**6, help="samples per empirical point")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    etas = [float(v) for v in args.eta_list.split(",")]
    nbars = [float(v) for v in args.nbar_grid.split(",")]
    rows = sweep(
        [Intensity(), RealField(), ComplexAmplitude(), Phase()],
        nbars,
        etas,
        "empirical" if args.empirical else "analytic",
        n=args.n if args.empirical else None,
        seed=args.seed if args.empirical else None,
    )
    write_sweep_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
