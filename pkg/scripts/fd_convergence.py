#!/usr/bin/env python3
"""Step-size sweep for the finite-difference identity residuals.

Prints how the residuals of the curvature/nabla-J pairing identity and the
curvature-vs-model deviation behave as the step h is halved, with and without
Richardson extrapolation.  The table shows the second-order convergence of the
plain scheme and the truncation/rounding crossover that motivates the default
h = 1e-3.

    python scripts/fd_convergence.py [--chart S6(1)] [--seed 7]
"""

import argparse

from bochnerkit.charts import FDConfig, curvature_at, make_chart, nk_identity_suite
from bochnerkit.curvature import space_form_tensor
from bochnerkit.multilinear import invariant_norm


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--chart", default="S6(1)")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--steps", type=float, nargs="+",
                        default=[8e-3, 4e-3, 2e-3, 1e-3, 5e-4])
    args = parser.parse_args()

    chart = make_chart(args.chart)
    x = chart.sample_points(args.seed, 1)[0]
    print(f"chart {chart.label}, point radius {float((x @ x) ** 0.5):.3f}")
    print(f"{'h':>10} {'richardson':>10} {'id_1_1':>12} {'curv rel':>12}")
    for richardson in (False, True):
        for h in args.steps:
            cfg = FDConfig(h=h, richardson=richardson)
            suite = nk_identity_suite(chart, x, cfg, seed=args.seed)
            point, R = curvature_at(chart, x, cfg)
            target = space_form_tensor(point, chart.scale)
            rel = invariant_norm(point, R - target) / invariant_norm(point, target)
            print(f"{h:>10.1e} {str(richardson):>10} {suite.id_1_1:>12.3e} {rel:>12.3e}")


if __name__ == "__main__":
    main()
