"""Tabulate wave front verdicts of a few built-in distributions on a small grid."""

from __future__ import annotations

import argparse
from fractions import Fraction

from padic_kernel.distribution import Distribution
from padic_kernel.geometry import Polydisc
from padic_kernel.padic import LambdaGroup, PAdicPoint
from padic_kernel.schwartz import indicator
from padic_kernel.wavefront import MicrolocalQuery, frequency_grid, is_smooth_at, point_grid

SYMBOL = {"smooth": ".", "not_smooth": "#", "inconclusive": "?"}


def table(u: Distribution, lam: LambdaGroup) -> str:
    p = u.p
    xs = point_grid(p, 1, 1)
    xis = frequency_grid(p, 1, -1, 1)
    head = "x \\ xi  " + " ".join(f"{str(xi.coords[0]):>4}" for xi in xis)
    rows = [head]
    for x in xs:
        cells = [SYMBOL[is_smooth_at(MicrolocalQuery(u, x, xi, lam, 1, 1)).kind] for xi in xis]
        rows.append(f"{str(x.coords[0]):>7} " + " ".join(f"{c:>4}" for c in cells))
    return "\n".join(rows)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, default=3)
    args = parser.parse_args()
    p = args.p
    lam = LambdaGroup.full(p)
    cases = {
        "delta at 1": Distribution.dirac(PAdicPoint.of(p, 1)),
        "density 1_{B(1/p, 0)}": Distribution.density(indicator(Polydisc.of(p, 0, Fraction(1, p)))),
        "delta at 0 plus density 1_{Z_p}": Distribution.dirac(PAdicPoint.of(p, 0))
        + Distribution.density(indicator(Polydisc.of(p, 0, 0))),
    }
    for name, u in cases.items():
        print(f"{name}   (# singular, . smooth)")
        print(table(u, lam))
        print()


if __name__ == "__main__":
    main()
