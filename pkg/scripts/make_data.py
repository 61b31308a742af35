"""Write the sample expression files under data/."""

from __future__ import annotations

import argparse
import json
from fractions import Fraction
from pathlib import Path

from padic_kernel.distribution import Distribution
from padic_kernel.geometry import Polydisc
from padic_kernel.io import GridSpec, emit
from padic_kernel.kernel import Kernel
from padic_kernel.padic import LambdaGroup, PAdicPoint
from padic_kernel.schwartz import indicator
from padic_kernel.wavefront import MicrolocalQuery


def pt(p, *coords):
    return PAdicPoint(p, tuple(Fraction(c) for c in coords))


def samples() -> dict[str, object]:
    p = 3
    out: dict[str, object] = {}
    out["zp_p3.json"] = indicator(Polydisc.of(p, 0, 0))
    out["delta0_p3.json"] = Distribution.dirac(pt(p, 0))
    out["psi_p3.json"] = indicator(Polydisc.of(p, 1, 1)) + indicator(Polydisc.of(p, 0, Fraction(1, 3)), Fraction(-1, 2))
    out["phi2_p3.json"] = indicator(Polydisc.of(p, 0, 0, 0)) + indicator(Polydisc.of(p, 1, 1, 2), 2)
    out["density2_p3.json"] = Distribution.density(indicator(Polydisc.of(p, 0, 0, 0)) - indicator(Polydisc.of(p, 1, 0, 0)))
    out["diagonal_kernel_p3.json"] = Kernel(Distribution.diagonal(p, 1), (1, 1))
    out["delta_kernel_p3.json"] = Kernel(Distribution.dirac(pt(p, 1, 1)), (1, 1))
    out["query_delta_p3.json"] = MicrolocalQuery(Distribution.dirac(pt(p, 0)), pt(p, 0), pt(p, 1), LambdaGroup.full(p))
    out["query_diag_p3.json"] = MicrolocalQuery(
        Distribution.diagonal(p, 1), pt(p, 1, 1), pt(p, 1, -1), LambdaGroup.power_class(p, 2)
    )
    out["grid1_p3.json"] = GridSpec(
        tuple((pt(p, x), pt(p, xi)) for x in range(9) for xi in (1, Fraction(1, 3), 3, Fraction(2, 9), 2, Fraction(1, 9))),
        LambdaGroup.full(p),
    )
    out["grid2_p3.json"] = GridSpec(
        tuple((pt(p, x, y), pt(p, a, b)) for x in range(3) for y in range(3) for a in range(3) for b in range(3) if a or b),
        LambdaGroup.full(p),
    )
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = parser.parse_args()
    target = Path(args.out)
    target.mkdir(parents=True, exist_ok=True)
    for name, obj in samples().items():
        (target / name).write_text(emit(obj))
    # a raw decomposition whose coarsest form is 1_{Z_2}
    redundant = {
        "format_version": 1,
        "p": 2,
        "payload": {
            "kind": "sb",
            "dim": 1,
            "terms": [
                {"coef": "1", "ball": {"alpha": 1, "center": ["0"]}},
                {"coef": "1", "ball": {"alpha": 2, "center": ["1"]}},
                {"coef": "1", "ball": {"alpha": 2, "center": ["3"]}},
            ],
        },
    }
    (target / "redundant_p2.json").write_text(json.dumps(redundant, indent=2) + "\n")
    print(f"wrote {len(list(target.glob('*.json')))} files to {target}")


if __name__ == "__main__":
    main()
