"""Run the acceptance criteria and print one line per criterion.

Exit status is 0 when every criterion passes within its time limit.
"""

from __future__ import annotations

import argparse
import sys

from padic_kernel import acceptance
from padic_kernel.sampling import default_seed


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=None, help="defaults to PDK_SEED or the built-in seed")
    parser.add_argument("--depth", type=int, default=0, help="extra depth for the round-trip checks")
    parser.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], default=None)
    args = parser.parse_args()
    seed = default_seed() if args.seed is None else args.seed
    print(f"seed: {seed}")
    results = []
    for number in args.only or [n for n, *_ in acceptance.CRITERIA]:
        res = acceptance.run_one(number, seed, args.depth)
        print(res.line(), flush=True)
        results.append(res)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
