"""Length bounds for controlled bad sequences against exhaustive search."""

import argparse
import time

from wsts.budget import Budget, BudgetExceeded
from wsts.oracle import longest_controlled_bad
from wsts.ordinal import parse_control
from wsts.order import ControlSpec, length_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", default="succ")
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--search-limit", type=int, default=1,
                    help="largest n searched exhaustively in dimension 2")
    args = ap.parse_args()
    g = parse_control(args.g)
    print("dim  n  longest  bound")
    for dim in (1, 2):
        for n in range(args.max_n + 1):
            try:
                bound = length_bound(dim, g, n, Budget(max_magnitude=4096))
            except BudgetExceeded:
                bound = "(too large)"
            longest = "-"
            if dim == 1 or n <= args.search_limit:
                t = time.perf_counter()
                longest = longest_controlled_bad(dim, ControlSpec(g, n))
                longest = f"{longest} ({time.perf_counter() - t:.1f}s)"
            print(f"{dim}    {n}  {longest:<12} {bound}")


if __name__ == "__main__":
    main()
