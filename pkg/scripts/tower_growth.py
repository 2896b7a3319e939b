"""Greedy doubling runs of fig1 from {c, q, r^n}: prints run length and
final q count for each n."""

import argparse

from wsts.order import parse_config
from wsts.protocol import doubling_script, fig1, run_guided


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    args = ap.parse_args()
    print("n  steps  final")
    for n in range(1, args.max_n + 1):
        run = run_guided(fig1(), parse_config(f"c:1,q:1,r:{n}"), doubling_script(n))
        print(f"{n}  {len(run) - 1:>5}  {run[-1]}")


if __name__ == "__main__":
    main()
