"""Termination of fig1 from every start of bounded norm over {r, c, a, q},
with a per-start time limit; reports verdicts and reachable-state counts."""

import argparse
import itertools
import time

from wsts.budget import Limits, ResourceExceeded
from wsts.order import Configuration
from wsts.protocol import fig1
from wsts.verify import Terminates, check_termination


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-norm", type=int, default=2)
    ap.add_argument("--per-start", type=float, default=3.0, help="seconds")
    args = ap.parse_args()
    p = fig1()
    starts = [Configuration(dict(zip("rcaq", c)))
              for c in itertools.product(range(args.max_norm + 1), repeat=4)]
    starts.sort(key=lambda s: (s.size(), s.sort_key))
    for s in starts:
        t = time.perf_counter()
        try:
            v = check_termination(p, s, limits=Limits.within(args.per_start))
            verdict = (f"terminates, longest run {v.max_run_length}, {v.explored_states} states"
                       if isinstance(v, Terminates) else f"loops at {v.good_pair}")
        except ResourceExceeded as exc:
            verdict = f"undecided ({exc})"
        print(f"{str(s):<20} {verdict}  [{time.perf_counter() - t:.2f}s]")


if __name__ == "__main__":
    main()
