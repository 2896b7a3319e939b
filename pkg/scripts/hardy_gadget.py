"""Run the synthesized Hardy protocol over a grid of inputs and compare
honest and random runs with the exact value."""

import argparse
import itertools

from wsts.hardness import SUCC, encode_input, honest_run, synthesize_hardy_protocol, weak_run_check
from wsts.ordinal import Ordinal, hardy_eval


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-coef", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    p, e = synthesize_hardy_protocol(2)
    print("alpha         n  H      honest  random runs")
    for a, b in itertools.product(range(args.max_coef + 1), repeat=2):
        alpha = Ordinal(tuple(s for s in ((Ordinal.finite(1), a), (Ordinal.finite(0), b)) if s[1]))
        for n in range(args.max_n + 1):
            s = encode_input(e, alpha, n)
            honest = e.value(honest_run(p, e, s))
            rep = weak_run_check(p, e, s, args.samples, args.seed)
            print(f"{str(alpha):<13} {n}  {hardy_eval(SUCC, alpha, n):<6} {honest:<7} "
                  f"max {max(rep.results)}, attained {rep.max_attained}, "
                  f"{'ok' if rep.all_within else 'EXCEEDED'}")


if __name__ == "__main__":
    main()
