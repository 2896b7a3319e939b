"""Acceptance criteria 1-10.

Every criterion records one PASS/FAIL line; under pytest they are printed
in the terminal summary, and ``python3 tests/test_acceptance.py`` prints
them directly.  Tolerances and time limits are the stated ones.
"""

import itertools
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import naive  # noqa: E402
from wsts.budget import Budget, BudgetExceeded, Limits, ResourceExceeded  # noqa: E402
from wsts.hardness import (SUCC, encode_input, honest_run, synthesize_hardy_protocol,  # noqa: E402
                           weak_run_check)
from wsts.oracle import (Caps, bounded_reach, brute_min_ppre, longest_controlled_bad,  # noqa: E402
                         random_config, random_protocol)
from wsts.ordinal import OMEGA, ControlFn, Ordinal, cichon_eval, hardy_eval, parse_ordinal  # noqa: E402
from wsts.order import Configuration, ControlSpec, leq_config, length_bound, norm, parse_config  # noqa: E402
from wsts.protocol import doubling_script, fig1, post, run_guided, successors, validate  # noqa: E402
from wsts.verify import (Coverable, Terminates, check_certificate, check_termination,  # noqa: E402
                         cover, min_ppre, simulate_from_above)

RESULTS = {}
DOUBLE = ControlFn(2, 2)


def record(n, title, ok, detail, elapsed):
    line = f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail} ({elapsed:.2f} s)"
    RESULTS[n] = (ok, line)
    print(line)
    return ok


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start

    @property
    def now(self):
        return time.perf_counter() - self.start


def _poly(*coefs):
    """``w^k*c_k + ... + c_0`` from ``(c_k, ..., c_0)``."""
    k = len(coefs) - 1
    return Ordinal(tuple((Ordinal.finite(k - i), c) for i, c in enumerate(coefs) if c))


# 1 ------------------------------------------------------------------------------

def test_criterion_1_hardy_closed_forms():
    bad = []
    with Clock() as clk:
        w2 = parse_ordinal("w*2")
        w_sq = parse_ordinal("w^2")
        for x in range(11):
            if hardy_eval(SUCC, OMEGA, x) != 2 * x + 1:
                bad.append(("w", x))
            if hardy_eval(SUCC, w2, x) != 4 * x + 3:
                bad.append(("w*2", x))
        for x in range(7):
            if hardy_eval(SUCC, w_sq, x) != 2 ** (x + 1) * (x + 1) - 1:
                bad.append(("w^2", x))
    ok = not bad and clk.elapsed < 1.0
    assert record(1, "Hardy closed forms", ok, f"29 values, mismatches {bad}", clk.elapsed)


# 2 ------------------------------------------------------------------------------

def test_criterion_2_cichon_identities():
    budget = Budget(max_steps=200_000, max_magnitude=1 << 20)
    mismatches, exceeded, verified = [], [], 0
    with Clock() as clk:
        for h in (SUCC, DOUBLE):
            for x in range(51):
                for d in range(11):
                    if cichon_eval(h, Ordinal.finite(d), x) != d:
                        mismatches.append((str(h), d, x))
                if cichon_eval(h, OMEGA, x) != x + 1:
                    mismatches.append((str(h), "w", x))
        for h in (SUCC, DOUBLE):
            for coefs in itertools.product(range(3), repeat=3):
                alpha = _poly(*coefs)
                for x in range(7):
                    try:
                        k = cichon_eval(h, alpha, x, budget)
                        lhs = hardy_eval(h, alpha, x, budget)
                        rhs = h.iterate(x, k, budget)
                    except BudgetExceeded:
                        exceeded.append((str(h), str(alpha), x))
                        continue
                    verified += 1
                    if lhs != rhs:
                        mismatches.append((str(h), str(alpha), x))
    total = verified + len(exceeded)
    ok = not mismatches and not exceeded
    detail = (f"identities exact; relation verified on {verified}/{total} grid points, "
              f"{len(exceeded)} beyond budget (first: {exceeded[:2]}), mismatches {mismatches[:3]}")
    assert record(2, "Cichon identities", ok, detail, clk.elapsed)


# 3 ------------------------------------------------------------------------------

def test_criterion_3_length_bound_soundness():
    with Clock() as clk:
        rows = []
        for n in (0, 1):
            longest = longest_controlled_bad(2, ControlSpec(SUCC, n))
            bound = length_bound(2, SUCC, n)
            rows.append((n, longest, bound))
    ok = all(lo <= b for _, lo, b in rows) and rows[1][2] == 13 and clk.elapsed < 300
    detail = ", ".join(f"n={n}: longest {lo} <= bound {b}" for n, lo, b in rows)
    assert record(3, "length bound soundness", ok, detail, clk.elapsed)


# 4 ------------------------------------------------------------------------------

def test_criterion_4_fig1_coverability():
    p, s0, t = fig1(), parse_config("c:2,q:1,r:1"), parse_config("q:4")
    with Clock() as clk:
        v = cover(p, s0, t)
        ok = isinstance(v, Coverable)
        if ok:
            run = simulate_from_above(p, v.pseudorun, s0)
            check_certificate(p, v, s0, t)
            ok = run[0] == s0 and leq_config(t, run[-1])
    detail = f"{type(v).__name__}, forward replay ends at {run[-1]}" if ok else f"{v}"
    assert record(4, "fig1 coverability", ok and clk.elapsed < 10, detail, clk.elapsed)


# 5 ------------------------------------------------------------------------------

def test_criterion_5_fig1_termination():
    p = fig1()
    starts = [Configuration(dict(zip("rcaq", counts)))
              for counts in itertools.product(range(3), repeat=4)]
    starts.sort(key=lambda s: (s.size(), s.sort_key))
    verdicts = {}
    with Clock() as clk:
        for s in starts:
            remaining = 60.0 - clk.now
            if remaining <= 0:
                verdicts[s] = "undecided"
                continue
            try:
                v = check_termination(p, s, limits=Limits.within(min(3.0, remaining)))
                verdicts[s] = "terminates" if isinstance(v, Terminates) else "loops"
            except ResourceExceeded:
                verdicts[s] = "undecided"
    counts = {k: sum(1 for v in verdicts.values() if v == k)
              for k in ("terminates", "loops", "undecided")}
    undecided = [str(s) for s, v in verdicts.items() if v == "undecided"]
    ok = counts["terminates"] == len(starts) and clk.elapsed < 60
    detail = f"{counts} of {len(starts)} starts; undecided e.g. {undecided[:3]}"
    assert record(5, "fig1 termination", ok, detail, clk.elapsed)


# 6 ------------------------------------------------------------------------------

def test_criterion_6_tower_growth():
    ends = []
    with Clock() as clk:
        for n in (1, 2, 3):
            last = run_guided(fig1(), parse_config(f"c:1,q:1,r:{n}"), doubling_script(n))[-1]
            ends.append(last - {"bot": last["bot"]})
    want = [Configuration(c=1, q=naive.tower(n)) for n in (1, 2, 3)]
    ok = ends == want and clk.elapsed < 10
    detail = "q counts " + ", ".join(str(e["q"]) for e in ends)
    assert record(6, "tower growth", ok, detail, clk.elapsed)


# 7 ------------------------------------------------------------------------------

def test_criterion_7_min_ppre_differential():
    rng = random.Random(7)
    cases = [(fig1(), parse_config(t)) for t in ("q:4", "q:2", "c:2", "a:2,q:1", "{}")]
    for _ in range(30):
        p = random_protocol(rng, max_locations=4, max_messages=3)
        cases += [(p, random_config(rng, p.locations, max_norm=2)) for _ in range(2)]
    bad = []
    with Clock() as clk:
        for p, t in cases:
            if brute_min_ppre(p, t, Caps(norm_cap=norm(t) + 2)) != min_ppre(p, t):
                bad.append((p.name, str(t)))
    protos = len({p for p, _ in cases})
    ok = not bad
    detail = f"{len(cases)} targets over {protos} protocols, mismatches {bad[:3]}"
    assert record(7, "MinPPre differential", ok, detail, clk.elapsed)


# 8 ------------------------------------------------------------------------------

def test_criterion_8_backward_forward_agreement():
    rng = random.Random(8)
    agree = disagree = skipped = 0
    with Clock() as clk:
        while agree + disagree < 150:
            p = random_protocol(rng, max_locations=4, max_messages=3, spawn_weight=0.4)
            s0 = random_config(rng, p.locations)
            t = random_config(rng, p.locations)
            r = bounded_reach(p, s0, Caps(norm_cap=10, state_cap=50_000))
            if r.truncated:
                skipped += 1
                continue
            try:
                v = cover(p, s0, t, Limits(max_nodes=50_000))
                check_certificate(p, v, s0, t)
            except ResourceExceeded:
                disagree += 1
                continue
            if isinstance(v, Coverable) == r.covers(t):
                agree += 1
            else:
                disagree += 1
    ok = disagree == 0 and agree >= 100
    detail = f"{agree} agree, {disagree} disagree, {skipped} truncated oracle runs skipped"
    assert record(8, "backward/forward agreement", ok, detail, clk.elapsed)


# 9 ------------------------------------------------------------------------------

def monotonicity_suite(rng, protocols, instances=1000, max_norm=2):
    """Violations of: s -> s2 and s <= t imply t -> t2 with s2 <= t2."""
    checked, violations = 0, []
    while checked < instances:
        p = protocols(rng)
        s = random_config(rng, p.locations, max_norm)
        steps = post(p, s)
        if not steps:
            continue
        s2 = rng.choice(steps).result
        t = s + random_config(rng, p.locations, max_norm)
        checked += 1
        if not any(leq_config(s2, t2) for t2 in successors(p, t)):
            violations.append((p.name, str(s), str(s2), str(t)))
    return violations


def test_criterion_9_monotonicity():
    with Clock() as clk:
        violations = monotonicity_suite(random.Random(9), lambda r: random_protocol(r))
    ok = not violations
    assert record(9, "monotonicity", ok, f"1000 instances, {len(violations)} violations",
                  clk.elapsed)


# 10 -----------------------------------------------------------------------------

def test_criterion_10_hardness_gadget():
    p2, e2 = synthesize_hardy_protocol(2)
    p3, _ = synthesize_hardy_protocol(3)
    problems = []
    with Clock() as clk:
        for a, b in itertools.product(range(4), repeat=2):
            alpha = _poly(a, b)
            for n in range(4):
                s = encode_input(e2, alpha, n)
                expected = hardy_eval(SUCC, alpha, n)
                got = e2.value(honest_run(p2, e2, s))
                if got != expected:
                    problems.append(f"honest {alpha},{n}: {got} != {expected}")
                rep = weak_run_check(p2, e2, s, 200, seed=a * 16 + b * 4 + n)
                if not rep.all_within:
                    problems.append(f"random run above bound at {alpha},{n}: {rep}")
        for p in (p2, p3):
            if validate(p):
                problems.append(f"{p.name}: {validate(p)}")
        violations = monotonicity_suite(random.Random(10), lambda r: r.choice([p2, p3]),
                                        max_norm=1)
        problems += [f"monotonicity {v}" for v in violations]
        small = [_poly(0, b) for b in range(4)] + [_poly(1, b) for b in range(4)] + [_poly(2, 0)]
        for alpha in small:
            for n in range(3):
                v = check_termination(p2, encode_input(e2, alpha, n))
                if not isinstance(v, Terminates):
                    problems.append(f"termination {alpha},{n}: {v}")
    ok = not problems
    detail = ("64 honest runs exact, 12800 random runs within bound, validate clean, "
              "1000 monotonicity instances, 27 termination checks" if ok else problems[:3])
    assert record(10, "hardness gadget", ok, detail, clk.elapsed)


if __name__ == "__main__":
    failed = 0
    tests = [(int(name.split("_")[2]), fn) for name, fn in globals().items()
             if name.startswith("test_criterion_")]
    for _, fn in sorted(tests):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
