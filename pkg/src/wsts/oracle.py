"""Brute-force reference implementations for differential testing.

Everything here is deliberately naive and only meant for small instances.
Only ``post`` is shared with the main algorithms.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Optional

from .budget import Budget
from .order import Configuration, ControlSpec, leq_config, norm
from .protocol import Op, Protocol, Rule, successors
from .verify import UpwardBasis, _canonical


@dataclass(frozen=True)
class Caps:
    norm_cap: int = 6
    step_cap: int = 10_000
    state_cap: int = 100_000

    def __post_init__(self):
        if min(self.norm_cap, self.step_cap, self.state_cap) <= 0:
            raise ValueError("caps must be positive")


@dataclass(frozen=True)
class Reach:
    states: FrozenSet[Configuration]
    truncated: bool

    def covers(self, t: Configuration) -> bool:
        return any(leq_config(t, s) for s in self.states)


def bounded_reach(p: Protocol, s0: Configuration, caps: Caps = Caps()) -> Reach:
    """Breadth-first forward exploration; successors above ``norm_cap`` are
    dropped and flag the result as truncated."""
    seen = {s0}
    frontier = [s0]
    truncated = False
    depth = 0
    while frontier:
        if depth >= caps.step_cap:
            truncated = True
            break
        nxt = []
        for s in frontier:
            for u in successors(p, s):
                if norm(u) > caps.norm_cap:
                    truncated = True
                elif u not in seen:
                    if len(seen) >= caps.state_cap:
                        return Reach(frozenset(seen), True)
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
        depth += 1
    return Reach(frozenset(seen), truncated)


def brute_min_ppre(p: Protocol, t: Configuration, caps: Optional[Caps] = None) -> UpwardBasis:
    """Enumerate every configuration of norm <= ``norm_cap``, keep those with
    a step to something ``>= t``, and return the minimal ones.

    The default cap, ``max(norm(t) + 2, size(t) + 1)``, is large enough for
    every minimal pseudopredecessor: broadcast receivers drawn from a single
    location can pile up to the total size of ``t``.
    """
    if caps is None:
        caps = Caps(norm_cap=max(norm(t) + 2, t.size() + 1))
    found = []
    for counts in itertools.product(range(caps.norm_cap + 1), repeat=len(p.locations)):
        s = Configuration(dict(zip(p.locations, counts)))
        if any(leq_config(t, u) for u in successors(p, s)):
            found.append(s)
    found.sort(key=lambda s: s.size())
    mins = []
    for s in found:
        if not any(leq_config(m, s) for m in mins):
            mins.append(s)
    return UpwardBasis(_canonical(mins))


def longest_controlled_bad(q_count: int, c: ControlSpec, budget: Optional[Budget] = None) -> int:
    """Exact length (number of elements) of the longest ``(g, n0)``-controlled
    bad sequence over ``N^q_count``, by exhaustive search of the tree of
    such sequences.  The search state is the set of minimal elements seen
    so far plus the position, which is all that constrains the future."""
    if q_count not in (1, 2):
        raise ValueError("only one or two coordinates are supported")
    bounds = []
    gen = c.bounds(budget)

    def bound(i):
        while len(bounds) <= i:
            bounds.append(next(gen))
        return bounds[i]

    @lru_cache(maxsize=None)
    def best(mins: tuple, i: int) -> int:
        top = 0
        for v in itertools.product(range(bound(i) + 1), repeat=q_count):
            if any(all(a <= b for a, b in zip(m, v)) for m in mins):
                continue
            kept = [m for m in mins if not all(a <= b for a, b in zip(v, m))] + [v]
            top = max(top, 1 + best(tuple(sorted(kept)), i + 1))
        return top

    return best((), 0)


# -- random instances for differential tests --------------------------------

def random_protocol(rng: random.Random, max_locations: int = 4, max_messages: int = 3,
                    max_rules: int = 6, spawn_weight: float = 1.0) -> Protocol:
    nloc = rng.randint(2, max_locations)
    nmsg = rng.randint(1, max_messages)
    locs = tuple(f"l{i}" for i in range(nloc))
    msgs = tuple(f"m{i}" for i in range(nmsg))
    ops = [Op.SEND, Op.RECV, Op.BSEND, Op.BRECV, Op.SPAWN]
    weights = [1.0, 1.0, 1.0, 1.5, spawn_weight]
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        op = rng.choices(ops, weights)[0]
        arg = rng.choice(locs) if op is Op.SPAWN else rng.choice(msgs)
        rules.append(Rule(rng.choice(locs), op, arg, rng.choice(locs)))
    return Protocol(f"rand{rng.getrandbits(32):08x}", locs, msgs, tuple(dict.fromkeys(rules)))


def random_config(rng: random.Random, locations, max_norm: int = 2) -> Configuration:
    return Configuration({q: rng.randint(0, max_norm) for q in locations})
