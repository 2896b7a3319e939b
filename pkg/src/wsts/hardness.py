"""Broadcast protocols that weakly compute ``H^alpha(n)`` for ``alpha < w^k``
with ``H`` the successor function.

Layout.  Location ``p{i}`` holds the coefficient of ``w^i``, ``x`` holds the
argument, ``xt`` is scratch space, ``bot`` is the sink and a single token
in ``ctl`` sequences limit steps.  Rules:

* successor: ``p0 -> bot : spawn(x)`` (fires whenever ``p0`` is non-empty);
* limit at level ``b >= 1``, token-driven::

      ctl -> Lb.clr : take{b}!       p{b} -> hold : take{b}?
      Lb.clr -> Lb.tmp : clear{b}!!  p{i} -> bot : clear{b}??   (i < b)
      Lb.tmp -> Lb.rel : tmp!!       x -> xt : tmp??
      Lb.rel -> Lb.back : rel{b}!    hold -> p{b-1} : rel{b}?
      Lb.back -> Lb.spw : back!      xt -> x : back?
      Lb.spw -> Lb.back : spawn(p{b-1})
      Lb.back -> ctl : done!!        xt -> bot : done??

  The held process lands in ``p{b-1}`` and each of the ``x`` returning
  processes spawns one more, which gives the ``x + 1`` copies of
  ``w^(b-1)`` the fundamental sequence asks for.  ``x`` is parked in
  ``xt`` before the release so a new ``p0`` process cannot inflate it, and
  the phase opens with the take so it never starts without a ``p{b}``.

Nothing is ever tested for emptiness.  ``clear{b}`` and ``done`` flush
whatever is still around, so a careless schedule loses processes and ends
with a smaller value; the honest scheduler flushes only empty locations.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

from .budget import Budget, BudgetExceeded
from .ordinal import ControlFn, Ordinal, hardy_eval
from .order import Configuration
from .protocol import Op, Protocol, Rule, Step, StepKind, post, successors

SUCC = ControlFn.successor()
_PHASES = ("clr", "tmp", "rel", "back", "spw")


@dataclass(frozen=True)
class HardyEncoding:
    k: int
    ordinal_locations: tuple
    x: str = "x"
    x_tmp: str = "xt"
    sink: str = "bot"
    token: str = "ctl"
    control: tuple = field(default=())

    @classmethod
    def for_k(cls, k: int) -> "HardyEncoding":
        ctl = tuple(f"L{b}.{ph}" for b in range(1, k) for ph in _PHASES)
        return cls(k, tuple(f"p{i}" for i in range(k)), control=("ctl", "hold") + ctl)

    @classmethod
    def from_protocol(cls, p: Protocol) -> "HardyEncoding":
        k = 0
        while f"p{k}" in p.locations:
            k += 1
        e = cls.for_k(k)
        missing = set(e.locations) - set(p.locations)
        if k == 0 or missing:
            raise ValueError(f"{p.name} is not a synthesized Hardy protocol")
        return e

    @property
    def locations(self) -> tuple:
        return self.ordinal_locations + (self.x, self.x_tmp, self.sink) + self.control

    def encode(self, alpha: Ordinal, n: int) -> Configuration:
        return encode_input(self, alpha, n)

    def decode_alpha(self, s: Configuration) -> Ordinal:
        summands = []
        for i in range(self.k - 1, -1, -1):
            c = s[self.ordinal_locations[i]]
            if c:
                summands.append((Ordinal.finite(i), c))
        return Ordinal(tuple(summands))

    def value(self, s: Configuration) -> int:
        return s[self.x]


def synthesize_hardy_protocol(k: int) -> tuple:
    """``(protocol, encoding)`` for ordinals below ``w^k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    e = HardyEncoding.for_k(k)
    P = e.ordinal_locations
    R = Rule
    rules = [R(P[0], Op.SPAWN, e.x, e.sink)]
    messages = []
    if k > 1:
        messages = ["tmp", "back", "done"]
        rules += [
            R(e.x, Op.BRECV, "tmp", e.x_tmp),
            R(e.x_tmp, Op.RECV, "back", e.x),
            R(e.x_tmp, Op.BRECV, "done", e.sink),
        ]
    for b in range(1, k):
        clr, tmp, rel, back, spw = (f"L{b}.{ph}" for ph in _PHASES)
        messages += [f"take{b}", f"clear{b}", f"rel{b}"]
        rules += [
            R(e.token, Op.SEND, f"take{b}", clr),
            R(P[b], Op.RECV, f"take{b}", "hold"),
            R(clr, Op.BSEND, f"clear{b}", tmp),
            *(R(P[i], Op.BRECV, f"clear{b}", e.sink) for i in range(b)),
            R(tmp, Op.BSEND, "tmp", rel),
            R(rel, Op.SEND, f"rel{b}", back),
            R("hold", Op.RECV, f"rel{b}", P[b - 1]),
            R(back, Op.SEND, "back", spw),
            R(spw, Op.SPAWN, P[b - 1], back),
            R(back, Op.BSEND, "done", e.token),
        ]
    return Protocol(f"hardy{k}", e.locations, tuple(messages), tuple(rules)), e


def encode_input(e: HardyEncoding, alpha: Ordinal, n: int) -> Configuration:
    """``{p_i: c_i, x: n, ctl: 1}`` for ``alpha = sum w^i * c_i``."""
    d = {e.x: n, e.token: 1}
    for exp, coef in alpha.summands:
        i = exp.finite_value()
        if i is None or i >= e.k:
            raise ValueError(f"{alpha} is not below w^{e.k}")
        d[e.ordinal_locations[i]] = coef
    return Configuration(d)


def _fire(p: Protocol, s: Configuration, want: Callable[[Step], bool]) -> Configuration:
    for st in post(p, s):
        if want(st):
            return st.result
    raise RuntimeError(f"honest scheduler is stuck at {s}")


def honest_run(p: Protocol, e: HardyEncoding, s: Configuration,
               budget: Optional[Budget] = None) -> Configuration:
    """Run the loss-free schedule to completion; the final ``x`` count is
    ``H^alpha(n)``."""
    budget = budget or Budget()
    steps = 0

    def tick():
        nonlocal steps
        steps += 1
        if steps > budget.max_steps:
            raise BudgetExceeded(f"honest run longer than {budget.max_steps} steps")

    P = e.ordinal_locations
    while True:
        if s[P[0]]:
            tick()
            s = _fire(p, s, lambda st: st.kind is StepKind.SPAWN and st.label == e.x)
            continue
        if not s[e.token]:
            raise RuntimeError(f"control token missing in {s}")
        level = next((b for b in range(1, e.k) if s[P[b]]), None)
        if level is None:
            return s
        for msg in (f"take{level}", f"clear{level}", "tmp", f"rel{level}"):
            tick()
            s = _fire(p, s, lambda st: st.label == msg)
        while s[e.x_tmp]:
            tick()
            s = _fire(p, s, lambda st: st.label == "back")
            tick()
            s = _fire(p, s, lambda st: st.kind is StepKind.SPAWN and st.label == P[level - 1])
        tick()
        s = _fire(p, s, lambda st: st.label == "done")


@dataclass
class WeakRunReport:
    expected: int
    results: Counter

    @property
    def all_within(self) -> bool:
        return max(self.results) <= self.expected

    @property
    def max_attained(self) -> bool:
        return self.expected in self.results

    def __str__(self):
        dist = " ".join(f"{v}x{n}" for v, n in sorted(self.results.items()))
        flag = "ok" if self.all_within else "EXCEEDED"
        return f"expected {self.expected}; {flag}; attained={self.max_attained}; results {dist}"


def random_maximal_run(p: Protocol, s: Configuration, rng: random.Random,
                       max_steps: int) -> Configuration:
    """Pick uniformly among distinct successors until none is left."""
    for _ in range(max_steps):
        nxt = successors(p, s)
        if not nxt:
            return s
        s = rng.choice(nxt)
    raise BudgetExceeded(f"random run longer than {max_steps} steps")


def weak_run_check(p: Protocol, e: HardyEncoding, s: Configuration, samples: int,
                   seed=0, budget: Optional[Budget] = None) -> WeakRunReport:
    """Sample maximal runs and compare every final ``x`` count with the
    exact Hardy value."""
    budget = budget or Budget()
    expected = hardy_eval(SUCC, e.decode_alpha(s), e.value(s), budget)
    rng = random.Random(seed)
    results = Counter()
    for _ in range(samples):
        final = random_maximal_run(p, s, rng, budget.max_steps)
        results[e.value(final)] += 1
    return WeakRunReport(expected, results)
