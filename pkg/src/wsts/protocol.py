"""Broadcast protocols: locations, messages, rules, and the one-step
successor relation on configurations.

Conventions beyond the bare semantics:

* a broadcast may have no receivers at all;
* the sender of a broadcast only sends, even when its own location also
  has a receive rule for that message (other processes there must receive);
* with several receive rules at one location every receiving process
  picks its rule independently, so ``post`` enumerates all splits;
* a rendez-vous needs two distinct processes.
"""

from __future__ import annotations

import enum
import functools
import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Sequence, Union

from .order import Configuration


class Op(enum.Enum):
    SEND = "!"
    RECV = "?"
    BSEND = "!!"
    BRECV = "??"
    SPAWN = "spawn"


@dataclass(frozen=True)
class Rule:
    source: str
    op: Op
    arg: str  # message name, or the spawned location for SPAWN
    target: str

    @property
    def label(self) -> str:
        if self.op is Op.SPAWN:
            return f"spawn({self.arg})"
        return f"{self.arg}{self.op.value}"

    def __str__(self):
        return f"{self.source} -> {self.target} : {self.label}"


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    message: str

    def __str__(self):
        return f"{self.level}: {self.message}"


class ProtocolError(ValueError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Protocol:
    name: str
    locations: tuple
    messages: tuple
    rules: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "messages", tuple(self.messages))
        object.__setattr__(self, "rules", tuple(self.rules))

    def rules_of(self, op: Op) -> List[Rule]:
        return [r for r in self.rules if r.op is op]

    @functools.cached_property
    def _index(self):
        spawns, rv_send, bsend = [], [], []
        rv_recv: dict = {}
        brecv: dict = {}
        for r in self.rules:
            if r.op is Op.SPAWN:
                spawns.append(r)
            elif r.op is Op.SEND:
                rv_send.append(r)
            elif r.op is Op.RECV:
                rv_recv.setdefault(r.arg, []).append(r)
            elif r.op is Op.BSEND:
                bsend.append(r)
            else:
                brecv.setdefault(r.arg, {}).setdefault(r.source, []).append(r)
        return spawns, rv_send, rv_recv, bsend, brecv

    def broadcast_receivers(self, m: str) -> dict:
        """``{location: [receive rules]}`` for broadcast message ``m``."""
        return self._index[4].get(m, {})


def validate(p: Protocol) -> List[Diagnostic]:
    """Errors for broken invariants, warnings for dead receive rules."""
    out: List[Diagnostic] = []
    for kind, names in (("location", p.locations), ("message", p.messages)):
        seen = set()
        for n in names:
            if n in seen:
                out.append(Diagnostic("error", f"duplicate {kind} {n!r}"))
            seen.add(n)
    locs, msgs = set(p.locations), set(p.messages)
    for i, r in enumerate(p.rules):
        where = f"rule {i} ({r})"
        for q in (r.source, r.target) + ((r.arg,) if r.op is Op.SPAWN else ()):
            if q not in locs:
                out.append(Diagnostic("error", f"{where}: undeclared location {q!r}"))
        if r.op is not Op.SPAWN and r.arg not in msgs:
            out.append(Diagnostic("error", f"{where}: undeclared message {r.arg!r}"))
    if len(set(p.rules)) != len(p.rules):
        out.append(Diagnostic("warning", "duplicate rules"))
    sent = {(r.op, r.arg) for r in p.rules}
    for r in p.rules:
        if r.op is Op.RECV and (Op.SEND, r.arg) not in sent:
            out.append(Diagnostic("warning", f"dead rule {r}: {r.arg!r} is never sent"))
        elif r.op is Op.BRECV and (Op.BSEND, r.arg) not in sent:
            out.append(Diagnostic("warning", f"dead rule {r}: {r.arg!r} is never broadcast"))
    return out


def is_valid(p: Protocol) -> bool:
    return not any(d.level == "error" for d in validate(p))


def checked(p: Protocol) -> Protocol:
    """Return ``p`` or raise ProtocolError listing its errors."""
    errs = [d for d in validate(p) if d.level == "error"]
    if errs:
        raise ProtocolError(errs)
    return p


class StepKind(enum.Enum):
    RENDEZVOUS = "rendezvous"
    SPAWN = "spawn"
    BROADCAST = "broadcast"


@dataclass(frozen=True)
class Step:
    """One transition; ``rules`` lists the sender/spawner first."""

    kind: StepKind
    label: str  # message, or spawned location
    rules: tuple
    result: Configuration
    receivers: tuple = field(default=())  # ((rule, count), ...) for broadcasts

    def __str__(self):
        return f"--{self.label}--> {self.result}"


def _compositions(n: int, k: int) -> Iterator[tuple]:
    """All ways to write ``n`` as an ordered sum of ``k`` naturals."""
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _one(q: str) -> dict:
    return {q: 1}


def _steps(p: Protocol, s: Configuration) -> Iterator[Step]:
    spawns, rv_send, rv_recv, bsend, brecv = p._index
    for r1 in rv_send:
        if not s[r1.source]:
            continue
        for r2 in rv_recv.get(r1.arg, ()):
            if s[r2.source] < (2 if r2.source == r1.source else 1):
                continue
            res = s - Configuration.of(r1.source, r2.source) + Configuration.of(r1.target, r2.target)
            yield Step(StepKind.RENDEZVOUS, r1.arg, (r1, r2), res)
    for r in spawns:
        if s[r.source]:
            res = s - _one(r.source) + Configuration.of(r.target, r.arg)
            yield Step(StepKind.SPAWN, r.arg, (r,), res)
    for r0 in bsend:
        if not s[r0.source]:
            continue
        rest = s - _one(r0.source)
        by_loc = brecv.get(r0.arg, {})
        present = [(q, rest[q], rs) for q, rs in by_loc.items() if rest[q]]
        frame = rest - {q: n for q, n, _ in present} + _one(r0.target)
        choices = [
            [tuple(zip(rs, split)) for split in _compositions(n, len(rs))]
            for q, n, rs in present
        ]
        for combo in itertools.product(*choices):
            recv = tuple((r, c) for part in combo for r, c in part if c)
            res = frame + _sum_targets(recv)
            yield Step(StepKind.BROADCAST, r0.arg, (r0,), res, recv)


def _sum_targets(recv) -> dict:
    d: dict = {}
    for r, c in recv:
        d[r.target] = d.get(r.target, 0) + c
    return d


_KIND_ORDER = {StepKind.RENDEZVOUS: 0, StepKind.SPAWN: 1, StepKind.BROADCAST: 2}


def post(p: Protocol, s: Configuration) -> List[Step]:
    """All one-step successors of ``s``, deduplicated on (kind, label,
    result) and sorted for determinism."""
    seen = {}
    for st in _steps(p, s):
        seen.setdefault((st.kind, st.label, st.result), st)
    return [seen[k] for k in sorted(seen, key=lambda k: (_KIND_ORDER[k[0]], k[1], k[2].sort_key))]


def successors(p: Protocol, s: Configuration) -> List[Configuration]:
    """Distinct successor configurations, in canonical order."""
    return sorted({st.result for st in _steps(p, s)}, key=lambda c: c.sort_key)


class GuideError(ValueError):
    def __init__(self, position: int, selector, config: Configuration):
        super().__init__(f"selector {selector!r} not enabled at position {position} in {config}")
        self.position = position


Selector = Union[str, Callable[[Step], bool]]

_SPAWN_SEL = re.compile(r"^(?:spawn|sp)\((\S+)\)$")


def matches(selector: Selector, st: Step) -> bool:
    """Selectors: a message name, ``spawn``, ``spawn(p)``/``sp(p)`` for the
    spawned location, ``spawn@q`` for the spawning location, ``#i`` for a
    rule index, or a predicate on Step."""
    if callable(selector):
        return selector(st)
    sel = selector.strip()
    if sel == "spawn":
        return st.kind is StepKind.SPAWN
    m = _SPAWN_SEL.match(sel)
    if m:
        return st.kind is StepKind.SPAWN and st.label == m.group(1)
    if sel.startswith("spawn@"):
        return st.kind is StepKind.SPAWN and st.rules[0].source == sel[6:]
    return st.kind is not StepKind.SPAWN and st.label == sel


def run_guided(p: Protocol, s0: Configuration, script: Sequence[Selector]) -> List[Configuration]:
    """Replay ``script`` from ``s0``; each selector takes the first matching
    enabled step in ``post`` order."""
    run = [s0]
    s = s0
    for i, sel in enumerate(script):
        if isinstance(sel, str) and sel.startswith("#"):
            rule = p.rules[int(sel[1:])]
            pick = [st for st in post(p, s) if rule in st.rules or any(r is rule for r, _ in st.receivers)]
        else:
            pick = [st for st in post(p, s) if matches(sel, st)]
        if not pick:
            raise GuideError(i, sel, s)
        s = pick[0].result
        run.append(s)
    return run


def is_run(p: Protocol, seq: Sequence[Configuration]) -> bool:
    return all(b in successors(p, a) for a, b in zip(seq, seq[1:]))


def fig1() -> Protocol:
    """The five-location example: ``c`` spawns actives, ``m`` and ``d``
    broadcasts flush them, ``bot`` is a sink."""
    R = Rule
    return Protocol(
        "fig1",
        ("r", "c", "a", "q", "bot"),
        ("d", "m"),
        (
            R("r", Op.BSEND, "d", "c"),
            R("c", Op.SPAWN, "a", "a"),
            R("a", Op.BRECV, "m", "c"),
            R("c", Op.BRECV, "d", "q"),
            R("q", Op.BSEND, "m", "bot"),
        ),
    )


def doubling_script(n: int) -> List[str]:
    """Selectors for the greedy schedule of ``fig1`` from ``{c, q, r^n}``.

    Each ``q`` doubles the ``c`` population (every ``c`` spawns, then ``m``
    flushes the actives back); ``d`` then turns all ``c`` into ``q``.  The
    ``q`` count goes ``1 -> 2 -> 4 -> 16 -> 65536``.
    """
    script: List[str] = []
    q = 1
    for _ in range(n):
        c = 1
        for _ in range(q):
            script += ["spawn"] * c + ["m"]
            c *= 2
        script.append("d")
        q = c
    return script
