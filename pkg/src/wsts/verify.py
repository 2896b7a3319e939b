"""Termination and coverability for broadcast protocols, with certificates.

Termination searches the run tree depth-first and stops at the first run
that is a good sequence: by monotonicity such a prefix can be pumped into
an infinite run.  Coverability saturates the set of minimal
pseudopredecessors backwards from the target and then compares the
initial configuration against the resulting basis.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Union

from .budget import Budget, BudgetExceeded, Limits, ResourceExceeded
from .order import (Configuration, ControlSpec, check_controlled, find_good_pair,
                    leq_config, length_bound, norm, parse_config, render_config)
from .ordinal import ControlFn
from .protocol import Op, Protocol, successors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Terminates:
    max_run_length: int
    explored_states: int


@dataclass(frozen=True)
class NonTerminates:
    witness: tuple
    good_pair: tuple


TerminationVerdict = Union[Terminates, NonTerminates]


@dataclass(frozen=True)
class Coverable:
    pseudorun: tuple


@dataclass(frozen=True)
class NotCoverable:
    basis: tuple


CoverVerdict = Union[Coverable, NotCoverable]


@dataclass(frozen=True)
class UpwardBasis:
    """Minimal elements of an upward-closed set, in canonical order.

    ``links`` maps each configuration met during saturation to the
    configuration it covers in one step (None for the target itself).
    """

    elements: tuple
    links: Dict[Configuration, Optional[Configuration]] = field(
        default_factory=dict, compare=False, repr=False)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, s):
        return s in self.elements

    def below(self, s: Configuration) -> Optional[Configuration]:
        """The first element ``<= s``, if any."""
        for b in self.elements:
            if leq_config(b, s):
                return b
        return None


def _canonical(configs: Iterable[Configuration]) -> tuple:
    return tuple(sorted(configs, key=lambda c: c.sort_key))


def minimize(configs: Iterable[Configuration]) -> tuple:
    """Minimal elements under inclusion, in canonical order."""
    kept: List[Configuration] = []
    for c in sorted(set(configs), key=lambda c: (c.size(), c.sort_key)):
        if not any(leq_config(k, c) for k in kept):
            kept.append(c)
    return _canonical(kept)


# -- termination -----------------------------------------------------------

def check_termination(p: Protocol, s0: Configuration, mode: str = "exhaustive",
                      control: Optional[ControlSpec] = None,
                      budget: Optional[Budget] = None,
                      limits: Optional[Limits] = None) -> TerminationVerdict:
    """Decide whether every run from ``s0`` is finite.

    ``mode="exhaustive"`` cuts a branch as soon as the current
    configuration dominates one of its ancestors.  ``mode="length_cut"``
    drops that scan and instead reports non-termination once a run grows
    past the Dickson length bound for ``control`` (default: ``g(n) = #Q*n``
    with ``n0 = max(2, norm(s0))``); the good pair inside that run is then
    located for the certificate.
    """
    limits = limits or Limits()
    if mode not in ("exhaustive", "length_cut"):
        raise ValueError(f"unknown mode {mode!r}")
    cut = None
    if mode == "length_cut":
        if control is None:
            control = ControlSpec(ControlFn.linear(max(2, len(p.locations))), max(2, norm(s0)))
        # a bad sequence has at most bound+1 elements; a bound too large to
        # compute is far beyond max_depth, so the depth limit fires first
        try:
            cut = length_bound(len(p.locations), control.g, control.n0, budget) + 1
        except BudgetExceeded:
            cut = float("inf")

    height: Dict[Configuration, int] = {}
    path = [s0]
    succ_stack = [successors(p, s0)]
    pos = [0]
    nodes = 1
    while path:
        kids = succ_stack[-1]
        i = pos[-1]
        if i == len(kids):
            top = path.pop()
            succ_stack.pop()
            pos.pop()
            height[top] = max((height[c] + 1 for c in kids), default=0)
            continue
        pos[-1] = i + 1
        child = kids[i]
        if child in height:
            continue
        if cut is None:
            for j, anc in enumerate(path):
                if leq_config(anc, child):
                    return NonTerminates(tuple(path) + (child,), (j, len(path)))
        elif len(path) + 1 > cut:
            run = tuple(path) + (child,)
            return _cut_witness(run, control, budget)
        if len(path) >= limits.max_depth:
            raise ResourceExceeded(f"run longer than {limits.max_depth} steps")
        nodes += 1
        if nodes > limits.max_nodes:
            raise ResourceExceeded(f"more than {limits.max_nodes} configurations expanded")
        if not nodes & 1023:
            limits.check_clock()
        path.append(child)
        succ_stack.append(successors(p, child))
        pos.append(0)
    return Terminates(height[s0], len(height))


def _cut_witness(run: tuple, control: ControlSpec, budget) -> NonTerminates:
    pair = find_good_pair(run)
    if pair is None:
        chk = check_controlled(run, control, budget)
        raise ValueError(
            f"run of length {len(run) - 1} is bad; it is not controlled by "
            f"g={control.g}, n0={control.n0} (first violation at {chk.violation})")
    return NonTerminates(run[: pair[1] + 1], pair)


# -- coverability ----------------------------------------------------------

def _ppre_candidates(p: Protocol, t: Configuration):
    ones = Configuration.of
    for r1 in p.rules_of(Op.SEND):
        for r2 in p.rules_of(Op.RECV):
            if r2.arg == r1.arg:
                yield (t - ones(r1.target, r2.target)) + ones(r1.source, r2.source)
    for r in p.rules_of(Op.SPAWN):
        yield (t - ones(r.target, r.arg)) + ones(r.source)
    for r0 in p.rules_of(Op.BSEND):
        recv = [r for r in p.rules_of(Op.BRECV) if r.arg == r0.arg]
        sources = {r.source for r in recv}
        # more receivers than the target needs only yields dominated candidates
        ranges = [range(t[r.target] + 1) for r in recv]
        for counts in itertools.product(*ranges):
            images = {r0.target: 1}
            pre = {r0.source: 1}
            for r, n in zip(recv, counts):
                if n:
                    images[r.target] = images.get(r.target, 0) + n
                    pre[r.source] = pre.get(r.source, 0) + n
            frame = t - images
            if any(frame[q] for q in sources):
                continue
            yield frame + pre


def min_ppre(p: Protocol, t: Configuration) -> UpwardBasis:
    """Minimal configurations that cover ``t`` in one step."""
    return UpwardBasis(minimize(_ppre_candidates(p, t)))


def min_ppre_star(p: Protocol, t: Configuration, limits: Optional[Limits] = None) -> UpwardBasis:
    """Basis of all configurations from which ``t`` can be covered.

    FIFO backward chaining; every added element remembers the element it
    was computed from so pseudoruns can be rebuilt.
    """
    limits = limits or Limits()
    basis = {t}
    links: Dict[Configuration, Optional[Configuration]] = {t: None}
    queue = deque([t])
    processed = 0
    while queue:
        e = queue.popleft()
        if e not in basis:
            continue  # superseded by a smaller element, whose predecessors cover e's
        processed += 1
        if processed > limits.max_nodes:
            raise ResourceExceeded(f"saturation exceeded {limits.max_nodes} elements")
        limits.check_clock()
        for c in min_ppre(p, e):
            if any(leq_config(b, c) for b in basis):
                continue
            basis = {b for b in basis if not leq_config(c, b)}
            basis.add(c)
            links[c] = e
            queue.append(c)
    log.debug("saturation of %s: %d elements processed", t, processed)
    return UpwardBasis(_canonical(basis), links)


def cover(p: Protocol, s_init: Configuration, t: Configuration,
          limits: Optional[Limits] = None) -> CoverVerdict:
    basis = min_ppre_star(p, t, limits)
    b = basis.below(s_init)
    if b is None:
        return NotCoverable(basis.elements)
    run = [b]
    while basis.links[run[-1]] is not None:
        run.append(basis.links[run[-1]])
    return Coverable(tuple(run))


def simulate_from_above(p: Protocol, run: Sequence[Configuration],
                        t0: Configuration) -> List[Configuration]:
    """A run from ``t0`` whose i-th element dominates ``run[i]``.

    Works for pseudoruns too: each next element only has to be coverable
    in one step from the previous one.
    """
    if not run:
        raise ValueError("empty run")
    if not leq_config(run[0], t0):
        raise ValueError(f"{t0} does not dominate {run[0]}")
    out = [t0]
    for i, target in enumerate(run[1:], 1):
        nxt = next((u for u in successors(p, out[-1]) if leq_config(target, u)), None)
        if nxt is None:
            raise ValueError(f"no successor of {out[-1]} covers {target} (position {i})")
        out.append(nxt)
    return out


# -- certificates ----------------------------------------------------------

class CertificateError(ValueError):
    pass


def format_certificate(v) -> str:
    """Line-oriented text; one configuration literal per line."""
    if isinstance(v, NonTerminates):
        lines = ["# run", *map(render_config, v.witness), f"# good-pair {v.good_pair[0]} {v.good_pair[1]}"]
    elif isinstance(v, Coverable):
        lines = ["# pseudorun", *map(render_config, v.pseudorun)]
    elif isinstance(v, NotCoverable):
        lines = ["# basis", *map(render_config, v.basis)]
    elif isinstance(v, UpwardBasis):
        lines = ["# minppre", *map(render_config, v.elements)]
    else:
        raise TypeError(f"no certificate for {type(v).__name__}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str):
    kind = None
    configs: List[Configuration] = []
    pair = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            words = line[1:].split()
            if words and words[0] == "good-pair":
                pair = (int(words[1]), int(words[2]))
            elif words and kind is None:
                kind = words[0]
            continue
        configs.append(parse_config(line))
    if kind == "run":
        if pair is None:
            raise CertificateError("run certificate without good pair")
        return NonTerminates(tuple(configs), pair)
    if kind == "pseudorun":
        return Coverable(tuple(configs))
    if kind == "basis":
        return NotCoverable(tuple(configs))
    if kind == "minppre":
        return UpwardBasis(tuple(configs))
    raise CertificateError(f"unknown certificate kind {kind!r}")


def _antichain(elems) -> bool:
    return all(not leq_config(a, b) for a, b in itertools.permutations(elems, 2))


def check_certificate(p: Protocol, cert, init: Optional[Configuration] = None,
                      target: Optional[Configuration] = None) -> None:
    """Replay a verdict or certificate text; raise CertificateError if it
    does not justify its claim."""
    if isinstance(cert, str):
        cert = parse_certificate(cert)
    if isinstance(cert, NonTerminates):
        w, (i, j) = cert.witness, cert.good_pair
        if init is not None and (not w or w[0] != init):
            raise CertificateError("run does not start at the initial configuration")
        for k in range(1, len(w)):
            if w[k] not in successors(p, w[k - 1]):
                raise CertificateError(f"step {k - 1} -> {k} is not a transition")
        if not (0 <= i < j < len(w)) or not leq_config(w[i], w[j]):
            raise CertificateError(f"({i}, {j}) is not an increasing pair")
    elif isinstance(cert, Coverable):
        run = cert.pseudorun
        if not run:
            raise CertificateError("empty pseudorun")
        if init is not None and not leq_config(run[0], init):
            raise CertificateError("pseudorun does not start below the initial configuration")
        if target is not None and run[-1] != target:
            raise CertificateError("pseudorun does not end at the target")
        for k in range(1, len(run)):
            if not any(leq_config(run[k], u) for u in successors(p, run[k - 1])):
                raise CertificateError(f"element {k - 1} cannot cover element {k} in one step")
        if find_good_pair(run[::-1]) is not None:
            raise CertificateError("reverse sequence is not bad")
    elif isinstance(cert, NotCoverable):
        basis = UpwardBasis(cert.basis)
        if not _antichain(basis.elements):
            raise CertificateError("basis elements are not pairwise incomparable")
        if init is not None and basis.below(init) is not None:
            raise CertificateError("initial configuration lies in the basis closure")
        if target is not None and basis.below(target) is None:
            raise CertificateError("target is not in the basis closure")
        for b in basis:
            for c in min_ppre(p, b):
                if basis.below(c) is None:
                    raise CertificateError(f"pseudopredecessor {c} of {b} escapes the basis")
    elif isinstance(cert, UpwardBasis):
        if not _antichain(cert.elements):
            raise CertificateError("basis elements are not pairwise incomparable")
        if target is not None:
            for b in cert:
                if not any(leq_config(target, u) for u in successors(p, b)):
                    raise CertificateError(f"{b} cannot cover {target} in one step")
    else:
        raise CertificateError(f"nothing to check in {cert!r}")
