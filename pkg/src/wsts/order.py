"""Multisets of locations under inclusion, their norm, and bounds on the
length of controlled bad sequences over ``N^Q``.

For a finite set ``Q`` under equality the longest bad sequence has exactly
``#Q`` elements (pigeonhole); every wqo used here is ``N^Q`` so that case
has no separate entry point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .budget import Budget
from .ordinal import ControlFn, cichon_eval, hardy_eval, omega_pow


class Configuration(Mapping):
    """A finite multiset of locations, immutable and hashable.

    Missing locations have multiplicity 0 and zero entries are never stored,
    so equal multisets compare and hash equal.
    """

    __slots__ = ("_counts", "_key", "_hash")

    def __init__(self, counts: Optional[Mapping[str, int]] = None, **kw: int):
        d = dict(counts or {})
        d.update(kw)
        for loc, n in d.items():
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"multiplicity of {loc!r} must be a natural number")
        self._counts = {k: d[k] for k in sorted(d) if d[k]}
        self._key = tuple(self._counts.items())
        self._hash = hash(self._key)

    @classmethod
    def _of(cls, d: dict) -> "Configuration":
        # d must already be zero-free
        obj = object.__new__(cls)
        obj._counts = {k: d[k] for k in sorted(d)}
        obj._key = tuple(obj._counts.items())
        obj._hash = hash(obj._key)
        return obj

    @classmethod
    def of(cls, *locations: str) -> "Configuration":
        """Build ``{q1, q2, ...}`` from a list with repetitions."""
        d: dict = {}
        for q in locations:
            d[q] = d.get(q, 0) + 1
        return cls._of(d)

    def __getitem__(self, loc):
        return self._counts.get(loc, 0)

    def __contains__(self, loc):
        return loc in self._counts

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self):
        return len(self._counts)

    def items(self):
        return self._counts.items()

    def values(self):
        return self._counts.values()

    def keys(self):
        return self._counts.keys()

    def get(self, loc, default=0):
        return self._counts.get(loc, default)

    def __eq__(self, other):
        if isinstance(other, Configuration):
            return self._key == other._key
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __le__(self, other: "Configuration") -> bool:
        return leq_config(self, other)

    def __ge__(self, other: "Configuration") -> bool:
        return leq_config(other, self)

    def __lt__(self, other: "Configuration") -> bool:
        return self != other and leq_config(self, other)

    def __gt__(self, other: "Configuration") -> bool:
        return self != other and leq_config(other, self)

    def __add__(self, other: Mapping[str, int]) -> "Configuration":
        d = dict(self._counts)
        for q, n in other.items():
            if n:
                d[q] = d.get(q, 0) + n
        return Configuration._of(d)

    def __sub__(self, other: Mapping[str, int]) -> "Configuration":
        """Truncated difference."""
        d = dict(self._counts)
        for q, n in other.items():
            if q in d:
                left = d[q] - n
                if left > 0:
                    d[q] = left
                else:
                    del d[q]
        return Configuration._of(d)

    def size(self) -> int:
        """Total number of processes."""
        return sum(self._counts.values())

    @property
    def sort_key(self):
        return self._key

    def __str__(self):
        return render_config(self)

    def __repr__(self):
        return f"Configuration({render_config(self)!r})"


EMPTY = Configuration()

_ITEM = re.compile(r"^\s*([^\s:,{}]+)\s*:\s*(\d+)\s*$")


def parse_config(text: str) -> Configuration:
    """Parse ``"c:2,q:1,r:1"``.  ``""`` and ``"{}"`` denote the empty multiset."""
    s = text.strip()
    if s.startswith("{") and s.endswith("}"):
        s = s[1:-1].strip()
    if not s:
        return EMPTY
    d: dict = {}
    for part in s.split(","):
        m = _ITEM.match(part)
        if not m:
            raise ValueError(f"bad configuration item {part.strip()!r} in {text!r}")
        loc, n = m.group(1), int(m.group(2))
        if n <= 0:
            raise ValueError(f"count of {loc!r} must be positive")
        if loc in d:
            raise ValueError(f"location {loc!r} listed twice")
        d[loc] = n
    return Configuration(d)


def render_config(s: Configuration) -> str:
    if not s:
        return "{}"
    return ",".join(f"{q}:{n}" for q, n in s.items())


def leq_config(s: Mapping[str, int], t: Mapping[str, int]) -> bool:
    """Inclusion: ``s(q) <= t(q)`` for every location."""
    tc = t._counts if isinstance(t, Configuration) else t
    for q, n in s.items():
        if n > tc.get(q, 0):
            return False
    return True


def norm(s: Configuration) -> int:
    """Largest multiplicity; 0 for the empty multiset."""
    return max(s.values(), default=0)


def find_good_pair(seq: Sequence[Configuration]) -> Optional[tuple]:
    """The increasing pair ``(i, j)``, ``i < j``, with smallest ``j`` then
    smallest ``i``; None when the sequence is bad."""
    for j in range(1, len(seq)):
        sj = seq[j]
        for i in range(j):
            if leq_config(seq[i], sj):
                return (i, j)
    return None


@dataclass(frozen=True)
class ControlSpec:
    g: ControlFn
    n0: int

    def __post_init__(self):
        if self.n0 < 0:
            raise ValueError("initial norm must be a natural number")

    def bounds(self, budget: Optional[Budget] = None) -> Iterator[int]:
        """``g^0(n0), g^1(n0), ...`` lazily."""
        v = self.n0
        while True:
            yield v
            v = self.g(v)
            if budget is not None:
                budget.check_value(v)


@dataclass(frozen=True)
class ControlCheck:
    ok: bool
    violation: Optional[int] = None

    def __bool__(self):
        return self.ok


def check_controlled(seq: Iterable[Configuration], c: ControlSpec,
                     budget: Optional[Budget] = None) -> ControlCheck:
    """Is ``norm(seq[i]) <= g^i(n0)`` for all ``i``?"""
    for i, (s, bound) in enumerate(zip(seq, c.bounds(budget))):
        if norm(s) > bound:
            return ControlCheck(False, i)
    return ControlCheck(True)


def _dickson_h(q_count: int, g: ControlFn) -> ControlFn:
    if q_count < 1:
        raise ValueError("need at least one location")
    return g.scaled(q_count)


def length_bound(q_count: int, g: ControlFn, n: int, budget: Optional[Budget] = None) -> int:
    """Upper bound ``h_{w^q_count}(n)``, ``h = q_count * g``, on the length of
    ``(g, n)``-controlled bad sequences over ``N^q_count``."""
    return cichon_eval(_dickson_h(q_count, g), omega_pow(q_count), n, budget)


def max_norm_bound(q_count: int, g: ControlFn, n: int, budget: Optional[Budget] = None) -> int:
    """Upper bound ``h^{w^q_count}(n)`` on norms along such sequences."""
    return hardy_eval(_dickson_h(q_count, g), omega_pow(q_count), n, budget)
