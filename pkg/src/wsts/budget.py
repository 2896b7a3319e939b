"""Resource limits shared by the evaluators and the decision procedures."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional


class LimitExceeded(RuntimeError):
    """Base class for "gave up" outcomes; never a verdict."""


class BudgetExceeded(LimitExceeded):
    """A numeric evaluation ran past its step or magnitude budget."""


class ResourceExceeded(LimitExceeded):
    """A search hit a user-supplied node or depth limit."""


@dataclass(frozen=True)
class Budget:
    """Caps on rewrite steps and on the bit size of intermediate values."""

    max_steps: int = 1_000_000
    max_magnitude: int = 1 << 20

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_magnitude <= 0:
            raise ValueError("budget caps must be positive")

    def check_value(self, v: int) -> int:
        if v.bit_length() > self.max_magnitude:
            raise BudgetExceeded(f"value exceeds {self.max_magnitude} bits")
        return v


@dataclass(frozen=True)
class Limits:
    """Search limits for the termination and coverability procedures.

    ``max_nodes`` bounds the number of configurations expanded and
    ``max_depth`` the length of any explored run.  ``deadline`` is an
    optional ``time.monotonic()`` instant; several searches may share it.
    """

    max_nodes: int = 1_000_000
    max_depth: int = 100_000
    deadline: Optional[float] = None

    @classmethod
    def within(cls, seconds: float, **kw) -> "Limits":
        return cls(deadline=time.monotonic() + seconds, **kw)

    def check_clock(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceExceeded("time limit reached")
