"""Ordinals below epsilon_0 in Cantor normal form, and the Hardy and Cichon
hierarchies built on top of them.

Terms are immutable.  An ordinal is a tuple of ``(exponent, coefficient)``
summands with strictly decreasing exponents; the empty tuple is zero.
Every natural number is arbitrary precision.

Evaluation of ``h^alpha(x)`` and ``h_alpha(x)`` rewrites the pair
``(alpha, x)`` until ``alpha`` reaches zero.  A trailing finite part ``+ d``
is consumed in one move by iterating the control function ``d`` times in
closed form, so the step counter of a :class:`~wsts.budget.Budget` counts
limit rewrites plus finite-tail moves.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from typing import Optional, Union

from .budget import Budget, BudgetExceeded

__all__ = [
    "Ordinal", "Kind", "ZERO", "ONE", "OMEGA", "OrdinalSyntaxError",
    "parse_ordinal", "render", "compare", "classify", "fundamental",
    "HardyPair", "Terminal", "hardy_step", "ControlFn", "parse_control",
    "hardy_eval", "cichon_eval", "omega_pow",
]


class Kind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


@functools.total_ordering
@dataclass(frozen=True)
class Ordinal:
    """An ordinal ``w^e1*c1 + ... + w^en*cn`` with ``e1 > ... > en``."""

    summands: tuple = ()

    def __post_init__(self):
        prev = None
        for item in self.summands:
            if not (isinstance(item, tuple) and len(item) == 2):
                raise TypeError(f"summand must be (exponent, coefficient): {item!r}")
            exp, coef = item
            if not isinstance(exp, Ordinal):
                raise TypeError(f"exponent must be an Ordinal: {exp!r}")
            if not isinstance(coef, int) or isinstance(coef, bool) or coef <= 0:
                raise ValueError(f"coefficient must be a positive integer: {coef!r}")
            if prev is not None and compare(prev, exp) <= 0:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp

    @classmethod
    def _raw(cls, summands: tuple) -> "Ordinal":
        # trusted constructor for results of CNF-preserving operations
        obj = object.__new__(cls)
        object.__setattr__(obj, "summands", summands)
        return obj

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("negative ordinal")
        return cls._raw(((ZERO, n),)) if n else ZERO

    def __bool__(self):
        return bool(self.summands)

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return compare(self, other) < 0

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Ordinal({render(self)!r})"

    @property
    def is_finite(self) -> bool:
        return not self.summands or (len(self.summands) == 1 and not self.summands[0][0])

    def finite_value(self) -> Optional[int]:
        """The natural number this term denotes, or None if infinite."""
        if not self.summands:
            return 0
        if len(self.summands) == 1 and not self.summands[0][0]:
            return self.summands[0][1]
        return None

    def coefficient(self, exponent: "Ordinal") -> int:
        for e, c in self.summands:
            if e == exponent:
                return c
        return 0


ZERO = Ordinal._raw(())
ONE = Ordinal._raw(((ZERO, 1),))
OMEGA = Ordinal._raw(((ONE, 1),))


def omega_pow(exponent: Union[Ordinal, int], coef: int = 1) -> Ordinal:
    """``w^exponent * coef``."""
    if isinstance(exponent, int):
        exponent = Ordinal.finite(exponent)
    return Ordinal(((exponent, coef),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Three-way comparison: -1, 0 or 1."""
    for (ea, ca), (eb, cb) in zip(a.summands, b.summands):
        if ea is not eb:
            r = compare(ea, eb)
            if r:
                return r
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.summands), len(b.summands)
    return (la > lb) - (la < lb)


def classify(a: Ordinal) -> Kind:
    if not a.summands:
        return Kind.ZERO
    return Kind.LIMIT if a.summands[-1][0] else Kind.SUCCESSOR


def _drop_last(a: Ordinal) -> tuple:
    *head, (exp, coef) = a.summands
    if coef > 1:
        head.append((exp, coef - 1))
    return tuple(head)


def predecessor(a: Ordinal) -> Ordinal:
    if classify(a) is not Kind.SUCCESSOR:
        raise ValueError(f"{a} is not a successor")
    return Ordinal._raw(_drop_last(a))


def fundamental(lam: Ordinal, x: int) -> Ordinal:
    """The x-th element of the standard fundamental sequence of ``lam``.

    ``(g + w^(b+1))(x) = g + w^b*(x+1)`` and ``(g + w^l)(x) = g + w^(l(x))``.
    """
    if classify(lam) is not Kind.LIMIT:
        raise ValueError(f"{lam} is not a limit ordinal")
    if x < 0:
        raise ValueError("argument must be a natural number")
    beta = lam.summands[-1][0]
    head = _drop_last(lam)
    if classify(beta) is Kind.SUCCESSOR:
        tail = (predecessor(beta), x + 1)
    else:
        tail = (fundamental(beta, x), 1)
    return Ordinal._raw(head + (tail,))


# -- text form -------------------------------------------------------------

class OrdinalSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def render(a: Ordinal) -> str:
    if not a.summands:
        return "0"
    parts = []
    for exp, coef in a.summands:
        if not exp:
            parts.append(str(coef))
            continue
        s = "w"
        if exp != ONE:
            n = exp.finite_value()
            if n is not None:
                s += f"^{n}"
            elif exp == OMEGA:
                s += "^w"
            else:
                s += f"^({render(exp)})"
        if coef != 1:
            s += f"*{coef}"
        parts.append(s)
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


class _Parser:
    def __init__(self, text: str):
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.toks.append(("nat", int(m.group(1)), m.start(1)))
            elif not m.group(2).isspace():
                self.toks.append((m.group(2), None, m.start(2)))
        self.i = 0
        self.end = len(text)

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self):
        return self.toks[self.i][2] if self.i < len(self.toks) else self.end

    def expect(self, kind):
        if self.peek() != kind:
            found = self.peek() or "end of input"
            raise OrdinalSyntaxError(f"expected {kind!r}, found {found!r}", self.pos())
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def term(self) -> Ordinal:
        if self.peek() == "nat" and self.toks[self.i][1] == 0:
            start = self.pos()
            self.i += 1
            if self.peek() not in (None, ")"):
                raise OrdinalSyntaxError("'0' cannot be a summand", start)
            return ZERO
        summands = []
        positions = []
        while True:
            positions.append(self.pos())
            summands.append(self.prod())
            if self.peek() != "+":
                break
            self.i += 1
        for k in range(1, len(summands)):
            if compare(summands[k - 1][0], summands[k][0]) <= 0:
                raise OrdinalSyntaxError(
                    "CNF violation: exponents not strictly decreasing", positions[k])
        return Ordinal._raw(tuple(summands))

    def prod(self):
        start = self.pos()
        if self.peek() == "nat":
            n = self.expect("nat")[1]
            if n == 0:
                raise OrdinalSyntaxError("'0' cannot be a summand", start)
            if self.peek() == "*":
                raise OrdinalSyntaxError("finite summand takes no multiplier", self.pos())
            return (ZERO, n)
        exp = self.omega_base()
        coef = 1
        if self.peek() == "*":
            self.i += 1
            p = self.pos()
            coef = self.expect("nat")[1]
            if coef == 0:
                raise OrdinalSyntaxError("coefficient must be positive", p)
        return (exp, coef)

    def omega_base(self) -> Ordinal:
        self.expect("w")
        if self.peek() != "^":
            return ONE
        self.i += 1
        return self.factor()

    def factor(self) -> Ordinal:
        kind = self.peek()
        if kind == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if kind == "nat":
            return Ordinal.finite(self.expect("nat")[1])
        if kind == "w":
            return Ordinal._raw(((self.omega_base(), 1),))
        found = kind or "end of input"
        raise OrdinalSyntaxError(f"expected exponent, found {found!r}", self.pos())


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``"w^2*3 + w + 7"``-style text; only CNF input is accepted."""
    p = _Parser(text)
    if not p.toks:
        raise OrdinalSyntaxError("empty input", 0)
    t = p.term()
    if p.peek() is not None:
        raise OrdinalSyntaxError(f"unexpected {p.peek()!r}", p.pos())
    return t


# -- Hardy rewriting -------------------------------------------------------

@dataclass(frozen=True)
class HardyPair:
    alpha: Ordinal
    x: int

    def __post_init__(self):
        if self.x < 0:
            raise ValueError("argument must be a natural number")


@dataclass(frozen=True)
class Terminal:
    value: int


def hardy_step(p: HardyPair) -> Union[HardyPair, Terminal]:
    """One rewrite ``(a+1, x) -> (a, x+1)`` or ``(l, x) -> (l(x), x)``."""
    kind = classify(p.alpha)
    if kind is Kind.ZERO:
        return Terminal(p.x)
    if kind is Kind.SUCCESSOR:
        return HardyPair(predecessor(p.alpha), p.x + 1)
    return HardyPair(fundamental(p.alpha, p.x), p.x)


@dataclass(frozen=True)
class ControlFn:
    """An increasing affine control function ``x -> mul*x + add``.

    ``form`` keeps the symbolic description the function was built from.
    """

    mul: int
    add: int
    form: str = ""

    def __post_init__(self):
        if self.mul < 1 or self.add < 0:
            raise ValueError("control function must be x -> a*x + b with a >= 1, b >= 0")
        if not self.form:
            object.__setattr__(self, "form", _affine_form(self.mul, self.add))

    @classmethod
    def successor(cls) -> "ControlFn":
        return cls(1, 1, "succ")

    @classmethod
    def linear(cls, a: int) -> "ControlFn":
        return cls(a, 0, f"{a}x")

    @classmethod
    def affine(cls, b: int) -> "ControlFn":
        return cls(1, b, f"x+{b}")

    def scaled(self, m: int) -> "ControlFn":
        if m < 1:
            raise ValueError("multiplier must be positive")
        if m == 1:
            return self
        return ControlFn(m * self.mul, m * self.add, f"{m}*({self.form})")

    def __call__(self, x: int) -> int:
        return self.mul * x + self.add

    def iterate(self, x: int, n: int, budget: Optional[Budget] = None) -> int:
        """``n``-fold application, in closed form."""
        a, b = self.mul, self.add
        if a == 1:
            v = x + n * b
        else:
            if budget is not None and n * (a.bit_length() - 1) > budget.max_magnitude:
                raise BudgetExceeded(f"value exceeds {budget.max_magnitude} bits")
            an = a ** n
            v = an * x + b * (an - 1) // (a - 1)
        return budget.check_value(v) if budget is not None else v

    def __str__(self):
        return self.form


def _affine_form(a: int, b: int) -> str:
    lead = "x" if a == 1 else f"{a}x"
    return lead if b == 0 else f"{lead}+{b}"


_CONTROL = re.compile(r"^(?:(\d+)\s*\*\s*\((.*)\)|(\d*)\s*\*?\s*x\s*(?:\+\s*(\d+))?)$")


def parse_control(text: str) -> ControlFn:
    """Parse ``succ``, ``3x``, ``x+2``, ``2x+2`` or ``m*(inner)``."""
    s = text.strip()
    if s in ("succ", "successor", "x+1"):
        return ControlFn.successor()
    m = _CONTROL.match(s)
    if not m:
        raise ValueError(f"cannot parse control function {text!r}")
    if m.group(1):
        return parse_control(m.group(2)).scaled(int(m.group(1)))
    a = int(m.group(3)) if m.group(3) else 1
    b = int(m.group(4)) if m.group(4) else 0
    if b == 0:
        return ControlFn.linear(a) if a != 1 else ControlFn(1, 0, "x")
    if a == 1:
        return ControlFn.affine(b)
    return ControlFn(a, b)


def _tick(steps: int, budget: Budget) -> int:
    steps += 1
    if steps > budget.max_steps:
        raise BudgetExceeded(f"more than {budget.max_steps} rewrite steps")
    return steps


def hardy_eval(h: ControlFn, alpha: Ordinal, x: int, budget: Optional[Budget] = None) -> int:
    """``h^alpha(x)``.  Raises BudgetExceeded instead of approximating."""
    budget = budget or Budget()
    budget.check_value(x)
    steps = 0
    while alpha.summands:
        steps = _tick(steps, budget)
        exp, coef = alpha.summands[-1]
        if not exp:
            x = h.iterate(x, coef, budget)
            alpha = Ordinal._raw(alpha.summands[:-1])
        else:
            alpha = fundamental(alpha, x)
    return x


def cichon_eval(h: ControlFn, alpha: Ordinal, x: int, budget: Optional[Budget] = None) -> int:
    """``h_alpha(x)``: the number of successor rewrites in the Hardy run."""
    budget = budget or Budget()
    budget.check_value(x)
    acc = 0
    steps = 0
    while alpha.summands:
        steps = _tick(steps, budget)
        exp, coef = alpha.summands[-1]
        if not exp:
            acc = budget.check_value(acc + coef)
            if len(alpha.summands) == 1:
                # h_d(x) = d; the final iterate of h is never needed
                break
            x = h.iterate(x, coef, budget)
            alpha = Ordinal._raw(alpha.summands[:-1])
        else:
            alpha = fundamental(alpha, x)
    return acc
