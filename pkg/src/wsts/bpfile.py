"""Reader and printer for ``.bp`` protocol files.

::

    protocol fig1 {
      locations r, c, a, q, bot;
      messages d, m;
      init { c:2, q:1, r:1 }      # optional
      rules {
        r -> c : d!!;
        c -> a : spawn(a);
      }
    }

Operations are ``m!``, ``m?``, ``m!!``, ``m??`` and ``spawn(loc)``.
``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from .order import Configuration
from .protocol import Op, Protocol, Rule, validate


class ProtocolSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col = line, col


@dataclass(frozen=True)
class ProtocolFile:
    protocol: Protocol
    init: Optional[Configuration] = None
    path: Optional[str] = None


_TOKENS = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.']*)
  | (?P<num>\d+)
  | (?P<arrow>->)
  | (?P<op>!!|\?\?|!|\?)
  | (?P<punct>[{}(),;:])
  | (?P<bad>.)
""", re.VERBOSE)


def _tokenize(text: str):
    line, start = 1, 0
    for m in _TOKENS.finditer(text):
        kind = m.lastgroup
        col = m.start() - start + 1
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind == "bad":
            raise ProtocolSyntaxError(f"unexpected character {m.group()!r}", line, col)
        elif kind != "ws":
            yield kind, m.group(), line, col
    yield "eof", "", line, len(text) - start + 1


class _Reader:
    def __init__(self, text: str):
        self.toks = list(_tokenize(text))
        self.i = 0

    @property
    def tok(self):
        return self.toks[min(self.i, len(self.toks) - 1)]

    def at(self, value: str) -> bool:
        return self.tok[1] == value and self.tok[0] != "eof"

    def fail(self, msg: str, tok=None):
        tok = tok or self.tok
        raise ProtocolSyntaxError(msg, tok[2], tok[3])

    def take(self, value: Optional[str] = None, kind: Optional[str] = None):
        t = self.tok
        if (value is not None and t[1] != value) or (kind is not None and t[0] != kind):
            want = repr(value) if value is not None else kind
            found = "end of file" if t[0] == "eof" else repr(t[1])
            self.fail(f"expected {want}, found {found}")
        self.i += 1
        return t

    def names(self):
        out = [self.take(kind="ident")]
        while self.at(","):
            self.take(",")
            out.append(self.take(kind="ident"))
        return out


def parse_protocol_file(text: str, path: Optional[str] = None) -> ProtocolFile:
    """Parse and validate; errors carry ``line:col``."""
    rd = _Reader(text)
    rd.take("protocol")
    name = rd.take(kind="ident")[1]
    rd.take("{")
    locs, msgs, init, rules = [], [], None, []
    seen_sections = set()
    while not rd.at("}"):
        head = rd.take(kind="ident")
        key = head[1]
        if key in seen_sections:
            rd.fail(f"duplicate section {key!r}", head)
        seen_sections.add(key)
        if key in ("locations", "messages"):
            items = [] if rd.at(";") else rd.names()
            rd.take(";")
            target = locs if key == "locations" else msgs
            seen = set()
            for t in items:
                if t[1] in seen:
                    rd.fail(f"duplicate {key[:-1]} {t[1]!r}", t)
                seen.add(t[1])
                target.append(t[1])
        elif key == "init":
            rd.take("{")
            counts = {}
            while not rd.at("}"):
                loc = rd.take(kind="ident")
                rd.take(":")
                n = int(rd.take(kind="num")[1])
                if loc[1] in counts:
                    rd.fail(f"location {loc[1]!r} listed twice", loc)
                if loc[1] not in locs:
                    rd.fail(f"undeclared location {loc[1]!r}", loc)
                counts[loc[1]] = n
                if not rd.at("}"):
                    rd.take(",")
            rd.take("}")
            if rd.at(";"):
                rd.take(";")
            init = Configuration(counts)
        elif key == "rules":
            rd.take("{")
            while not rd.at("}"):
                rules.append(_rule(rd, locs, msgs))
            rd.take("}")
        else:
            rd.fail(f"unknown section {key!r}", head)
    rd.take("}")
    rd.take(kind="eof")
    if "locations" not in seen_sections:
        rd.fail("missing 'locations' section")
    p = Protocol(name, tuple(locs), tuple(msgs), tuple(r for r, _ in rules))
    errors = [d for d in validate(p) if d.level == "error"]
    if errors:
        # undeclared names are caught in _rule; this is a safety net
        rd.fail(str(errors[0]))
    return ProtocolFile(p, init, path)


def _rule(rd: _Reader, locs: List[str], msgs: List[str]):
    src = rd.take(kind="ident")
    rd.take("->")
    dst = rd.take(kind="ident")
    rd.take(":")
    for t in (src, dst):
        if t[1] not in locs:
            rd.fail(f"undeclared location {t[1]!r}", t)
    first = rd.take(kind="ident")
    if first[1] == "spawn" and rd.at("("):
        rd.take("(")
        arg = rd.take(kind="ident")
        rd.take(")")
        if arg[1] not in locs:
            rd.fail(f"undeclared location {arg[1]!r}", arg)
        op = Op.SPAWN
    else:
        arg = first
        sym = rd.take(kind="op")[1]
        op = {"!": Op.SEND, "?": Op.RECV, "!!": Op.BSEND, "??": Op.BRECV}[sym]
        if arg[1] not in msgs:
            rd.fail(f"undeclared message {arg[1]!r}", arg)
    rd.take(";")
    return Rule(src[1], op, arg[1], dst[1]), src


def load_protocol(path) -> ProtocolFile:
    path = Path(path)
    return parse_protocol_file(path.read_text(), str(path))


def format_protocol(p: Protocol, init: Optional[Configuration] = None) -> str:
    lines = [f"protocol {p.name} {{", f"  locations {', '.join(p.locations)};"]
    if p.messages:
        lines.append(f"  messages {', '.join(p.messages)};")
    if init is not None:
        body = ", ".join(f"{q}:{n}" for q, n in init.items())
        lines.append(f"  init {{ {body} }}")
    lines.append("  rules {")
    lines += [f"    {r};" for r in p.rules]
    lines += ["  }", "}"]
    return "\n".join(lines) + "\n"
