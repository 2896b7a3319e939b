"""Command-line front end.

Exit codes: 0 the property holds or a value was printed, 1 the property is
refuted (certificate on stdout), 2 usage or parse error, 3 a budget or
resource limit was hit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .bpfile import ProtocolFile, format_protocol, load_protocol
from .budget import Budget, LimitExceeded, Limits
from .hardness import (HardyEncoding, encode_input, honest_run, synthesize_hardy_protocol,
                       weak_run_check, SUCC)
from .oracle import Caps, bounded_reach, brute_min_ppre, longest_controlled_bad
from .order import ControlSpec, length_bound, max_norm_bound, parse_config, render_config
from .ordinal import cichon_eval, hardy_eval, parse_control, parse_ordinal
from .protocol import post
from .verify import (CertificateError, NotCoverable, Terminates,
                     check_certificate, check_termination, cover, format_certificate,
                     min_ppre, min_ppre_star, parse_certificate)

HOLDS, REFUTED, USAGE, LIMIT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _limits(args) -> Limits:
    kw = {}
    if args.limit:
        kw["max_nodes"] = args.limit
    if getattr(args, "timeout", None):
        return Limits.within(args.timeout, **kw)
    return Limits(**kw)


def _budget(args) -> Budget:
    kw = {}
    if getattr(args, "max_steps", None):
        kw["max_steps"] = args.max_steps
    if getattr(args, "max_bits", None):
        kw["max_magnitude"] = args.max_bits
    return Budget(**kw)


def _init(pf: ProtocolFile, text: Optional[str]):
    if text is not None:
        return parse_config(text)
    if pf.init is None:
        raise ValueError("no --init given and the file declares none")
    return pf.init


def _replay(p, verdict, init=None, target=None):
    """Round-trip the printed certificate through the checker."""
    check_certificate(p, parse_certificate(format_certificate(verdict)), init, target)
    print("# check ok")


def cmd_term(args) -> int:
    pf = load_protocol(args.file)
    s0 = _init(pf, args.init)
    mode = args.mode.replace("-", "_")
    v = check_termination(pf.protocol, s0, mode=mode, limits=_limits(args))
    if isinstance(v, Terminates):
        print("TERMINATES")
        print(f"max-run-length {v.max_run_length}")
        print(f"explored {v.explored_states}")
        return HOLDS
    print("DOES NOT TERMINATE")
    print(format_certificate(v), end="")
    if args.check:
        _replay(pf.protocol, v, init=s0)
    return REFUTED


def cmd_cover(args) -> int:
    pf = load_protocol(args.file)
    s0, t = _init(pf, args.init), parse_config(args.target)
    v = cover(pf.protocol, s0, t, _limits(args))
    print("NOT COVERABLE" if isinstance(v, NotCoverable) else "COVERABLE")
    print(format_certificate(v), end="")
    if args.check:
        _replay(pf.protocol, v, init=s0, target=t)
    return REFUTED if isinstance(v, NotCoverable) else HOLDS


def cmd_post(args) -> int:
    pf = load_protocol(args.file)
    s = parse_config(args.config)
    for st in post(pf.protocol, s):
        print(f"{st.kind.value} {st.label} -> {render_config(st.result)}")
    return HOLDS


def cmd_minppre(args) -> int:
    pf = load_protocol(args.file)
    t = parse_config(args.target)
    if args.star:
        basis = min_ppre_star(pf.protocol, t, _limits(args))
        print("# basis")
    else:
        basis = min_ppre(pf.protocol, t)
        print("# minppre")
    for b in basis:
        print(render_config(b))
    if args.check and not args.star:
        check_certificate(pf.protocol, basis, target=t)
        print("# check ok")
    return HOLDS


def cmd_bound(args) -> int:
    g = parse_control(args.g)
    budget = _budget(args)
    print(f"length-bound {length_bound(args.locations, g, args.n, budget)}")
    print(f"norm-bound {max_norm_bound(args.locations, g, args.n, budget)}")
    return HOLDS


def cmd_ordinal(args) -> int:
    alpha, h = parse_ordinal(args.alpha), parse_control(args.h)
    fn = cichon_eval if args.cichon else hardy_eval
    print(fn(h, alpha, args.x, _budget(args)))
    return HOLDS


def cmd_synth(args) -> int:
    p, _ = synthesize_hardy_protocol(args.k)
    text = format_protocol(p)
    if args.output == "-":
        print(text, end="")
    else:
        Path(args.output).write_text(text)
    return HOLDS


def cmd_hardy_run(args) -> int:
    pf = load_protocol(args.file)
    e = HardyEncoding.from_protocol(pf.protocol)
    s = encode_input(e, parse_ordinal(args.alpha), args.n)
    budget = _budget(args)
    expected = hardy_eval(SUCC, e.decode_alpha(s), args.n, budget)
    got = e.value(honest_run(pf.protocol, e, s, budget))
    print(f"expected {expected}")
    print(f"honest {got}")
    ok = got == expected
    if args.samples:
        rep = weak_run_check(pf.protocol, e, s, args.samples, args.seed, budget)
        print(rep)
        ok = ok and rep.all_within
    return HOLDS if ok else REFUTED


def cmd_oracle(args) -> int:
    if args.what == "longest-bad":
        c = ControlSpec(parse_control(args.g), args.n)
        print(longest_controlled_bad(args.locations, c, _budget(args)))
        return HOLDS
    pf = load_protocol(args.file)
    if args.what == "reach":
        caps = Caps(norm_cap=args.norm_cap) if args.norm_cap else Caps()
        r = bounded_reach(pf.protocol, _init(pf, args.init), caps)
        for s in sorted(r.states, key=lambda c: c.sort_key):
            print(render_config(s))
        print(f"# states {len(r.states)} truncated {str(r.truncated).lower()}")
        return HOLDS
    t = parse_config(args.target)
    caps = Caps(norm_cap=args.norm_cap) if args.norm_cap else None
    print("# minppre")
    for b in brute_min_ppre(pf.protocol, t, caps):
        print(render_config(b))
    return HOLDS


def cmd_check(args) -> int:
    pf = load_protocol(args.file)
    cert = parse_certificate(Path(args.certificate).read_text())
    init = parse_config(args.init) if args.init else pf.init
    target = parse_config(args.target) if args.target else None
    try:
        check_certificate(pf.protocol, cert, init, target)
    except CertificateError as exc:
        print(f"INVALID: {exc}")
        return REFUTED
    print("VALID")
    return HOLDS


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wsts", description="Broadcast protocol verification toolkit.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def with_limit(sp):
        sp.add_argument("--limit", type=int, help="max saturation/search nodes")
        sp.add_argument("--timeout", type=float, help="wall-clock limit in seconds")
        return sp

    def with_budget(sp):
        sp.add_argument("--max-steps", type=int)
        sp.add_argument("--max-bits", type=int, help="max bit length of computed values")
        return sp

    sp = with_limit(sub.add_parser("term", help="decide termination"))
    sp.add_argument("file")
    sp.add_argument("--init")
    sp.add_argument("--mode", choices=["exhaustive", "length-cut"], default="exhaustive")
    sp.add_argument("--check", action="store_true", help="replay the certificate")
    sp.set_defaults(fn=cmd_term)

    sp = with_limit(sub.add_parser("cover", help="decide coverability"))
    sp.add_argument("file")
    sp.add_argument("--init")
    sp.add_argument("--target", required=True)
    sp.add_argument("--check", action="store_true")
    sp.set_defaults(fn=cmd_cover)

    sp = sub.add_parser("post", help="list one-step successors")
    sp.add_argument("file")
    sp.add_argument("--config", required=True)
    sp.set_defaults(fn=cmd_post)

    sp = with_limit(sub.add_parser("minppre", help="minimal pseudopredecessors"))
    sp.add_argument("file")
    sp.add_argument("--target", required=True)
    sp.add_argument("--star", action="store_true", help="saturate")
    sp.add_argument("--check", action="store_true")
    sp.set_defaults(fn=cmd_minppre)

    sp = with_budget(sub.add_parser("bound", help="length and norm bounds"))
    sp.add_argument("--locations", type=int, required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(fn=cmd_bound)

    sp = sub.add_parser("ordinal", help="ordinal-indexed hierarchies")
    osub = sp.add_subparsers(dest="ordcmd", required=True, parser_class=_Parser)
    ev = with_budget(osub.add_parser("eval"))
    ev.add_argument("--alpha", required=True)
    ev.add_argument("--x", type=int, required=True)
    ev.add_argument("--h", default="succ")
    ev.add_argument("--cichon", action="store_true")
    ev.set_defaults(fn=cmd_ordinal)

    sp = sub.add_parser("synth-hardy", help="emit the Hardy gadget protocol")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(fn=cmd_synth)

    sp = with_budget(sub.add_parser("hardy-run", help="run a Hardy gadget"))
    sp.add_argument("file")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--samples", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_hardy_run)

    sp = sub.add_parser("oracle", help="brute-force references")
    osub = sp.add_subparsers(dest="what", required=True, parser_class=_Parser)
    r = osub.add_parser("reach")
    r.add_argument("file")
    r.add_argument("--init")
    r.add_argument("--norm-cap", type=int)
    m = osub.add_parser("minppre")
    m.add_argument("file")
    m.add_argument("--target", required=True)
    m.add_argument("--norm-cap", type=int)
    lb = with_budget(osub.add_parser("longest-bad"))
    lb.add_argument("--locations", type=int, required=True)
    lb.add_argument("--g", default="succ")
    lb.add_argument("--n", type=int, required=True)
    for x in (r, m, lb):
        x.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("check", help="validate a certificate file")
    sp.add_argument("file")
    sp.add_argument("certificate")
    sp.add_argument("--init")
    sp.add_argument("--target")
    sp.set_defaults(fn=cmd_check)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.fn(args)
    except LimitExceeded as exc:
        print(f"LIMIT EXCEEDED: {exc}")
        return LIMIT
    except CertificateError as exc:
        print(f"certificate check failed: {exc}", file=sys.stderr)
        return REFUTED
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
