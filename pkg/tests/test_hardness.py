import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import naive
from wsts.bpfile import format_protocol, parse_protocol_file
from wsts.hardness import (SUCC, HardyEncoding, encode_input, honest_run,
                           synthesize_hardy_protocol, weak_run_check)
from wsts.oracle import Caps, bounded_reach, random_config
from wsts.ordinal import Ordinal, hardy_eval, parse_ordinal
from wsts.order import leq_config
from wsts.protocol import fig1, successors, validate
from wsts.verify import Terminates, check_termination

P1, E1 = synthesize_hardy_protocol(1)
P2, E2 = synthesize_hardy_protocol(2)
P3, E3 = synthesize_hardy_protocol(3)


def _below_w2(max_coef):
    for a, b in itertools.product(range(max_coef + 1), repeat=2):
        yield Ordinal(tuple(s for s in ((Ordinal.finite(1), a), (Ordinal.finite(0), b)) if s[1]))


@pytest.mark.parametrize("p", [P1, P2, P3])
def test_synthesized_protocols_are_clean(p):
    assert validate(p) == []
    assert parse_protocol_file(format_protocol(p)).protocol == p


def test_encoding():
    s = encode_input(E2, parse_ordinal("w*3 + 2"), 4)
    assert str(s) == "ctl:1,p0:2,p1:3,x:4"
    assert E2.decode_alpha(s) == parse_ordinal("w*3 + 2")
    assert E2.value(s) == 4
    with pytest.raises(ValueError):
        encode_input(E2, parse_ordinal("w^2"), 1)
    with pytest.raises(ValueError):
        synthesize_hardy_protocol(0)


def test_encoding_from_protocol():
    assert HardyEncoding.from_protocol(P3) == E3
    with pytest.raises(ValueError):
        HardyEncoding.from_protocol(fig1())


def test_k1_adds_the_coefficient():
    assert E1.value(honest_run(P1, E1, encode_input(E1, Ordinal.finite(3), 4))) == 7


@pytest.mark.parametrize("alpha", list(_below_w2(3)), ids=str)
def test_honest_run_computes_hardy(alpha):
    for n in range(4):
        s = honest_run(P2, E2, encode_input(E2, alpha, n))
        assert E2.value(s) == naive.hardy(naive.succ, naive.from_ordinal(alpha), n)
        assert not successors(P2, s)  # the honest run is maximal


@pytest.mark.parametrize("alpha,n", [("w^2", 0), ("w^2", 1), ("w^2", 2), ("w^2 + w", 1),
                                     ("w^2 + w + 1", 1), ("w^2*2", 1)])
def test_honest_run_three_levels(alpha, n):
    a = parse_ordinal(alpha)
    s = honest_run(P3, E3, encode_input(E3, a, n))
    assert E3.value(s) == hardy_eval(SUCC, a, n)


@pytest.mark.parametrize("alpha", list(_below_w2(2)), ids=str)
def test_every_maximal_run_is_weakly_correct(alpha):
    """Exhaustive: dead configurations never exceed H^alpha(n) and some
    dead configuration reaches it."""
    for n in range(3):
        expected = hardy_eval(SUCC, alpha, n)
        r = bounded_reach(P2, encode_input(E2, alpha, n), Caps(norm_cap=64, state_cap=200_000))
        assert not r.truncated
        dead = [s for s in r.states if not successors(P2, s)]
        assert max(E2.value(s) for s in dead) == expected


def test_random_runs_stay_below():
    for alpha, n in [("w*2 + 1", 2), ("w*3", 1), ("3", 3)]:
        rep = weak_run_check(P2, E2, encode_input(E2, parse_ordinal(alpha), n), 100, seed=1)
        assert rep.all_within, str(rep)
    rep = weak_run_check(P3, E3, encode_input(E3, parse_ordinal("w^2"), 1), 100, seed=2)
    assert rep.all_within, str(rep)


@pytest.mark.parametrize("alpha", ["0", "1", "2", "w", "w + 1", "w + 2", "w*2"])
def test_gadget_terminates(alpha):
    for n in range(3):
        v = check_termination(P2, encode_input(E2, parse_ordinal(alpha), n))
        assert isinstance(v, Terminates)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_gadget_monotonicity(seed):
    rng = random.Random(seed)
    p = rng.choice([P2, P3])
    s = random_config(rng, p.locations, max_norm=1)
    t = s + random_config(rng, p.locations, max_norm=1)
    for s2 in successors(p, s):
        assert any(leq_config(s2, t2) for t2 in successors(p, t))
