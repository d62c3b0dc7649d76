import itertools
from functools import lru_cache

import pytest

from goldenmonoid.ztau import ZERO, TAU, TAU2, DomainError
from goldenmonoid.monoid import (Interval, UNIT, cone_contains, congruence_class,
                                 equal, interval, is_normal, left_divide,
                                 meet_cone, mul, normalize)
from conftest import all_words


# --- oracles ---------------------------------------------------------------

@lru_cache(maxsize=None)
def reachable_normal_forms(w: str) -> frozenset:
    """Every normal form reachable by applying RLL->LRR in any order."""
    redexes = [i for i in range(len(w) - 2) if w[i:i + 3] == "RLL"]
    if not redexes:
        return frozenset({w})
    out = set()
    for i in redexes:
        out |= reachable_normal_forms(w[:i] + "LRR" + w[i + 3:])
    return frozenset(out)


def cone_contains_oracle(m: str, x: str) -> bool:
    k = len(x) - len(m)
    if k < 0:
        return False
    target = normalize(x)
    return any(normalize(m + "".join(s)) == target
               for s in itertools.product("LR", repeat=k))


# --- normalize -------------------------------------------------------------

def test_normalize_examples():
    assert normalize("RLL") == "LRR"
    # derived via the congruence-closure oracle: the class of LRLL has a
    # single RLL-free member
    cls = congruence_class("LRLL")
    normals = {w for w in cls if is_normal(w)}
    assert normals == {"LLRR"}
    assert normalize("LRLL") == "LLRR"
    assert normalize("LRR") == "LRR"


def test_confluence_up_to_12():
    for w in all_words(12):
        assert len(reachable_normal_forms(w)) == 1
        assert normalize(w) in reachable_normal_forms(w)


def test_length_preserved():
    for w in all_words(12):
        assert len(normalize(w)) == len(w)


def test_equal_examples():
    assert equal("RLL", "LRR")
    assert not equal("L", "R")
    assert equal("RLLR", "LRRR")


def test_word_problem_matches_interval_representation():
    # partitions by normal form and by (length, interval) must coincide
    by_nf = {}
    by_iv = {}
    for w in all_words(10):
        by_nf.setdefault(normalize(w), []).append(w)
        by_iv.setdefault((len(w), interval(w)), []).append(w)
    assert sorted(map(sorted, by_nf.values())) == sorted(map(sorted, by_iv.values()))


# --- intervals ---------------------------------------------------------------

def test_interval_examples():
    assert interval("L") == Interval(ZERO, TAU)
    assert interval("LRR") == Interval(TAU2, TAU)
    assert interval("RLL") == Interval(TAU2, TAU)
    assert interval("") == UNIT


def test_interval_subdivision_identities():
    for w in all_words(10):
        if not is_normal(w):
            continue
        iv, ivl, ivr = interval(w), interval(w + "L"), interval(w + "R")
        # union covers the parent, overlapping exactly on the LRR interval
        assert ivl.lo == iv.lo and ivr.hi == iv.hi
        assert ivr.lo <= ivl.hi
        assert Interval(ivr.lo, ivl.hi) == interval(w + "LRR")


# --- cones -------------------------------------------------------------------

def test_cone_contains_examples():
    assert cone_contains("L", "RLL")
    assert not cone_contains("LR", "L")
    assert cone_contains("LRR", "RLLR")


def test_cone_contains_against_oracle():
    words = list(all_words(4))
    for m in all_words(3):
        for x in words:
            assert cone_contains(m, x) == cone_contains_oracle(m, x)


def test_meet_cone_examples():
    assert meet_cone("LLR", "LRL") == "L"
    assert meet_cone("L", "R") == ""
    assert meet_cone("LRRL", "RLLR") == "LRR"


def test_meet_cone_against_enumeration():
    words = [normalize(w) for w in all_words(5)]
    candidates = sorted(set(words), key=len)
    pairs = [("LL", "LRL"), ("LRR", "RLL"), ("LRLR", "LRRL"),
             ("RRL", "RL"), ("LLLL", "LLRR"), ("RLLRR", "LRRRL")]
    for x, y in pairs:
        best = max((p for p in candidates
                    if cone_contains(p, x) and cone_contains(p, y)), key=len)
        got = meet_cone(x, y)
        assert len(got) == len(best) and equal(got, best)


def test_meet_cone_symmetric_idempotent():
    words = [normalize(w) for w in all_words(4)]
    for x in words:
        assert meet_cone(x, x) == normalize(x)
        for y in words[:12]:
            assert meet_cone(x, y) == meet_cone(y, x)


def test_left_divide_examples():
    assert left_divide("L", "LRR") == "RR"
    assert left_divide("L", "RLL") == "RR"
    assert left_divide("LR", "RLLR") == "RR"


def test_left_divide_roundtrip():
    for m in all_words(3):
        for s in all_words(4, min_len=0):
            x = mul(m, s)
            quot = left_divide(m, x)
            assert equal(quot, s)
            assert equal(mul(m, quot), x)
    with pytest.raises(DomainError):
        left_divide("LR", "L")
