"""Words over {L,R} modulo LR^2 = RL^2: normal forms, the word problem,
cones, and the faithful interval representation on [0,1].

Normal forms avoid the factor RLL (rewrite orientation RLL -> LRR).  The
rewriting system has no overlapping left-hand sides, so it is confluent;
this is additionally validated empirically in the tests up to length 12.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ztau import ZTau, ZERO, ONE, TAU2, DomainError

LETTERS = "LR"


def check_word(w: str) -> str:
    if set(w) - set(LETTERS):
        raise DomainError(f"word {w!r} must be over {{L,R}}")
    return w


@lru_cache(maxsize=None)
def normalize(w: str) -> str:
    """Rewrite RLL -> LRR until no factor RLL remains.  Length-preserving."""
    check_word(w)
    i = w.find("RLL")
    while i >= 0:
        w = w[:i] + "LRR" + w[i + 3:]
        # after a leftmost rewrite, the next redex starts at i-2 or later
        i = w.find("RLL", max(i - 2, 0))
    return w


def is_normal(w: str) -> bool:
    return "RLL" not in w


def mul(u: str, v: str) -> str:
    return normalize(u + v)


def congruence_class(w: str, cap: int = 100_000) -> frozenset[str]:
    """All words congruent to w (BFS over both rewrite directions)."""
    seen = {w}
    todo = [w]
    while todo:
        cur = todo.pop()
        for i in range(len(cur) - 2):
            fac = cur[i:i + 3]
            if fac == "RLL":
                nxt = cur[:i] + "LRR" + cur[i + 3:]
            elif fac == "LRR":
                nxt = cur[:i] + "RLL" + cur[i + 3:]
            else:
                continue
            if nxt not in seen:
                if len(seen) >= cap:
                    raise DomainError("congruence class exceeded cap")
                seen.add(nxt)
                todo.append(nxt)
    return frozenset(seen)


@dataclass(frozen=True)
class Interval:
    """Closed subinterval of [0,1] with exact Z[tau] endpoints."""

    lo: ZTau
    hi: ZTau

    def width(self) -> ZTau:
        return self.hi - self.lo

    def contains(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}


UNIT = Interval(ZERO, ONE)


def subdivide(iv: Interval, letter: str) -> Interval:
    """[x,y]_L = [x, y-(y-x)t^2];  [x,y]_R = [x+(y-x)t^2, y]."""
    w = iv.width() * TAU2
    if letter == "L":
        return Interval(iv.lo, iv.hi - w)
    if letter == "R":
        return Interval(iv.lo + w, iv.hi)
    raise DomainError(f"bad letter {letter!r}")


@lru_cache(maxsize=None)
def interval(w: str) -> Interval:
    """The subinterval [0,1]_w; identical for all words congruent to w."""
    if not w:
        return UNIT
    return subdivide(interval(w[:-1]), w[-1])


def midpoint_key(w: str) -> ZTau:
    """Twice the interval midpoint of w; exact and totally ordered."""
    iv = interval(w)
    return iv.lo + iv.hi


def equal(u: str, v: str) -> bool:
    """Word problem.  In debug mode the rewriting answer is cross-checked
    against the interval representation; the two must agree."""
    res = normalize(u) == normalize(v)
    if __debug__:
        alt = len(u) == len(v) and interval(u) == interval(v)
        if alt != res:
            raise AssertionError(f"word-problem decision mismatch on {u!r}, {v!r}")
    return res


def cone_contains(m: str, x: str) -> bool:
    """x in Cone(m), decided by interval inclusion."""
    return interval(m).contains(interval(x))


def meet_cone(x: str, y: str) -> str:
    """The longest m with x and y both in Cone(m) (empty word possible)."""
    ix, iy = interval(x), interval(y)
    cur = UNIT
    out = []
    descending = True
    while descending:
        descending = False
        for c in LETTERS:
            child = subdivide(cur, c)
            if child.contains(ix) and child.contains(iy):
                cur = child
                out.append(c)
                descending = True
                break
    return normalize("".join(out))


def _strip_letter(c: str, x: str) -> str:
    # x is a normal form known to lie in Cone(c); return the normal form of c^-1 x
    if not x:
        raise DomainError(f"cannot strip {c} from the empty word")
    if x[0] == c:
        return x[1:]
    # x starts with the other letter d, so x is in Cone(LR^2) = Cone(RL^2):
    # x = d u with u = c c t, and c^-1 x = d d t by the defining relation.
    d = x[0]
    u = x[1:]
    t = _strip_letter(c, _strip_letter(c, u))
    return normalize(d + d + t)


def left_divide(m: str, x: str) -> str:
    """The unique x' with m x' = x in the monoid; error if x not in Cone(m)."""
    x = normalize(x)
    m = normalize(m)
    if not cone_contains(m, x):
        raise DomainError(f"{x!r} is not in Cone({m!r})")
    for c in m:
        x = _strip_letter(c, x)
    return x
