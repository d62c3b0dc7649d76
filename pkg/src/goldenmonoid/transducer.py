"""Asynchronous transducers over {0,1}: running, composition, local actions,
equivalence, inversion, and nucleus computation; exact piecewise-linear maps
on [0,1] with tau-power slopes, caret tree pairs, and synthesis of a
transducer from a map so that the quotient map intertwines the two actions.

Machines are deterministic: one state-to-state transition per input symbol,
each emitting a finite (possibly empty) output word.  Equivalence of
machines as maps is decided by a bounded synchronized bisimulation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ztau import (EPWord, QTau, ZTau, DomainError, TAU, TAU2, epword, q,
                   tau_pow_q, word_side)
from .cayley import AnomalyError, BudgetExceeded

SYMBOLS = "01"
DEFAULT_STATE_BUDGET = 256


class Transducer:
    """Finite-state machine reading one binary symbol and emitting a word."""

    def __init__(self, states, initial, delta, name=None):
        self.states = tuple(states)
        self.initial = initial
        self.delta = dict(delta)  # (state, symbol) -> (out, next)
        self.name = name
        if initial not in self.states:
            raise DomainError("initial state missing")
        for q_ in self.states:
            for a in SYMBOLS:
                if (q_, a) in self.delta:
                    out, nxt = self.delta[(q_, a)]
                    if nxt not in self.states or set(out) - set(SYMBOLS):
                        raise DomainError(f"bad transition {(q_, a)}")

    def step(self, state, symbol):
        try:
            return self.delta[(state, symbol)]
        except KeyError:
            raise DomainError(f"no transition from {state!r} on {symbol!r}")

    def with_initial(self, state) -> Transducer:
        return Transducer(self.states, state, self.delta)

    def trim(self) -> Transducer:
        reach = {self.initial}
        todo = [self.initial]
        while todo:
            cur = todo.pop()
            for a in SYMBOLS:
                t = self.delta.get((cur, a))
                if t and t[1] not in reach:
                    reach.add(t[1])
                    todo.append(t[1])
        states = tuple(s for s in self.states if s in reach)
        delta = {k: v for k, v in self.delta.items() if k[0] in reach}
        return Transducer(states, self.initial, delta, self.name)

    def renamed(self) -> Transducer:
        """Canonical state names in BFS order from the initial state."""
        order = [self.initial]
        seen = {self.initial}
        i = 0
        while i < len(order):
            for a in SYMBOLS:
                t = self.delta.get((order[i], a))
                if t and t[1] not in seen:
                    seen.add(t[1])
                    order.append(t[1])
            i += 1
        name = {s: f"q{j}" for j, s in enumerate(order)}
        delta = {(name[s], a): (o, name[n]) for (s, a), (o, n) in self.delta.items()
                 if s in name}
        return Transducer(tuple(name[s] for s in order), name[self.initial], delta,
                          self.name)

    def has_silent_cycle(self) -> bool:
        """A reachable cycle emitting nothing makes the machine degenerate."""
        t = self.trim()
        silent = {}
        for (s, a), (out, n) in t.delta.items():
            if out == "":
                silent.setdefault(s, []).append(n)
        color = {}

        def dfs(v):
            color[v] = 1
            for w in silent.get(v, ()):
                if color.get(w) == 1:
                    return True
                if color.get(w) is None and dfs(w):
                    return True
            color[v] = 2
            return False

        return any(color.get(v) is None and dfs(v) for v in silent)


def run(T: Transducer, word: str, state=None) -> tuple[str, object]:
    """Feed a finite word; concatenated output and the end state."""
    cur = T.initial if state is None else state
    out = []
    for a in word:
        o, cur = T.step(cur, a)
        out.append(o)
    return "".join(out), cur


def run_infinite(T: Transducer, w: EPWord) -> EPWord:
    """Eventually periodic output of an eventually periodic input."""
    w = w.canonical()
    out0, state = run(T, w.prefix)
    seen = {}
    outs = []
    while state not in seen:
        seen[state] = len(outs)
        o, state = run(T, w.period, state)
        outs.append(o)
    i = seen[state]
    pre = out0 + "".join(outs[:i])
    per = "".join(outs[i:])
    if not per:
        raise DomainError("degenerate machine: empty output period")
    return epword(pre, per)


def compose(F: Transducer, G: Transducer,
            budget: int = DEFAULT_STATE_BUDGET) -> Transducer:
    """The machine for x -> F(G(x)); G reads the input first."""
    start = (F.initial, G.initial)
    states = {start}
    delta = {}
    todo = [start]
    while todo:
        fq, gq = cur = todo.pop()
        for a in SYMBOLS:
            go, gn = G.step(gq, a)
            fo, fn = run(F, go, fq)
            nxt = (fn, gn)
            delta[(cur, a)] = (fo, nxt)
            if nxt not in states:
                if len(states) >= budget:
                    raise BudgetExceeded("composition state budget exceeded")
                states.add(nxt)
                todo.append(nxt)
    return Transducer(tuple(states), start, delta).renamed()


def _state_lcps(T: Transducer, cap: int = 512):
    """Longest common output prefix from every state; None marks a state
    whose output is independent of the input (constant)."""
    lcp = {s: "" for s in T.states}
    for _ in range(cap):
        changed = False
        for s in T.states:
            branches = []
            for a in SYMBOLS:
                t = T.delta.get((s, a))
                if t is None:
                    continue
                o, n = t
                ext = o + (lcp[n] if lcp[n] is not None else "")
                branches.append((ext, lcp[n] is None))
            if not branches:
                continue
            k = 0
            words = [b[0] for b in branches]
            while all(len(w) > k for w in words) and len({w[k] for w in words}) == 1:
                k += 1
            new = words[0][:k]
            # all branches exhausted inside the common prefix and constant below
            if all(len(w) == k and const for w, const in branches):
                new = None
            if len(new or "") > cap:
                new = None
            if new != lcp[s]:
                lcp[s] = new
                changed = True
        if not changed:
            return lcp
    # still growing: anything longer than cap is treated as constant
    return {s: (v if v is not None and len(v) <= cap else None)
            for s, v in lcp.items()}


def _rebased(T: Transducer, state, debt: str) -> Transducer:
    """Machine computing u -> debt^-1 T_state(u); debt must prefix every
    output from state."""
    start = (state, debt)
    states = {start}
    delta = {}
    todo = [start]
    while todo:
        cur = todo.pop()
        s, d = cur
        for a in SYMBOLS:
            t = T.delta.get((s, a))
            if t is None:
                continue
            o, n = t
            if len(o) >= len(d):
                if not o.startswith(d):
                    raise AnomalyError("output debt mismatch")
                emit, nd = o[len(d):], ""
            else:
                if not d.startswith(o):
                    raise AnomalyError("output debt mismatch")
                emit, nd = "", d[len(o):]
            nxt = (n, nd)
            delta[(cur, a)] = (emit, nxt)
            if nxt not in states:
                states.add(nxt)
                todo.append(nxt)
    return Transducer(tuple(states), start, delta).renamed()


def local_action(T: Transducer, w: str) -> Transducer:
    """The machine for the action on the cylinder of w, with the common
    output prefix factored out.  Undefined for constant restrictions."""
    _, state = run(T, w)
    lcp = _state_lcps(T)[state]
    if lcp is None:
        raise DomainError(f"{w!r}: map is constant on the cylinder, no local action")
    return _rebased(T, state, lcp)


def equivalent(T1: Transducer, T2: Transducer, slack: int = 64) -> bool:
    """Do the two machines compute the same map on infinite words?"""
    l1 = _state_lcps(T1)
    l2 = _state_lcps(T2)
    maxout = max([len(o) for (s, a), (o, n) in list(T1.delta.items()) + list(T2.delta.items())] or [1])
    finite = [len(v) for v in list(l1.values()) + list(l2.values()) if v is not None]
    cap = max(finite or [0]) * 2 + maxout * 2 + slack
    constants = any(v is None for v in l1.values()) or any(v is None for v in l2.values())

    start = (T1.initial, T2.initial, "", "")
    seen = {start}
    todo = [start]
    while todo:
        q1, q2, p1, p2 = todo.pop()
        for a in SYMBOLS:
            t1 = T1.delta.get((q1, a))
            t2 = T2.delta.get((q2, a))
            if t1 is None or t2 is None:
                if (t1 is None) != (t2 is None):
                    return False
                continue
            o1, n1 = t1
            o2, n2 = t2
            s1, s2 = p1 + o1, p2 + o2
            k = 0
            while k < len(s1) and k < len(s2):
                if s1[k] != s2[k]:
                    return False
                k += 1
            r1, r2 = s1[k:], s2[k:]
            if max(len(r1), len(r2)) > cap:
                if constants:
                    raise BudgetExceeded("equivalence undecided: constant branch")
                return False
            cfg = (n1, n2, r1, r2)
            if cfg not in seen:
                seen.add(cfg)
                todo.append(cfg)
    return True


def minimize(T: Transducer) -> Transducer:
    """Merge states with identical induced maps and trim."""
    T = T.trim()
    reps = []
    cls = {}
    for s in T.states:
        for r in reps:
            if equivalent(T.with_initial(s), T.with_initial(r)):
                cls[s] = r
                break
        else:
            reps.append(s)
            cls[s] = s
    delta = {}
    for s in reps:
        for a in SYMBOLS:
            t = T.delta.get((s, a))
            if t is not None:
                delta[(s, a)] = (t[0], cls[t[1]])
    return Transducer(tuple(reps), cls[T.initial], delta, T.name).trim().renamed()


def _viable(T: Transducer, state, s: str, memo) -> bool:
    # can some input continuation from state produce an output starting with s?
    if not s:
        return True
    key = (state, s)
    if key in memo:
        return memo[key]
    memo[key] = False  # in-progress: silent cycles contribute nothing
    ok = False
    for a in SYMBOLS:
        t = T.delta.get((state, a))
        if t is None:
            continue
        o, n = t
        m = min(len(o), len(s))
        if o[:m] != s[:m]:
            continue
        if _viable(T, n, s[len(o):] if len(o) < len(s) else "", memo):
            ok = True
            break
    memo[key] = ok
    return ok


def invert(T: Transducer, budget: int = DEFAULT_STATE_BUDGET,
           wait_cap: int = 64) -> Transducer:
    """Machine for the inverse map of an injective transducer.

    Configurations are (state, s, owing): with owing set, s is committed
    output of T not yet read; otherwise s holds read symbols not yet
    matched.  Transitions are partial off the image of T; lookahead beyond
    the cap raises.
    """
    T = T.trim()
    memo = {}
    start = (T.initial, "", False)
    states = {start}
    delta = {}
    todo = [start]
    while todo:
        cur = todo.pop()
        q0, s0, owing = cur
        for c in SYMBOLS:
            if owing:
                if s0[0] != c:
                    continue  # input not in the image
                s1 = s0[1:]
                emit, nxt = "", (q0, s1, bool(s1))
            else:
                q2, s2, owe, dead = q0, s0 + c, False, False
                out = []
                while True:
                    cands = []
                    for a in SYMBOLS:
                        t = T.delta.get((q2, a))
                        if t is None:
                            continue
                        o, n = t
                        m = min(len(o), len(s2))
                        rest = s2[len(o):] if len(o) < len(s2) else ""
                        if o[:m] == s2[:m] and _viable(T, n, rest, memo):
                            cands.append((a, o, n))
                    if not cands:
                        dead = True
                        break
                    if len(cands) > 1:
                        break
                    a, o, n = cands[0]
                    out.append(a)
                    if len(o) <= len(s2):
                        q2, s2 = n, s2[len(o):]
                        if not s2:
                            break
                    else:
                        q2, s2, owe = n, o[len(s2):], True
                        break
                if dead:
                    continue
                if len(s2) > wait_cap:
                    raise BudgetExceeded("inverse lookahead exceeded")
                emit, nxt = "".join(out), (q2, s2, owe)
            delta[(cur, c)] = (emit, nxt)
            if nxt not in states:
                if len(states) >= budget:
                    raise BudgetExceeded("inverse state budget exceeded")
                states.add(nxt)
                todo.append(nxt)
    return Transducer(tuple(states), start, delta).trim().renamed()


# ---------------------------------------------------------------------------
# Built-in machines

def identity_machine() -> Transducer:
    return Transducer(("id",), "id",
                      {("id", "0"): ("0", "id"), ("id", "1"): ("1", "id")},
                      name="id")


def _core_states():
    return {
        ("beta", "0"): ("0", "beta"), ("beta", "1"): ("1", "gamma"),
        ("gamma", "0"): ("1", "id"), ("gamma", "1"): ("0", "id"),
        ("id", "0"): ("0", "id"), ("id", "1"): ("1", "id"),
    }


def beta_machine() -> Transducer:
    return Transducer(("beta", "gamma", "id"), "beta", _core_states(), name="beta")


def gamma_machine() -> Transducer:
    return Transducer(("gamma", "id"), "gamma",
                      {k: v for k, v in _core_states().items() if k[0] != "beta"},
                      name="gamma")


def x0_machine() -> Transducer:
    delta = {
        ("start", "0"): ("", "seen0"), ("start", "1"): ("11", "id"),
        ("seen0", "0"): ("0", "id"), ("seen0", "1"): ("10", "id"),
        ("id", "0"): ("0", "id"), ("id", "1"): ("1", "id"),
    }
    return Transducer(("start", "seen0", "id"), "start", delta, name="X0")


def registry() -> dict[str, Transducer]:
    return {"id": identity_machine(), "beta": beta_machine(),
            "gamma": gamma_machine(), "X0": x0_machine()}


# ---------------------------------------------------------------------------
# Nucleus

def _cycle_states(T: Transducer):
    # states lying on a cycle of the reachable transition graph, plus
    # everything reachable from such a state
    T = T.trim()
    succ = {s: {T.delta[(s, a)][1] for a in SYMBOLS if (s, a) in T.delta}
            for s in T.states}
    index, low, on, stack = {}, {}, set(), []
    sccs = []
    counter = [0]

    def strong(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for w in succ[v]:
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on.discard(w)
                comp.append(w)
                if w == v:
                    break
            sccs.append(comp)

    for v in T.states:
        if v not in index:
            strong(v)
    cyclic = set()
    for comp in sccs:
        if len(comp) > 1 or comp[0] in succ[comp[0]]:
            cyclic.update(comp)
    reach = set(cyclic)
    todo = list(cyclic)
    while todo:
        v = todo.pop()
        for w in succ[v]:
            if w not in reach:
                reach.add(w)
                todo.append(w)
    return T, reach


def machine_nucleus(T: Transducer) -> list[Transducer]:
    """Local actions of T occurring at infinitely many prefixes: the rebased
    machines at states reachable from a cycle."""
    T, reach = _cycle_states(T)
    lcps = _state_lcps(T)
    out = []
    for s in sorted(reach, key=str):
        if lcps[s] is None:
            raise DomainError("constant branch: nucleus element undefined")
        cand = minimize(_rebased(T, s, lcps[s]))
        if not any(equivalent(cand, m) for m in out):
            out.append(cand)
    return out


def _add_unique(pool: list[Transducer], cand: Transducer) -> bool:
    if any(equivalent(cand, m) for m in pool):
        return False
    pool.append(cand)
    return True


def nucleus(generators, budget: int = 64, rounds: int = 8) -> list[Transducer]:
    """Union of the per-machine nuclei, closed under the nuclei of inverses
    and of pairwise products."""
    pool: list[Transducer] = []
    for g in generators:
        for m in machine_nucleus(g):
            _add_unique(pool, m)
    for _ in range(rounds):
        changed = False
        for x in list(pool):
            for m in machine_nucleus(invert(x)):
                changed |= _add_unique(pool, m)
        for x in list(pool):
            for y in list(pool):
                for m in machine_nucleus(compose(x, y)):
                    changed |= _add_unique(pool, m)
        if len(pool) > budget:
            raise BudgetExceeded("nucleus closure exceeded budget; possibly non-contracting")
        if not changed:
            return pool
    raise BudgetExceeded("nucleus closure did not stabilize; possibly non-contracting")


def check_nucleus_conditions(maps) -> dict:
    """The five defining conditions of a nucleus of injections, each checked
    mechanically on the given set of machines."""
    maps = list(maps)
    ident = identity_machine()

    def in_set(m):
        return any(equivalent(m, x) for x in maps)

    c1 = any(equivalent(x, ident) for x in maps)
    c2 = all(in_set(minimize(_rebased(t, s, l[s])))
             for x in maps
             for t, l in [(x.trim(), _state_lcps(x.trim()))]
             for s in t.states)
    c3 = all(any(any(equivalent(x, m) for m in machine_nucleus(f)) for f in maps)
             for x in maps)
    c4 = all(all(in_set(m) for m in machine_nucleus(invert(x))) for x in maps)
    c5 = all(all(in_set(m) for m in machine_nucleus(compose(x, y)))
             for x in maps for y in maps)
    return {"identity": c1, "local-actions": c2, "occurs-in-nucleus": c3,
            "inverse-closure": c4, "product-closure": c5,
            "all": c1 and c2 and c3 and c4 and c5}


# ---------------------------------------------------------------------------
# Exact piecewise-linear maps

def _q(x) -> QTau:
    return QTau.of(x)


@dataclass(frozen=True)
class Piece:
    lo: QTau
    hi: QTau
    k: int      # slope tau^k
    c: QTau     # offset

    def apply(self, t: QTau) -> QTau:
        return tau_pow_q(self.k) * t + self.c

    def image(self) -> tuple[QTau, QTau]:
        return (self.apply(self.lo), self.apply(self.hi))


class PLMap:
    """Piecewise map t -> tau^k t + c on a partition of [0,1]; pieces are
    increasing, images may be permuted (bijections of the blown-up interval)."""

    def __init__(self, pieces):
        merged = []
        for p in sorted(pieces, key=lambda p: (p.lo, p.hi)):
            if merged and (merged[-1].k, merged[-1].c) == (p.k, p.c) \
                    and merged[-1].hi == p.lo:
                merged[-1] = Piece(merged[-1].lo, p.hi, p.k, p.c)
            else:
                merged.append(p)
        self.pieces = tuple(merged)
        if not self.pieces:
            raise DomainError("PLMap needs at least one piece")
        if self.pieces[0].lo != _q(0) or self.pieces[-1].hi != _q(1):
            raise DomainError("PLMap domain must be [0,1]")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.hi != b.lo:
                raise DomainError("PLMap pieces must partition [0,1]")
        for p in self.pieces:
            if not p.lo < p.hi:
                raise DomainError("PLMap pieces must be nondegenerate")

    def key(self):
        return tuple((p.lo, p.hi, p.k, p.c) for p in self.pieces)

    def __eq__(self, other):
        return isinstance(other, PLMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def eval(self, t, side: str = "") -> QTau:
        """Value at t; at an interior breakpoint the side '+' (right piece)
        or '-' (left piece) must be given unless both pieces agree."""
        t = _q(t)
        hits = [p for p in self.pieces if p.lo <= t <= p.hi]
        if not hits:
            raise DomainError(f"{t} outside [0,1]")
        if len(hits) == 1:
            return hits[0].apply(t)
        left = min(hits, key=lambda p: p.lo)
        right = max(hits, key=lambda p: p.lo)
        if side == "-":
            return left.apply(t)
        if side == "+":
            return right.apply(t)
        a, b = left.apply(t), right.apply(t)
        if a == b:
            return a
        raise DomainError(f"value at breakpoint {t} needs a side")

    def image_hull(self) -> tuple[QTau, QTau]:
        los, his = zip(*(p.image() for p in self.pieces))
        return (min(los), max(his))

    def is_bijection(self) -> bool:
        images = sorted(p.image() for p in self.pieces)
        if images[0][0] != _q(0) or images[-1][1] != _q(1):
            return False
        return all(a[1] == b[0] for a, b in zip(images, images[1:]))

    def breakpoints(self) -> list[QTau]:
        return [p.lo for p in self.pieces] + [self.pieces[-1].hi]

    def precompose_affine(self, k0: int, c0: QTau) -> PLMap:
        """self(tau^k0 t + c0) restricted to the t in [0,1] that land in the
        domain; the affine image of [0,1] must cover a union of pieces."""
        inv_k = -k0
        out = []
        a0, a1 = c0, tau_pow_q(k0) + c0  # image of [0,1]
        for p in self.pieces:
            lo = max(p.lo, a0)
            hi = min(p.hi, a1)
            if not lo < hi:
                continue
            t_lo = tau_pow_q(inv_k) * (lo - c0)
            t_hi = tau_pow_q(inv_k) * (hi - c0)
            out.append(Piece(t_lo, t_hi, p.k + k0,
                             tau_pow_q(p.k) * c0 + p.c))
        return PLMap(out)

    def postcompose_affine(self, k0: int, c0: QTau) -> PLMap:
        """t -> tau^k0 * self(t) + c0."""
        return PLMap([Piece(p.lo, p.hi, p.k + k0,
                            tau_pow_q(k0) * p.c + c0) for p in self.pieces])


def identity_pl() -> PLMap:
    return PLMap([Piece(_q(0), _q(1), 0, _q(0))])


def x0_pl() -> PLMap:
    """The three-piece map with slopes 1/tau^2, 1, tau fixing 0 and 1."""
    t2, t3, t4 = TAU2.to_qtau(), ZTau(-1, 2).to_qtau(), ZTau(2, -3).to_qtau()
    return PLMap([
        Piece(_q(0), t4, -2, _q(0)),
        Piece(t4, t2, 0, t3),
        Piece(t2, _q(1), 1, t2),
    ])


def pl_compose(f: PLMap, g: PLMap) -> PLMap:
    """Exact composition t -> f(g(t))."""
    cuts = {p.lo for p in g.pieces} | {g.pieces[-1].hi}
    for p in g.pieces:
        ilo, ihi = p.image()
        for b in f.breakpoints():
            if ilo < b < ihi:
                cuts.add(tau_pow_q(-p.k) * (b - p.c))
    cuts = sorted(cuts)
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / _q(2)
        gp = next(p for p in g.pieces if p.lo <= mid <= p.hi)
        v = gp.apply(mid)
        fp = next(p for p in f.pieces if p.lo <= v <= p.hi)
        out.append(Piece(lo, hi, fp.k + gp.k,
                         tau_pow_q(fp.k) * gp.c + fp.c))
    return PLMap(out)


def pl_invert(g: PLMap) -> PLMap:
    if not g.is_bijection():
        raise DomainError("pl_invert needs a bijection of [0,1]")
    out = []
    for p in g.pieces:
        ilo, ihi = p.image()
        out.append(Piece(ilo, ihi, -p.k, -(tau_pow_q(-p.k) * p.c)))
    return PLMap(out)


def pl_equal(f: PLMap, g: PLMap) -> bool:
    return f == g


# ---------------------------------------------------------------------------
# Caret tree pairs

@dataclass(frozen=True)
class TreePair:
    """Domain and range caret trees with a leaf permutation: domain leaf i
    maps affinely onto range leaf perm[i]."""

    domain: object  # "." or (label, left, right)
    range_: object
    perm: tuple[int, ...]


def tree_leaves(tree, lo: QTau, hi: QTau) -> list[tuple[QTau, QTau]]:
    """x-carets split [x,y] at x + tau^2 (y-x); y-carets at x + tau (y-x)."""
    if tree == ".":
        return [(lo, hi)]
    label, left, right = tree
    w = hi - lo
    mid = lo + (TAU2.to_qtau() if label == "x" else TAU.to_qtau()) * w
    return tree_leaves(left, lo, mid) + tree_leaves(right, mid, hi)


def _slope_exponent(ratio: QTau, span: int = 64) -> int:
    for k in range(-span, span + 1):
        if tau_pow_q(k) == ratio:
            return k
    raise DomainError("leaf width ratio is not a power of tau")


def pl_from_treepair(tp: TreePair) -> PLMap:
    zero, one = _q(0), _q(1)
    dom = tree_leaves(tp.domain, zero, one)
    rng = tree_leaves(tp.range_, zero, one)
    if len(dom) != len(rng) or sorted(tp.perm) != list(range(len(dom))):
        raise DomainError("malformed tree pair")
    out = []
    for i, (dlo, dhi) in enumerate(dom):
        rlo, rhi = rng[tp.perm[i]]
        k = _slope_exponent((rhi - rlo) / (dhi - dlo))
        out.append(Piece(dlo, dhi, k, rlo - tau_pow_q(k) * dlo))
    return PLMap(out)


def parse_tree(text: str):
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = [0]

    def rec():
        tok = tokens[pos[0]]
        pos[0] += 1
        if tok == ".":
            return "."
        if tok != "(":
            raise DomainError(f"bad tree token {tok!r}")
        label = tokens[pos[0]]
        pos[0] += 1
        if label not in ("x", "y"):
            raise DomainError(f"bad caret label {label!r}")
        left = rec()
        right = rec()
        if tokens[pos[0]] != ")":
            raise DomainError("unbalanced tree expression")
        pos[0] += 1
        return (label, left, right)

    tree = rec()
    if pos[0] != len(tokens):
        raise DomainError("trailing tokens in tree expression")
    return tree


def parse_treepair(text: str) -> TreePair:
    """Three-line format: 'domain <sexp>', 'range <sexp>', 'perm i j k ...'."""
    fields = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        fields[key] = rest.strip()
    try:
        return TreePair(parse_tree(fields["domain"]), parse_tree(fields["range"]),
                        tuple(int(t) for t in fields["perm"].split()))
    except KeyError as missing:
        raise DomainError(f"tree-pair file missing field {missing}")


def format_treepair(tp: TreePair) -> str:
    def fmt(tree):
        if tree == ".":
            return "."
        return f"({tree[0]} {fmt(tree[1])} {fmt(tree[2])})"

    return (f"domain {fmt(tp.domain)}\nrange {fmt(tp.range_)}\n"
            f"perm {' '.join(map(str, tp.perm))}\n")


X0_TREEPAIR = TreePair(("x", ("x", ".", "."), "."),
                       ("y", ("y", ".", "."), "."),
                       (0, 1, 2))


# ---------------------------------------------------------------------------
# Synthesis: from a PL map to a commuting transducer

_TAU2_Q = TAU2.to_qtau()


def _emit_reduce(rho: PLMap):
    """Greedily peel output symbols while the image hull sits in one half."""
    out = []
    while True:
        lo, hi = rho.image_hull()
        if hi <= _TAU2_Q:
            out.append("0")
            rho = rho.postcompose_affine(-2, _q(0))          # undo prepend-0
        elif lo >= _TAU2_Q:
            out.append("1")
            rho = rho.postcompose_affine(-1, -(TAU.to_qtau()))  # undo prepend-1
        else:
            return "".join(out), rho


def synthesize(g: PLMap, budget: int = DEFAULT_STATE_BUDGET) -> Transducer:
    """A transducer G with q(G(w)) = g(q(w)): states are the exact residual
    maps between the unread input cylinder and the unemitted output."""
    pre0, rho0 = _emit_reduce(g)
    states = {rho0.key(): rho0}
    order = [rho0.key()]
    delta = {}
    todo = [rho0]
    while todo:
        rho = todo.pop()
        for a in SYMBOLS:
            if a == "0":
                nxt = rho.precompose_affine(2, _q(0))    # input cylinder 0*
            else:
                nxt = rho.precompose_affine(1, TAU2.to_qtau())  # cylinder 1*
            out, nxt = _emit_reduce(nxt)
            key = nxt.key()
            if key not in states:
                if len(states) >= budget:
                    raise BudgetExceeded("synthesis state budget exceeded")
                states[key] = nxt
                order.append(key)
                todo.append(nxt)
            delta[(rho.key(), a)] = (out, key)
    if pre0:
        init = "__init__"
        names = tuple(order) + (init,)
        for a in SYMBOLS:
            out, nxt = delta[(rho0.key(), a)]
            delta[(init, a)] = (pre0 + out, nxt)
        return Transducer(names, init, delta).renamed()
    return Transducer(tuple(order), rho0.key(), delta).renamed()


def verify_commutation(T: Transducer, g: PLMap, words) -> bool:
    """q(T(w)) == g(q(w)) exactly in Q(tau) for every test word."""
    for w in words:
        w = w.canonical()
        lhs = q(run_infinite(T, w))
        t = q(w)
        side = word_side(w)
        if t == _q(0):
            side = "+"
        elif t == _q(1):
            side = "-"
        rhs = g.eval(t, side)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Serialization

def machine_to_json(T: Transducer) -> dict:
    return {
        "schema": "1",
        "states": list(T.states),
        "initial": T.initial,
        "delta": [{"state": s, "in": a, "out": o, "next": n}
                  for (s, a), (o, n) in sorted(T.delta.items(), key=lambda kv: (str(kv[0][0]), kv[0][1]))],
    }


def machine_from_json(data: dict) -> Transducer:
    delta = {(d["state"], d["in"]): (d["out"], d["next"]) for d in data["delta"]}
    return Transducer(tuple(data["states"]), data["initial"], delta)


def dot_machine(T: Transducer) -> str:
    lines = ["digraph machine {", f'  __start [shape=point]; __start -> "{T.initial}";']
    for s in T.states:
        lines.append(f'  "{s}";')
    for (s, a), (o, n) in sorted(T.delta.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
        lines.append(f'  "{s}" -> "{n}" [label="{a}/{o if o else "e"}"];')
    lines.append("}")
    return "\n".join(lines)
