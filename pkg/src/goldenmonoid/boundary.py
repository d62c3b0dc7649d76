"""Atoms of the Cayley graph, the tree of atoms and its type graph, the
recursive path-to-interval map, and the Cantor-like order space in which
every point of Z[tau] in (0,1) is tripled into x^-, x, x^+.

An atom at level n is a class of vertices sharing the orientation of every
edge of the ball B_n under their principal vector fields.  Atom types are
decided by a concrete canonicalization (translated member shape plus a
bounded unfolding of the atom tree); it reproduces the eight expected types
and is validated against the named symbolic decompositions in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ztau import ZTau, QTau, ZERO, ONE, TAU, TAU2, DomainError
from .monoid import interval, cone_contains, left_divide, meet_cone, normalize
from .cayley import AnomalyError, build_ball, distance

# ---------------------------------------------------------------------------
# The recursion table: node types and their labeled interval actions

NODE_LABELS = {
    "T": (0, 1, 2),
    "L1": (0, 1, 2),
    "M1": (0,),
    "R1": (0, 1, 2),
    "M2": (0, 1, 2),
    "M3": (0, 1, 2),
    "PL": (0,),
    "PR": (0,),
}

# (node, label) -> successor node; PL/PR rows are the empirically determined
# out-degree-1 continuations below an isolated point.
NODE_EDGES = {
    ("T", 0): "L1", ("T", 1): "M1", ("T", 2): "R1",
    ("L1", 0): "L1", ("L1", 1): "M1", ("L1", 2): "PL",
    ("M1", 0): "M2",
    ("R1", 0): "PR", ("R1", 1): "M1", ("R1", 2): "R1",
    ("M2", 0): "M1", ("M2", 1): "M3", ("M2", 2): "M1",
    ("M3", 0): "PR", ("M3", 1): "M1", ("M3", 2): "PL",
    ("PL", 0): "PR",
    ("PR", 0): "PL",
}

CLOSED, PLUS, MINUS = "closed", "plus", "minus"


@dataclass(frozen=True)
class TaggedInterval:
    """Interval with blowup tags: lo carries closed/plus, hi closed/minus.
    A singleton has lo == hi, both closed."""

    lo: ZTau
    hi: ZTau
    lo_tag: str
    hi_tag: str
    node: str

    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def width(self) -> ZTau:
        return self.hi - self.lo

    def __str__(self) -> str:
        if self.is_singleton():
            return f"{{{self.lo}}}:{self.node}"
        lo = f"{self.lo}+" if self.lo_tag == PLUS else f"{self.lo}"
        hi = f"{self.hi}-" if self.hi_tag == MINUS else f"{self.hi}"
        return f"[{lo}, {hi}]:{self.node}"


ROOT_INTERVAL = TaggedInterval(ZERO, ONE, CLOSED, CLOSED, "T")

# linear action of each (node, label) on (lo, hi): rows of a 2x2 Z[tau] matrix
_C0, _C1, _T, _T2 = ZERO, ONE, TAU, TAU2
_ROWS = {
    ("T", 0): (((_C1, _C0), CLOSED), ((_T, _T2), CLOSED)),
    ("T", 1): (((_T, _T2), PLUS), ((_T2, _T), MINUS)),
    ("T", 2): (((_T2, _T), CLOSED), ((_C0, _C1), CLOSED)),
    ("L1", 0): (((_C0, _C0), CLOSED), ((_C0, _T), CLOSED)),
    ("L1", 1): (((_C0, _T), PLUS), ((_C0, _C1), MINUS)),
    ("L1", 2): (((_C0, _C1), CLOSED), ((_C0, _C1), CLOSED)),
    ("M1", 0): (((_C1, _C0), PLUS), ((_C0, _C1), MINUS)),
    ("R1", 0): (((_C1, _C0), CLOSED), ((_C1, _C0), CLOSED)),
    ("R1", 1): (((_C1, _C0), PLUS), ((_T, _T2), MINUS)),
    ("R1", 2): (((_T, _T2), CLOSED), ((_C0, _C1), CLOSED)),
    ("M2", 0): (((_C1, _C0), PLUS), ((_T, _T2), MINUS)),
    ("M2", 1): (((_T, _T2), CLOSED), ((_T2, _T), CLOSED)),
    ("M2", 2): (((_T2, _T), PLUS), ((_C0, _C1), MINUS)),
    ("M3", 0): (((_C1, _C0), CLOSED), ((_C1, _C0), CLOSED)),
    ("M3", 1): (((_C1, _C0), PLUS), ((_C0, _C1), MINUS)),
    ("M3", 2): (((_C0, _C1), CLOSED), ((_C0, _C1), CLOSED)),
    ("PL", 0): (((_C1, _C0), CLOSED), ((_C0, _C1), CLOSED)),
    ("PR", 0): (((_C1, _C0), CLOSED), ((_C0, _C1), CLOSED)),
}


def child_interval(iv: TaggedInterval, label: int) -> TaggedInterval:
    if label not in NODE_LABELS[iv.node]:
        raise DomainError(f"label {label} invalid at node {iv.node}")
    (row_lo, lo_tag), (row_hi, hi_tag) = _ROWS[(iv.node, label)]
    lo = row_lo[0] * iv.lo + row_lo[1] * iv.hi
    hi = row_hi[0] * iv.lo + row_hi[1] * iv.hi
    return TaggedInterval(lo, hi, lo_tag, hi_tag, NODE_EDGES[(iv.node, label)])


def f_eval(labels) -> TaggedInterval:
    """Fold a finite label path from the root through the recursion table."""
    iv = ROOT_INTERVAL
    for ch in labels:
        iv = child_interval(iv, int(ch))
    return iv


# ---------------------------------------------------------------------------
# Eventually periodic label paths and the limit point map


@dataclass(frozen=True)
class LabelPath:
    """prefix . period^omega over labels {0,1,2}."""

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period or set(self.prefix + self.period) - set("012"):
            raise DomainError("LabelPath needs nonempty period over 0/1/2")

    def symbol(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def head(self, n: int) -> str:
        return "".join(self.symbol(i) for i in range(n))

    def canonical(self) -> LabelPath:
        per = self.period
        for d in range(1, len(per)):
            if len(per) % d == 0 and per == per[:d] * (len(per) // d):
                per = per[:d]
                break
        pre = self.prefix
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        return LabelPath(pre, per)

    def __str__(self) -> str:
        return f"{self.prefix}({self.period})"

    @staticmethod
    def parse(text: str) -> LabelPath:
        s = text.strip()
        if "(" in s:
            pre, _, rest = s.partition("(")
            if not rest.endswith(")"):
                raise DomainError(f"bad LabelPath literal {text!r}")
            return LabelPath(pre, rest[:-1]).canonical()
        return LabelPath(s, "0").canonical()


@dataclass(frozen=True)
class DTauPoint:
    """Point of the tripled-point order space.

    kind 'plain' marks the isolated copies of points of Z[tau] in (0,1);
    'minus'/'plus' their blowup companions; 'limit' everything else.  All
    points produced here carry an exact Q(tau) value.
    """

    kind: str
    value: QTau
    path: LabelPath | None = None

    _RANK = {"minus": 0, "plain": 1, "limit": 1, "plus": 2}

    def key(self):
        return (self.value, self._RANK[self.kind])

    def __str__(self) -> str:
        sup = {"minus": "-", "plus": "+", "plain": "", "limit": ""}[self.kind]
        return f"{self.value}{sup}"


def _endpoint_lo_point(iv: TaggedInterval) -> DTauPoint:
    kind = "plus" if iv.lo_tag == PLUS else ("plain" if _in_itau(iv.lo.to_qtau()) else "limit")
    return DTauPoint(kind, iv.lo.to_qtau())


def _endpoint_hi_point(iv: TaggedInterval) -> DTauPoint:
    kind = "minus" if iv.hi_tag == MINUS else ("plain" if _in_itau(iv.hi.to_qtau()) else "limit")
    return DTauPoint(kind, iv.hi.to_qtau())


def _in_itau(v: QTau) -> bool:
    return v.is_ztau() and ZERO.to_qtau() < v < ONE.to_qtau()


def dtau_cmp(p: DTauPoint, q: DTauPoint) -> int:
    """Total order: value-major, then x^- < x < x^+ among equal values."""
    a, b = p.key(), q.key()
    if a[0] != b[0]:
        return -1 if a[0] < b[0] else 1
    if a[1] == b[1]:
        if p.kind != q.kind:
            raise AnomalyError(f"incomparable equal-valued points {p} and {q}")
        return 0
    return -1 if a[1] < b[1] else 1


def interval_contains_point(iv: TaggedInterval, p: DTauPoint) -> bool:
    return (dtau_cmp(_endpoint_lo_point(iv), p) <= 0
            and dtau_cmp(p, _endpoint_hi_point(iv)) <= 0)


def _mat_mul(a, b):
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def _apply(mat, lo, hi):
    return (mat[0][0] * lo + mat[0][1] * hi, mat[1][0] * lo + mat[1][1] * hi)


def f_point(path: LabelPath) -> DTauPoint:
    """The single point of the order space under a full infinite label path."""
    path = path.canonical()
    iv = ROOT_INTERVAL
    # simulate the prefix; a singleton rule absorbs the rest of the path
    for i, ch in enumerate(path.prefix):
        iv = child_interval(iv, int(ch))
        if iv.is_singleton():
            rest = path.prefix[i + 1:] + path.period
            if set(rest) - {"0"}:
                raise DomainError("only label 0 continues below an isolated point")
            return DTauPoint("plain", iv.lo.to_qtau(), path)
    # walk full periods until the node type recurs at the same phase
    seen = {}
    transcript = []  # (interval before step, label)
    step = 0
    while True:
        phase = (iv.node, step % len(path.period))
        if phase in seen:
            start = seen[phase]
            cycle = transcript[start:]
            entry = cycle[0][0]
            break
        seen[phase] = step
        label = int(path.period[step % len(path.period)])
        transcript.append((iv, label))
        iv = child_interval(iv, label)
        if iv.is_singleton():
            if set(path.period) - {"0"}:
                raise DomainError("only label 0 continues below an isolated point")
            return DTauPoint("plain", iv.lo.to_qtau(), path)
        step += 1

    mat = ((ONE, ZERO), (ZERO, ONE))
    node = entry.node
    for before, label in cycle:
        (row_lo, _), (row_hi, _) = _ROWS[(before.node, label)]
        mat = _mat_mul((row_lo, row_hi), mat)
        node = NODE_EDGES[(before.node, label)]
    if node != entry.node:
        raise AnomalyError("type cycle did not close")

    lo0, hi0 = entry.lo, entry.hi
    c1 = mat[0][0] + mat[0][1] - ONE
    c2 = mat[1][0] + mat[1][1] - ONE
    if c1 == ZERO and c2 == ZERO:
        mu = mat[0][0] + mat[1][1] - ONE
        denom = (ONE - mu).to_qtau()
        if denom.sign() == 0:
            raise AnomalyError("nested intervals failed to contract")
        v = ((mat[0][0] - mu) * lo0 + mat[0][1] * hi0).to_qtau() / denom
    else:
        v = ZERO.to_qtau()
    if not (lo0.to_qtau() <= v <= hi0.to_qtau()):
        raise AnomalyError(f"limit {v} escaped the entry interval")

    # settle a few cycles; a pinned endpoint stays equal to the limit value
    lo_s, hi_s = lo0, hi0
    for _ in range(8):
        lo_s, hi_s = _apply(mat, lo_s, hi_s)
    if _in_itau(v):
        if lo_s.to_qtau() == v:
            if entry.lo_tag != PLUS:
                raise AnomalyError("left-pinned limit without a plus tag")
            return DTauPoint("plus", v, path)
        if hi_s.to_qtau() == v:
            if entry.hi_tag != MINUS:
                raise AnomalyError("right-pinned limit without a minus tag")
            return DTauPoint("minus", v, path)
        raise AnomalyError(f"untagged limit landed on the tripled set: {v}")
    return DTauPoint("limit", v, path)


def refine_cmp(p_path: LabelPath, q_path: LabelPath, depth_cap: int = 64) -> int:
    """Compare two limit paths by refining their intervals to disjointness."""
    for depth in range(1, depth_cap + 1):
        a = f_eval(p_path.head(depth))
        b = f_eval(q_path.head(depth))
        if dtau_cmp(_endpoint_hi_point(a), _endpoint_lo_point(b)) < 0:
            return -1
        if dtau_cmp(_endpoint_hi_point(b), _endpoint_lo_point(a)) < 0:
            return 1
    if p_path.canonical() == q_path.canonical():
        return 0
    raise AnomalyError("refinement did not separate distinct points")


def path_from_point(p: DTauPoint, depth: int) -> str:
    """Leading labels of the unique path mapping to p (inverts f_point)."""
    iv = ROOT_INTERVAL
    out = []
    while len(out) < depth:
        if iv.is_singleton():
            if p.kind != "plain" or p.value != iv.lo.to_qtau():
                raise AnomalyError("descent reached a wrong isolated point")
            out.append("0")
            iv = child_interval(iv, 0)
            continue
        for label in NODE_LABELS[iv.node]:
            child = child_interval(iv, label)
            if interval_contains_point(child, p):
                out.append(str(label))
                iv = child
                break
        else:
            raise AnomalyError(f"point {p} not contained in any child of {iv}")
    return "".join(out)


# ---------------------------------------------------------------------------
# Atoms


@dataclass(frozen=True)
class Atom:
    level: int
    signature: tuple[int, ...]
    members: tuple[str, ...]
    infinite: bool

    def member_set(self) -> frozenset[str]:
        return frozenset(self.members)

    def deepest_members(self) -> tuple[str, ...]:
        top = max(len(m) for m in self.members)
        return tuple(m for m in self.members if len(m) == top)

    def position_key(self):
        return min((interval(m).lo, interval(m).hi) for m in self.deepest_members())


DEFAULT_MARGIN = 6


def _edge_sign(x: str, parent: str, child: str) -> int:
    dp, dc = distance(x, parent), distance(x, child)
    if dp == dc:
        raise AnomalyError(f"orientation tie on {(parent, child)} for {x!r}")
    return 1 if dc < dp else -1


def atoms_at_level(n: int, truncation: int, margin: int = DEFAULT_MARGIN) -> list[Atom]:
    """Partition of the vertices of B_truncation by their principal-field
    restriction to B_n.  An atom is flagged infinite when it touches the
    last two levels of the truncation ball."""
    if truncation < n + margin:
        raise DomainError(f"truncation {truncation} too small for level {n} (margin {margin})")
    big = build_ball(truncation)
    edges = build_ball(n).edges
    groups: dict[tuple[int, ...], list[str]] = {}
    for x in big.vertices:
        sig = tuple(_edge_sign(x, p, c) for p, c in edges)
        groups.setdefault(sig, []).append(x)
    out = []
    for sig, members in groups.items():
        members.sort(key=lambda m: (len(m), m))
        infinite = any(len(m) >= truncation - 1 for m in members)
        out.append(Atom(n, sig, tuple(members), infinite))
    out.sort(key=lambda a: a.position_key())
    return out


@dataclass(frozen=True)
class SymbolicAtom:
    """Cone with finitely many cones removed; decidable membership."""

    include: str
    exclude: tuple[str, ...] = ()

    def contains(self, x: str) -> bool:
        return (cone_contains(self.include, x)
                and not any(cone_contains(e, x) for e in self.exclude))

    def members(self, vertices) -> frozenset[str]:
        return frozenset(v for v in vertices if self.contains(v))

    def mirror(self) -> SymbolicAtom:
        swap = str.maketrans("LR", "RL")
        return SymbolicAtom(normalize(self.include.translate(swap)),
                            tuple(normalize(e.translate(swap)) for e in self.exclude))


SYMBOLIC_ATOMS = {
    "a1": SymbolicAtom("L", ("LRR",)),
    "b1": SymbolicAtom("LRR"),
    "c1": SymbolicAtom("R", ("LRR",)),
    "a2": SymbolicAtom("LL", ("LLRR",)),
    "b2": SymbolicAtom("LLRR"),
    "c2": SymbolicAtom("LR", ("LLRR", "LRR")),
    "d2": SymbolicAtom("LRR"),
    "f3": SymbolicAtom("LRRLL"),
    "g3": SymbolicAtom("LRR", ("LRRLL", "LRRRR")),
    "h3": SymbolicAtom("LRRRR"),
    "j4": SymbolicAtom("LRRL", ("LRRLL", "LRRLRR")),
    "k4": SymbolicAtom("LRRLRR"),
    "l4": SymbolicAtom("LRRR", ("LRRRR", "LRRLRR")),
}

SYMBOLIC_LEVEL = {"a1": 1, "b1": 1, "c1": 1,
                  "a2": 2, "b2": 2, "c2": 2, "d2": 2,
                  "f3": 3, "g3": 3, "h3": 3,
                  "j4": 4, "k4": 4, "l4": 4}


@dataclass(frozen=True)
class AtomTree:
    depth: int
    truncation: int
    levels: tuple[tuple[Atom, ...], ...]  # infinite atoms per level, in order
    child_map: dict

    def children(self, atom: Atom) -> tuple[Atom, ...]:
        return self.child_map.get((atom.level, atom.signature), ())

    def atom_of(self, level: int, member: str) -> Atom:
        for a in self.levels[level]:
            if member in a.member_set():
                return a
        raise DomainError(f"{member!r} not in an infinite atom at level {level}")


@lru_cache(maxsize=None)
def atom_tree(depth: int, truncation: int, margin: int = DEFAULT_MARGIN) -> AtomTree:
    """Infinite atoms of levels 0..depth with containment edges."""
    if truncation < depth + margin:
        raise DomainError(f"truncation {truncation} too small for depth {depth}")
    per_level = []
    for n in range(depth + 1):
        per_level.append(tuple(a for a in atoms_at_level(n, truncation, margin) if a.infinite))
    child_map: dict = {}
    for n in range(depth):
        owner = {}
        for a in per_level[n]:
            for m in a.members:
                owner[m] = a
        kids: dict = {}
        for c in per_level[n + 1]:
            parent = owner.get(c.members[0])
            if parent is None:
                raise AnomalyError("infinite atom without an infinite parent")
            kids.setdefault((parent.level, parent.signature), []).append(c)
        for key, lst in kids.items():
            lst.sort(key=lambda a: a.position_key())
            child_map[key] = tuple(lst)
    return AtomTree(depth, truncation, tuple(per_level), child_map)


def atom_root_cone(atom: Atom) -> str:
    m = atom.members[0]
    for x in atom.members[1:]:
        m = meet_cone(m, x)
        if not m:
            break
    return m


def atom_shape(atom: Atom, window: int = 4) -> frozenset[str]:
    """Member set translated to the root of its minimal containing cone,
    truncated to a bounded window."""
    root = atom_root_cone(atom)
    cut = len(root) + window
    return frozenset(left_divide(root, x) for x in atom.members if len(x) <= cut)


def atom_type(atom: Atom, tree: AtomTree, window: int = 4, unfold: int = 2):
    """Canonical type signature: translated shape plus a bounded unfolding
    of the atom tree below the atom (children ordered left to right)."""
    if atom.level + unfold > tree.depth:
        raise DomainError("atom too deep for the requested unfolding window")

    def sig(a: Atom, k: int):
        shape = atom_shape(a, window)
        if k == 0:
            return (shape,)
        return (shape, tuple(sig(c, k - 1) for c in tree.children(a)))

    return sig(atom, unfold)


@dataclass(frozen=True)
class TypeGraph:
    nodes: tuple[str, ...]
    edges: dict  # (name, label) -> name

    def out_edges(self, node: str) -> dict[int, str]:
        return {lab: tgt for (n, lab), tgt in self.edges.items() if n == node}

    def dot(self) -> str:
        lines = ["digraph types {"]
        for n in self.nodes:
            lines.append(f'  "{n}";')
        for (src, lab), tgt in sorted(self.edges.items()):
            lines.append(f'  "{src}" -> "{tgt}" [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines)


_TYPE_ANCHORS = (
    ("L1", 1, "a1"), ("M1", 1, "b1"), ("R1", 1, "c1"),
    ("M2", 2, "d2"), ("PL", 2, "c2"), ("M3", 3, "g3"),
)


def type_graph(depth: int, truncation: int, margin: int = DEFAULT_MARGIN,
               window: int = 4, unfold: int = 2) -> TypeGraph:
    """Quotient of the atom tree by type, with 0/1/2 edge labels assigned
    left to right.  Node names are pinned by the anchor atoms of the named
    decompositions; the root atom is named T."""
    if depth < unfold + 4:
        raise DomainError(f"type graph needs depth >= {unfold + 4} "
                          "to resolve all eight types")
    tree = atom_tree(depth, truncation, margin)
    typable = [a for lev in tree.levels[:depth - unfold + 1] for a in lev]
    sig_of = {(a.level, a.signature): atom_type(a, tree, window, unfold) for a in typable}

    names: dict = {}
    root = tree.levels[0][0]
    names[sig_of[(0, root.signature)]] = "T"
    big_vertices = build_ball(truncation).vertices
    for name, level, sym in _TYPE_ANCHORS:
        target = SYMBOLIC_ATOMS[sym].members(big_vertices)
        for a in tree.levels[level]:
            if a.member_set() == target:
                names[sig_of[(a.level, a.signature)]] = name
                break
        else:
            raise AnomalyError(f"anchor atom {sym} not found at level {level}")
    mirror_c2 = SYMBOLIC_ATOMS["c2"].mirror().members(big_vertices)
    for a in tree.levels[2]:
        if a.member_set() == mirror_c2:
            names[sig_of[(a.level, a.signature)]] = "PR"
            break
    else:
        raise AnomalyError("mirror isolated-point anchor not found")

    fresh = 0
    for a in typable:
        s = sig_of[(a.level, a.signature)]
        if s not in names:
            names[s] = f"X{fresh}"
            fresh += 1

    edges: dict = {}
    for a in typable:
        if a.level + unfold + 1 > tree.depth:
            continue
        kids = tree.children(a)
        src = names[sig_of[(a.level, a.signature)]]
        for lab, c in enumerate(kids):
            tgt = names[sig_of[(c.level, c.signature)]]
            prev = edges.get((src, lab))
            if prev is not None and prev != tgt:
                raise AnomalyError(f"inconsistent type edge {(src, lab)}: {prev} vs {tgt}")
            edges[(src, lab)] = tgt
    nodes = tuple(sorted(set(names.values())))
    return TypeGraph(nodes, edges)


def atom_report(n: int, truncation: int, margin: int = DEFAULT_MARGIN) -> dict:
    atoms = atoms_at_level(n, truncation, margin)
    big_vertices = build_ball(truncation).vertices
    symbolic = {name: SYMBOLIC_ATOMS[name].members(big_vertices)
                for name, lev in SYMBOLIC_LEVEL.items() if lev == n}
    items = []
    for a in atoms:
        match = next((name for name, mem in symbolic.items()
                      if mem == a.member_set()), None)
        items.append({
            "level": a.level,
            "signature-hash": f"{hash(a.signature) & 0xffffffff:08x}",
            "member-count": len(a.members),
            "infinite": a.infinite,
            "symbolic-match": match,
        })
    return {"schema": "1", "level": n, "truncation": truncation,
            "infinite": sum(1 for a in atoms if a.infinite),
            "finite": sum(1 for a in atoms if not a.infinite),
            "atoms": items}


def dot_atom_tree(tree: AtomTree) -> str:
    lines = ["digraph atoms {"]
    label = {}
    for lev in tree.levels:
        for i, a in enumerate(lev):
            label[(a.level, a.signature)] = f"{a.level}.{i}"
            lines.append(f'  "{a.level}.{i}" [label="n={a.level} |A|={len(a.members)}"];')
    for lev in tree.levels[:-1]:
        for a in lev:
            for c in tree.children(a):
                lines.append(f'  "{label[(a.level, a.signature)]}" -> "{label[(c.level, c.signature)]}";')
    lines.append("}")
    return "\n".join(lines)
