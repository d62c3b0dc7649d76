"""The augmented graph with horizontal edges, U/D edge classification and
level substitution patterns, expansiveness and departing checks,
quasi-isometry bounds, and empirical thin-triangle estimation.

Horizontal edges join {mL, mR} (shared parent, type U) and {mLR, mRL}
(shared child, type D).  Within a ball of radius r every horizontal edge at
levels <= r is present, so per-level horizontal distances are exact.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .ztau import DomainError
from .monoid import congruence_class, midpoint_key, normalize
from .cayley import AnomalyError, Ball, build_ball

INF = float("inf")


@dataclass(frozen=True)
class AugmentedBall:
    base: Ball
    horizontal_edges: tuple[tuple[str, str], ...]  # left vertex first
    edge_types: dict = field(hash=False, compare=False)

    @property
    def radius(self) -> int:
        return self.base.radius

    def level_edges(self, n: int) -> list[tuple[str, str]]:
        out = [e for e in self.horizontal_edges if len(e[0]) == n]
        out.sort(key=lambda e: midpoint_key(e[0]))
        return out

    def horizontal_adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.base.vertices}
        for u, v in self.horizontal_edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def full_adjacency(self) -> dict[str, list[str]]:
        adj = {v: list(ns) for v, ns in self.base.adjacency().items()}
        for u, v in self.horizontal_edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def _parent_set(v: str) -> set[str]:
    return {normalize(rep[:-1]) for rep in congruence_class(v) if rep}


def _child_set(v: str) -> set[str]:
    return {normalize(v + "L"), normalize(v + "R")}


def classify_edge(u: str, v: str) -> str:
    """U when the endpoints share a parent, D when they share a child."""
    u, v = normalize(u), normalize(v)
    if len(u) != len(v):
        raise DomainError("horizontal edges join vertices of equal length")
    shared_parent = _parent_set(u) & _parent_set(v)
    shared_child = _child_set(u) & _child_set(v)
    if shared_parent and shared_child:
        raise AnomalyError(f"edge {(u, v)} classified both U and D")
    if shared_parent:
        return "U"
    if shared_child:
        return "D"
    raise DomainError(f"{(u, v)} is not a horizontal edge")


def build_augmented_ball(n: int) -> AugmentedBall:
    """Base ball plus both families of horizontal edges between its vertices."""
    base = build_ball(n)
    pairs = set()
    for m in base.vertices:
        if len(m) + 1 <= n:
            pairs.add((normalize(m + "L"), normalize(m + "R")))
        if len(m) + 2 <= n:
            pairs.add((normalize(m + "LR"), normalize(m + "RL")))
    edges = []
    types = {}
    for u, v in sorted(pairs):
        if midpoint_key(v) < midpoint_key(u):
            u, v = v, u
        edges.append((u, v))
        types[(u, v)] = classify_edge(u, v)
    edges.sort(key=lambda e: (len(e[0]), midpoint_key(e[0])))
    return AugmentedBall(base, tuple(edges), types)


@dataclass(frozen=True)
class LevelPattern:
    level: int
    word: str

    def __post_init__(self):
        if "DD" in self.word:
            raise AnomalyError(f"adjacent D edges at level {self.level}")
        if self.word and (self.word[0] != "U" or self.word[-1] != "U"):
            raise AnomalyError(f"level {self.level} pattern has a D at the boundary")

    def __str__(self) -> str:
        return self.word


def level_pattern(augball: AugmentedBall, n: int) -> LevelPattern:
    """U/D letters of the level-n horizontal edges, left to right."""
    if n >= augball.radius:
        raise DomainError("level must be below the ball radius for a complete pattern")
    word = "".join(augball.edge_types[e] for e in augball.level_edges(n))
    return LevelPattern(n, word)


def substitution_step(p: LevelPattern) -> LevelPattern:
    """Lone U -> UDU, double UU -> UDUDU; D letters only separate blocks."""
    out = []
    for block in p.word.split("D"):
        if block == "U":
            out.append("UDU")
        elif block == "UU":
            out.append("UDUDU")
        elif block == "":
            continue
        else:
            raise AnomalyError(f"unexpected U block {block!r} at level {p.level}")
    return LevelPattern(p.level + 1, "".join(out))


def _level_vertices(augball: AugmentedBall, n: int) -> list[str]:
    return augball.base.level(n)


def _horizontal_dists_from(adj, source) -> dict[str, int]:
    dist = {source: 0}
    todo = deque([source])
    while todo:
        cur = todo.popleft()
        for nb in adj[cur]:
            if nb not in dist:
                dist[nb] = dist[cur] + 1
                todo.append(nb)
    return dist


def horizontal_distance(augball: AugmentedBall, x: str, y: str):
    """BFS over horizontal edges only; infinity across levels."""
    x, y = normalize(x), normalize(y)
    if len(x) != len(y):
        return INF
    d = _horizontal_dists_from(augball.horizontal_adjacency(), x).get(y)
    return INF if d is None else d


def _all_horizontal_dists(augball: AugmentedBall, n: int) -> dict:
    adj = augball.horizontal_adjacency()
    out = {}
    for v in _level_vertices(augball, n):
        out[v] = _horizontal_dists_from(adj, v)
    return out


def _descendants(ball: Ball, x: str, m: int) -> list[str]:
    cur = {x}
    for _ in range(m):
        cur = {c for v in cur for c in ball.children(v)}
    return sorted(cur)


def check_expansive(augball: AugmentedBall) -> list:
    """Violations of: d_h(x,y) > 1 implies d_h(u,v) > 1 for all children."""
    violations = []
    for n in range(augball.radius):
        dh = _all_horizontal_dists(augball, n)
        dh_next = _all_horizontal_dists(augball, n + 1)
        verts = _level_vertices(augball, n)
        for i, x in enumerate(verts):
            for y in verts[i + 1:]:
                if dh[x].get(y, INF) <= 1:
                    continue
                for u in augball.base.children(x):
                    for v in augball.base.children(y):
                        if dh_next[u].get(v, INF) <= 1:
                            violations.append((x, y, u, v))
    return violations


def check_departing(augball: AugmentedBall, m: int, k: int) -> list:
    """Violations of: d_h(x,y) > k implies d_h(u,v) > 2k for all m-step
    descendant pairs.  Levels above radius - m are skipped."""
    violations = []
    for n in range(augball.radius - m + 1):
        dh = _all_horizontal_dists(augball, n)
        dh_deep = _all_horizontal_dists(augball, n + m)
        verts = _level_vertices(augball, n)
        for i, x in enumerate(verts):
            for y in verts[i + 1:]:
                if dh[x].get(y, INF) <= k:
                    continue
                for u in _descendants(augball.base, x, m):
                    for v in _descendants(augball.base, y, m):
                        if dh_deep[u].get(v, INF) <= 2 * k:
                            violations.append((x, y, u, v))
    return violations


def _bfs_all(adj, source):
    return _horizontal_dists_from(adj, source)


def check_quasi_isometry(inner_radius: int, pad: int = 1) -> dict:
    """Verify d_aug <= d <= 2 d_aug over all pairs of the inner ball, with
    both BFS distances computed on a padded ball."""
    augball = build_augmented_ball(inner_radius + pad)
    base_adj = augball.base.adjacency()
    full_adj = augball.full_adjacency()
    inner = [v for v in augball.base.vertices if len(v) <= inner_radius]
    violations = []
    max_ratio = 0.0
    for i, x in enumerate(inner):
        d_base = _bfs_all(base_adj, x)
        d_aug = _bfs_all(full_adj, x)
        for y in inner[i + 1:]:
            db, da = d_base[y], d_aug[y]
            if not (da <= db <= 2 * da):
                violations.append((x, y, db, da))
            max_ratio = max(max_ratio, db / da)
    return {"schema": "1", "check": "quasi", "radius": inner_radius,
            "pairs": len(inner) * (len(inner) - 1) // 2,
            "violations": violations, "max_ratio": max_ratio}


def _geodesic_in(adj, dist_from, x, y):
    # deterministic geodesic using precomputed BFS distances from x
    path = [y]
    cur = y
    while cur != x:
        cur = min(nb for nb in adj[cur] if dist_from[nb] == dist_from[cur] - 1)
        path.append(cur)
    path.reverse()
    return path


def estimate_delta(inner_radius: int, sample_cap: int = 10_000, seed: int = 0,
                   pad: int = 1) -> dict:
    """Max thinness defect over (sampled) triangles with true-metric BFS
    geodesics computed on a padded ball.  Exhaustive for radius <= 5."""
    ball = build_ball(inner_radius + pad)
    adj = ball.adjacency()
    inner = [v for v in ball.vertices if len(v) <= inner_radius]
    dists = {v: _bfs_all(adj, v) for v in ball.vertices}

    n = len(inner)
    triangles = []
    if inner_radius <= 5:
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    triangles.append((inner[i], inner[j], inner[k]))
    else:
        rng = random.Random(seed)
        for _ in range(sample_cap):
            triangles.append(tuple(rng.sample(inner, 3)))

    delta = 0
    for x, y, z in triangles:
        sides = [_geodesic_in(adj, dists[a], a, b)
                 for a, b in ((x, y), (y, z), (z, x))]
        for s in range(3):
            others = set(sides[(s + 1) % 3]) | set(sides[(s + 2) % 3])
            for p in sides[s]:
                defect = min(dists[p][q] for q in others)
                if defect > delta:
                    delta = defect
    return {"schema": "1", "check": "delta", "radius": inner_radius,
            "triangles": len(triangles), "delta": delta}


def horizontal_geodesic_bound(augball: AugmentedBall) -> dict:
    """Largest d_h among pairs whose horizontal distance is also their
    augmented-graph distance (the horizontal geodesics)."""
    full_adj = augball.full_adjacency()
    bound = 0
    witness = None
    for n in range(augball.radius + 1):
        dh = _all_horizontal_dists(augball, n)
        verts = _level_vertices(augball, n)
        for i, x in enumerate(verts):
            d_aug = _bfs_all(full_adj, x)
            for y in verts[i + 1:]:
                d = dh[x].get(y, INF)
                if d is not INF and d == d_aug[y] and d > bound:
                    bound = d
                    witness = (x, y)
    return {"schema": "1", "check": "horizontal-bound",
            "radius": augball.radius, "bound": bound, "witness": witness}


def dot_augmented(augball: AugmentedBall) -> str:
    lines = ["graph augmented {"]
    for v in augball.base.vertices:
        lines.append(f'  "{v if v else "1"}";')
    for p, c in augball.base.edges:
        lines.append(f'  "{p if p else "1"}" -- "{c}";')
    for u, v in augball.horizontal_edges:
        style = "dashed" if augball.edge_types[(u, v)] == "U" else "dotted"
        lines.append(f'  "{u}" -- "{v}" [style={style}, '
                     f'label="{augball.edge_types[(u, v)]}"];')
    lines.append("}")
    return "\n".join(lines)
