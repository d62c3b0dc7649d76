"""Finite balls of the Cayley graph, the BFS distance oracle, the closed-form
distance, geodesic construction, and principal vector fields.

Vertices are normal forms; the root is the empty word.  Every edge joins
lengths differing by one, so distances between adjacent vertices never tie
and principal fields orient every edge.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .ztau import DomainError
from .monoid import (LETTERS, cone_contains, interval, left_divide, meet_cone,
                     midpoint_key, normalize)


class BudgetExceeded(RuntimeError):
    """A configured size cap was hit."""


class AnomalyError(RuntimeError):
    """An invariant the theory guarantees failed; always a bug report."""


BALL_RADIUS_CAP = 16


@dataclass(frozen=True)
class Ball:
    """All normal forms of length <= radius with the parent/child edges."""

    radius: int
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # (parent, child), |child| = |parent|+1
    _adj: dict = field(repr=False, hash=False, compare=False, default_factory=dict)
    _parents: dict = field(repr=False, hash=False, compare=False, default_factory=dict)
    _children: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    @property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def adjacency(self) -> dict[str, list[str]]:
        return self._adj

    def parents(self, v: str) -> list[str]:
        return self._parents.get(v, [])

    def children(self, v: str) -> list[str]:
        return self._children.get(v, [])

    def level(self, n: int) -> list[str]:
        """Vertices of length n, ordered left to right by interval position."""
        lev = [v for v in self.vertices if len(v) == n]
        lev.sort(key=midpoint_key)
        return lev


@lru_cache(maxsize=None)
def build_ball(n: int) -> Ball:
    """BFS closure of radius n from the identity; deterministic ordering."""
    if n > BALL_RADIUS_CAP:
        raise BudgetExceeded(f"ball radius {n} exceeds cap {BALL_RADIUS_CAP}")
    levels = [[""]]
    edges = []
    for _ in range(n):
        nxt = set()
        for v in levels[-1]:
            for c in LETTERS:
                child = normalize(v + c)
                nxt.add(child)
                edges.append((v, child))
        levels.append(sorted(nxt, key=lambda w: (len(w), w)))
    vertices = tuple(v for lev in levels for v in sorted(lev))
    edges = tuple(sorted(set(edges)))
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    parents: dict[str, list[str]] = {v: [] for v in vertices}
    children: dict[str, list[str]] = {v: [] for v in vertices}
    for p, c in edges:
        adj[p].append(c)
        adj[c].append(p)
        parents[c].append(p)
        children[p].append(c)
    for v in vertices:
        adj[v].sort()
    return Ball(n, vertices, edges, adj, parents, children)


def bfs_distance(ball: Ball, x: str, y: str) -> int:
    """Graph distance within the ball.  For an oracle on pairs of B_n, run on
    B_{n+1}: a geodesic may dip one level deeper through the m L R^2 detour."""
    x, y = normalize(x), normalize(y)
    if x not in ball.vertex_set or y not in ball.vertex_set:
        raise DomainError("vertex missing from ball")
    if x == y:
        return 0
    dist = {x: 0}
    todo = deque([x])
    while todo:
        cur = todo.popleft()
        for nb in ball.adjacency()[cur]:
            if nb not in dist:
                dist[nb] = dist[cur] + 1
                if nb == y:
                    return dist[nb]
                todo.append(nb)
    raise AnomalyError("ball is disconnected")


def bfs_distances_from(ball: Ball, x: str) -> dict[str, int]:
    dist = {x: 0}
    todo = deque([x])
    adj = ball.adjacency()
    while todo:
        cur = todo.popleft()
        for nb in adj[cur]:
            if nb not in dist:
                dist[nb] = dist[cur] + 1
                todo.append(nb)
    return dist


def _shortcut_pair(a: str, b: str) -> bool:
    return (cone_contains("LR", a) and cone_contains("RL", b)
            and not cone_contains("LRR", a) and not cone_contains("LRR", b))


@lru_cache(maxsize=1 << 20)
def distance(x: str, y: str) -> int:
    """Closed-form distance: strip the common cone prefix, then
    |x'|+|y'|-2 in the LR/RL shortcut case, else |x'|+|y'|."""
    x, y = normalize(x), normalize(y)
    m = meet_cone(x, y)
    xp, yp = left_divide(m, x), left_divide(m, y)
    if not xp or not yp:
        return len(xp) + len(yp)
    if _shortcut_pair(xp, yp) or _shortcut_pair(yp, xp):
        return len(xp) + len(yp) - 2
    return len(xp) + len(yp)


@dataclass(frozen=True)
class GeodesicPath:
    vertices: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.vertices) - 1

    def to_json(self) -> list[str]:
        return list(self.vertices)


def geodesic(x: str, y: str) -> GeodesicPath:
    """A concrete shortest vertex path realizing distance(x, y)."""
    x, y = normalize(x), normalize(y)
    m = meet_cone(x, y)
    xp, yp = left_divide(m, x), left_divide(m, y)
    if xp and yp and (_shortcut_pair(xp, yp) or _shortcut_pair(yp, xp)):
        if not _shortcut_pair(xp, yp):
            rev = geodesic(y, x)
            return GeodesicPath(tuple(reversed(rev.vertices)))
        sx = left_divide("LR", xp)
        sy = left_divide("RL", yp)
        path = [normalize(m + "LR" + sx[:k]) for k in range(len(sx), -1, -1)]
        path.append(normalize(m + "LRR"))
        path.extend(normalize(m + "RL" + sy[:k]) for k in range(len(sy) + 1))
        return GeodesicPath(tuple(path))
    path = [normalize(m + xp[:k]) for k in range(len(xp), -1, -1)]
    path.extend(normalize(m + yp[:k]) for k in range(1, len(yp) + 1))
    return GeodesicPath(tuple(path))


def principal_field(x: str, ball: Ball) -> dict[tuple[str, str], int]:
    """Orientation of every ball edge toward the endpoint closer to x:
    +1 points (parent -> child), -1 points (child -> parent)."""
    x = normalize(x)
    out = {}
    for p, c in ball.edges:
        dp, dc = distance(x, p), distance(x, c)
        if dp == dc:
            raise AnomalyError(f"principal field tie on edge {(p, c)} for {x!r}")
        out[(p, c)] = 1 if dc < dp else -1
    return out


def all_geodesics(ball: Ball, x: str, y: str):
    """Every geodesic between x and y inside the ball (BFS enumeration)."""
    x, y = normalize(x), normalize(y)
    dist = bfs_distances_from(ball, x)
    if y not in dist:
        raise DomainError("vertex missing from ball")
    out = []

    def back(cur, acc):
        if cur == x:
            out.append(GeodesicPath(tuple(reversed(acc))))
            return
        for nb in ball.adjacency()[cur]:
            if dist.get(nb, -2) == dist[cur] - 1:
                back(nb, acc + [nb])

    back(y, [y])
    return out


def dot_ball(ball: Ball) -> str:
    """DOT export; horizontal position follows the interval midpoint."""
    lines = ["graph ball {", "  rankdir=TB;"]
    for v in ball.vertices:
        iv = interval(v)
        mid = (float(iv.lo) + float(iv.hi)) / 2
        label = v if v else "1"
        lines.append(f'  "{label}" [pos="{mid:.4f},{-len(v)}!"];')
    for p, c in ball.edges:
        lines.append(f'  "{p if p else "1"}" -- "{c}";')
    lines.append("}")
    return "\n".join(lines)


def distance_report(x: str, y: str) -> dict:
    path = geodesic(x, y)
    return {"schema": "1", "x": x, "y": y, "d": distance(x, y),
            "path": path.to_json()}
