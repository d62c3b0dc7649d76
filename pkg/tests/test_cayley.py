import itertools

import pytest

from goldenmonoid.ztau import DomainError
from goldenmonoid.monoid import (cone_contains, congruence_class, meet_cone,
                                 mul, normalize)
from goldenmonoid.cayley import (all_geodesics, bfs_distance, build_ball,
                                 distance, geodesic, principal_field)
from conftest import all_words


def test_ball_examples():
    b1 = build_ball(1)
    assert set(b1.vertices) == {"", "L", "R"}
    assert len(build_ball(3).vertices) == 14
    b0 = build_ball(0)
    assert len(b0.vertices) == 1 and not b0.edges


def test_bfs_examples():
    assert bfs_distance(build_ball(3), "L", "R") == 2
    assert bfs_distance(build_ball(4), "LR", "RL") == 2
    assert bfs_distance(build_ball(4), "LRL", "RLR") == 4
    with pytest.raises(DomainError):
        bfs_distance(build_ball(2), "LLL", "R")


def test_distance_examples():
    assert distance("LLL", "RR") == 5
    assert distance("LL", "R") == 3
    assert distance("LRL", "RLR") == 4
    assert distance("LLRL", "LRLR") == 4
    assert distance("", "") == 0


def test_distance_matches_bfs_oracle():
    oracle = build_ball(7)
    vs = build_ball(6).vertices
    for x, y in itertools.combinations(vs, 2):
        assert distance(x, y) == bfs_distance(oracle, x, y)


def test_left_invariance():
    inner = build_ball(5).vertices
    for w in build_ball(3).vertices:
        for x, y in itertools.combinations(inner[:30], 2):
            assert distance(mul(w, x), mul(w, y)) == distance(x, y)


def test_metric_axioms():
    vs = build_ball(5).vertices
    d = {(x, y): distance(x, y) for x in vs for y in vs}
    for x in vs:
        assert d[(x, x)] == 0
    for x, y in itertools.combinations(vs, 2):
        assert d[(x, y)] == d[(y, x)] > 0
    for x, y, z in itertools.combinations(vs, 3):
        assert d[(x, z)] <= d[(x, y)] + d[(y, z)]


def test_geodesic_examples():
    assert geodesic("LRL", "RLR").vertices == ("LRL", "LR", "LRR", "RL", "RLR")
    assert geodesic("RLR", "LRL").vertices == ("RLR", "RL", "LRR", "LR", "LRL")
    assert geodesic("LL", "R").vertices == ("LL", "L", "", "R")
    assert geodesic("LRL", "LRL").vertices == ("LRL",)


def test_geodesics_are_paths():
    ball = build_ball(6)
    adj = ball.adjacency()
    vs = build_ball(5).vertices
    for x, y in itertools.combinations(vs, 2):
        p = geodesic(x, y).vertices
        assert len(p) - 1 == distance(x, y)
        assert all(v in adj[u] for u, v in zip(p, p[1:]))


def test_strong_convexity_sample():
    ball = build_ball(7)
    vs = build_ball(6).vertices
    for x, y in itertools.combinations(vs, 2):
        m = meet_cone(x, y)
        if not m:
            continue
        for g in all_geodesics(ball, x, y):
            assert all(cone_contains(m, v) for v in g.vertices)


def test_unique_boundary_geodesics_small():
    ball = build_ball(7)
    for n in range(0, 4):
        for m in range(0, 4):
            if n + m == 0:
                continue
            gs = all_geodesics(ball, "L" * n, "R" * m)
            assert len(gs) == 1
            assert "" in gs[0].vertices


def test_principal_field_examples():
    b1 = build_ball(1)
    f = principal_field("", b1)
    assert f[("", "L")] == -1 and f[("", "R")] == -1
    f = principal_field("LLL", b1)
    assert f[("", "L")] == +1 and f[("", "R")] == -1
    for w in all_words(6):
        f = principal_field(mul("LRR", w), b1)
        assert f[("", "L")] == +1 and f[("", "R")] == +1


def test_field_distance_equivalences():
    # six statements tying cone membership to distance comparisons
    for x in build_ball(10).vertices:
        d1, dl, dr = distance(x, ""), distance(x, "L"), distance(x, "R")
        dlr, drl = distance(x, "LR"), distance(x, "RL")
        assert cone_contains("L", x) == (dl < d1)
        assert cone_contains("R", x) == (dr < d1)
        assert (not cone_contains("L", x)) == (dl > d1)
        assert (not cone_contains("R", x)) == (dr > d1)
        assert cone_contains("LRR", x) == (dl < d1 and dr < d1)
        in_wedge = cone_contains("LR", x) or cone_contains("RL", x)
        assert in_wedge == (dlr < dl) == (drl < dr)


def _peel_trailing(word: str, letter: str, cap: int | None = None):
    """Largest i (optionally capped) with word = n letter^i in the monoid."""
    best_i, best_rep = 0, normalize(word)
    for rep in congruence_class(normalize(word)):
        i = len(rep) - len(rep.rstrip(letter))
        if cap is not None:
            i = min(i, cap)
        if i > best_i:
            best_i, best_rep = i, rep
    return normalize(best_rep[:len(best_rep) - best_i]), best_i


def test_distance_cone_statements():
    xs = build_ball(9).vertices
    for m in build_ball(4).vertices:
        for letter, other in (("L", "R"), ("R", "L")):
            mc = mul(m, letter)
            n, _ = _peel_trailing(mc, other)
            nc = mul(n, letter)
            nprime, _ = _peel_trailing(nc, other, cap=1)
            for x in xs:
                closer = distance(x, mc) < distance(x, m)
                member = cone_contains(n, x) or cone_contains(nprime, x)
                assert closer == member, (m, letter, x, n, nprime)
                farther = distance(x, mc) > distance(x, m)
                assert farther == (not member)


def _triangle_sets():
    out = []
    for p in build_ball(3).vertices:
        out.append(("triangle", (mul(p, "LR"), mul(p, "RL"))))
    for n in (1, 2, 3):
        out.append(("side-cone", ("L" * n,)))
        out.append(("side-cone", ("R" * n,)))
    return out


def test_triangle_and_side_cone_separation():
    ball = build_ball(9)
    adj = ball.adjacency()
    for _, roots in _triangle_sets():
        def inside(v):
            return any(cone_contains(r, v) for r in roots)

        crossing = [(u, v) for u in ball.vertices for v in adj[u]
                    if inside(u) and not inside(v)]
        members = [x for x in ball.vertices if inside(x)]
        outsiders_sample = [x for x in ball.vertices if not inside(x)][::7]
        for p, q_ in crossing:
            for x in members:
                assert distance(x, p) < distance(x, q_)
            for x in outsiders_sample:
                assert distance(x, q_) < distance(x, p)


def test_exports():
    from goldenmonoid.cayley import distance_report, dot_ball
    rep = distance_report("LRL", "RLR")
    assert rep == {"schema": "1", "x": "LRL", "y": "RLR", "d": 4,
                   "path": ["LRL", "LR", "LRR", "RL", "RLR"]}
    dot = dot_ball(build_ball(2))
    assert dot.startswith("graph ball {") and '"1" -- "L"' in dot
    from goldenmonoid.monoid import interval
    assert interval("LRR").to_json() == {"lo": "t^2", "hi": "t"}
