"""Exact convex geometry: membership, cones, minimax faces, enclosing balls."""

from fractions import Fraction as Q

import pytest
from helpers import rng

from btgit.polyhedra import (PivotLimitExceeded, QPolytope, cone_contains,
                             cone_generators, hull_member,
                             hull_member_bruteforce, hull_skeleton,
                             min_enclosing_ball, minimax_face, polar_cone,
                             polyhedron_vertices, solve_lp, tangent_cone)
from btgit.qvec import line_rep, qvec


def test_hull_member_examples():
    tri = QPolytope([(1, 0), (-1, 1), (0, -1)])
    assert hull_member(tri, (0, 0), "interior")
    assert not hull_member(QPolytope([(1, 0), (0, 1)]), (0, 0), "closure")
    seg = QPolytope([(1, 1), (-1, -1)])
    assert hull_member(seg, (0, 0), "closure")
    assert not hull_member(seg, (0, 0), "interior")


def test_hull_member_matches_bruteforce():
    r = rng(23)
    for _ in range(300):
        dim = r.randint(1, 3)
        pts = [tuple(Q(r.randint(-3, 3), r.randint(1, 2)) for _ in range(dim))
               for _ in range(r.randint(1, 6))]
        q = tuple(Q(r.randint(-3, 3), r.randint(1, 2)) for _ in range(dim))
        assert hull_member(QPolytope(pts), q, "closure") == \
            hull_member_bruteforce(pts, q)


def test_tangent_cone_examples():
    line = tangent_cone(QPolytope([(1, 1), (-1, -1)]))
    assert cone_contains(line, (5, 5)) and cone_contains(line, (-5, -5))
    assert not cone_contains(line, (1, 0))
    full = tangent_cone(QPolytope([(1, 0), (0, 1), (-1, -1)]))
    assert all(cone_contains(full, v) for v in ((3, -7), (-1, 0), (2, 2)))
    quad = tangent_cone(QPolytope([(0, 0), (1, 0), (0, 1)]))
    assert cone_contains(quad, (2, 3))
    assert not cone_contains(quad, (-1, 0))


def test_polar_cone_examples():
    half = polar_cone([(1, 0)])
    assert cone_contains(half, (-2, 5)) and not cone_contains(half, (1, 0))
    line = polar_cone([(1, 0), (-1, 0)])
    assert cone_contains(line, (0, 7)) and not cone_contains(line, (1, 1))
    origin = polar_cone([(1, 0), (0, 1), (-1, -1)])
    assert cone_generators(origin) == []


def test_minimax_face_examples():
    # forms u and 1 - u equalize at 1/2
    res = minimax_face([((Q(1),), Q(0)), ((Q(-1),), Q(1))])
    assert res.value == Q(1, 2)
    assert res.face.single_point() == (Q(1, 2),)
    # normals whose hull misses 0 strictly: the min grows forever
    res = minimax_face([((Q(1), Q(0)), Q(0)), ((Q(0), Q(1)), Q(0))])
    assert res.value == float("inf") and res.ray is not None
    res = minimax_face([((Q(1),), Q(0)), ((Q(-1),), Q(0))])
    assert res.value == 0 and res.face.single_point() == (Q(0),)


def test_min_enclosing_ball_examples():
    c, r2 = min_enclosing_ball([(0, 0), (2, 0)])
    assert c == (1, 0) and r2 == 1
    assert min_enclosing_ball([(0, 0)]) == ((Q(0), Q(0)), Q(0))
    c, r2 = min_enclosing_ball([(0, 0), (2, 0), (1, 1)])
    assert c == (1, 0) and r2 == 1


def test_min_enclosing_ball_support_condition():
    r = rng(29)
    for _ in range(60):
        pts = [tuple(Q(r.randint(-4, 4)) for _ in range(2))
               for _ in range(r.randint(1, 5))]
        c, r2 = min_enclosing_ball(pts)
        d2 = [sum((a - b) ** 2 for a, b in zip(p, c)) for p in pts]
        assert max(d2) == r2  # radius is attained and no point lies outside


def test_hull_skeleton_examples():
    tri = QPolytope([(1, 0), (0, 1), (-1, -1)])
    verts, edges = hull_skeleton(tri)
    assert len(verts) == 3 and len(edges) == 3
    seg = QPolytope([(0, 0), (3, 3)])
    assert len(hull_skeleton(seg)[1]) == 1
    assert hull_skeleton(QPolytope([(2, 2)]))[1] == []


def test_edge_directions_are_canonical():
    verts, edges = hull_skeleton(QPolytope([(0, 0), (2, 0), (0, 2)]))
    dirs = {line_rep(d) for _, _, d in edges}
    assert dirs <= {line_rep(qvec(v)) for v in ((1, 0), (0, 1), (1, -1))}


def test_polyhedron_vertices_of_box():
    from btgit.polyhedra import QPolyhedron
    box = QPolyhedron((((Q(1),), Q(0)), ((Q(-1),), Q(-1))))
    assert sorted(polyhedron_vertices(box)) == [(Q(0),), (Q(1),)]


def test_lp_pivot_limit_env(monkeypatch):
    monkeypatch.setenv("BTGIT_LP_PIVOT_LIMIT", "1")
    with pytest.raises(PivotLimitExceeded):
        solve_lp((Q(1), Q(1)),
                 ub=[((Q(1), Q(0)), Q(5)), ((Q(0), Q(1)), Q(5)),
                     ((Q(-1), Q(0)), Q(5)), ((Q(0), Q(-1)), Q(5))],
                 maximize=True)
