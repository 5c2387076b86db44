"""Straight-line drawing oracle used to cross-check the combinatorial engine.

Everything in this module is computed directly from integer point coordinates
with exact sign-of-determinant predicates.  It deliberately shares no code
with the package under test: rotations come from angular sorting, crossings
from segment intersection tests, and triangle sides from point-in-triangle
tests.  A straight-line drawing of K_n on points in general position is always
a good drawing, so these functions provide ground truth for the rotation-level
and drawing-level analytics.

Points are given as a dict {label: (x, y)} with labels 1..n and integer
coordinates, no three collinear.
"""

from __future__ import annotations

import itertools
import random
from functools import cmp_to_key

Point = tuple[int, int]


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the signed area of the triangle p, q, r (+1 = counterclockwise)."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def parabola_points(n: int) -> dict[int, Point]:
    """n points on a parabola: convex position, hull order 1..n counterclockwise."""
    return {i: (i, i * i) for i in range(1, n + 1)}


def random_points(n: int, rng: random.Random, span: int = 10**6) -> dict[int, Point]:
    """n integer points in general position (no three collinear)."""
    pts: list[Point] = []
    while len(pts) < n:
        cand = (rng.randrange(-span, span), rng.randrange(-span, span))
        if cand in pts:
            continue
        if any(orient(a, b, cand) == 0 for a, b in itertools.combinations(pts, 2)):
            continue
        pts.append(cand)
    return {i + 1: p for i, p in enumerate(pts)}


def angular_rotation(points: dict[int, Point]) -> dict[int, tuple[int, ...]]:
    """Counterclockwise cyclic order of the other points around each point.

    The start of each returned tuple is arbitrary; only the cyclic order is
    meaningful.
    """
    rotations = {}
    for v, pv in points.items():
        others = [u for u in points if u != v]

        def half(u: int) -> int:
            dx = points[u][0] - pv[0]
            dy = points[u][1] - pv[1]
            # 0 for angles in [0, pi), 1 for [pi, 2*pi)
            return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

        def cmp(a: int, b: int) -> int:
            ha, hb = half(a), half(b)
            if ha != hb:
                return ha - hb
            return -orient(pv, points[a], points[b])

        others.sort(key=cmp_to_key(cmp))
        rotations[v] = tuple(others)
    return rotations


def segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Proper interior crossing of two segments (general position assumed)."""
    return (
        orient(p1, p2, q1) * orient(p1, p2, q2) < 0
        and orient(q1, q2, p1) * orient(q1, q2, p2) < 0
    )


def crossing_pairs_geometric(points: dict[int, Point]) -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """All pairs of edges of the straight-line K_n that cross."""
    edges = list(itertools.combinations(sorted(points), 2))
    out = set()
    for (a, b), (c, d) in itertools.combinations(edges, 2):
        if len({a, b, c, d}) < 4:
            continue
        if segments_cross(points[a], points[b], points[c], points[d]):
            out.add(tuple(sorted(((a, b), (c, d)))))
    return out


def point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    """Strict interior test (general position: p never on the boundary)."""
    s1 = orient(a, b, p)
    s2 = orient(b, c, p)
    s3 = orient(c, a, p)
    return s1 == s2 == s3


def triangle_sides(points: dict[int, Point], tri) -> tuple[frozenset[int], frozenset[int]]:
    """(inside, outside) vertex sets of a triangle in the straight-line drawing."""
    a, b, c = sorted(tri)
    inside, outside = set(), set()
    for v in points:
        if v in (a, b, c):
            continue
        if point_in_triangle(points[v], points[a], points[b], points[c]):
            inside.add(v)
        else:
            outside.add(v)
    return frozenset(inside), frozenset(outside)


def empty_triangles_geometric(points: dict[int, Point]) -> list[tuple[int, int, int]]:
    """Triangles with all other points on one side (inside empty or outside empty)."""
    out = []
    for tri in itertools.combinations(sorted(points), 3):
        inside, outside = triangle_sides(points, tri)
        if not inside or not outside:
            out.append(tri)
    return out


def vertex_stats_geometric(points: dict[int, Point], v: int) -> tuple[int, int]:
    """(t, l): empty triangles at v, and triangles where v sits alone on a side."""
    t = 0
    for tri in itertools.combinations(sorted(points), 3):
        if v in tri:
            inside, outside = triangle_sides(points, tri)
            if not inside or not outside:
                t += 1
    l = 0
    for tri in itertools.combinations(sorted(u for u in points if u != v), 3):
        inside, outside = triangle_sides(points, tri)
        if inside == {v} or outside == {v}:
            l += 1
    return t, l


def star_triangles_geometric(points: dict[int, Point], v: int) -> set[tuple[int, int, int]]:
    """Triangles {v,u,w} whose far edge uw is crossed by no edge incident to v."""
    out = set()
    others = sorted(u for u in points if u != v)
    for u, w in itertools.combinations(others, 2):
        blocked = False
        for x in others:
            if x in (u, w):
                continue
            if segments_cross(points[u], points[w], points[v], points[x]):
                blocked = True
                break
        if not blocked:
            out.add(tuple(sorted((v, u, w))))
    return out
