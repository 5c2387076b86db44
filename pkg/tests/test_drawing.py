"""Drawing layer: realization search, planar maps, triangle regions, formats.

Straight-line drawings of random point sets again serve as ground truth: the
realization found for the angular rotation system must reproduce the exact
geometric crossing pairs and triangle side partitions, because both are
determined by the rotation system alone.  The K_4 table is checked entry by
entry against an independent hand analysis of the 16 orientation patterns.
"""

import itertools
import random

import pytest

import geom_oracle as geo
from gooddraw.rotation import (
    RotationSystem,
    UnrealizableError,
    convex_rotation,
    crossing_pairs,
    edge_key,
)
from gooddraw.drawing import (
    CellClass,
    DrawParseError,
    SearchBudgetExceeded,
    all_k4_rotation_systems,
    build_k4_table,
    dump_draw,
    k4_system_from_bits,
    k4_table,
    load_draw,
    realize,
)


def rs_from_points(pts) -> RotationSystem:
    return RotationSystem(geo.angular_rotation(pts))


def random_system(n: int, rng: random.Random) -> RotationSystem:
    rows = []
    for v in range(1, n + 1):
        others = [x for x in range(1, n + 1) if x != v]
        rng.shuffle(others)
        rows.append(tuple(others))
    return RotationSystem(rows)


# all K_4 restrictions of this one are realizable, yet the exhaustive search
# proves no good drawing exists; found by scanning the 7776 labeled systems
K4_CLEAN_UNREALIZABLE_5 = {
    1: (2, 3, 4, 5),
    2: (1, 3, 4, 5),
    3: (1, 4, 2, 5),
    4: (1, 5, 3, 2),
    5: (1, 4, 2, 3),
}


# ---------------------------------------------------------------------------
# K_4: the complete 16-system picture
# ---------------------------------------------------------------------------

def test_k4_table_matches_hand_analysis():
    # Encode each system by one bit per vertex: bit 0 keeps the other three
    # in ascending circular order, bit 1 reverses them.  Fixing vertex 1's
    # bit by mirroring, a case check of the eight patterns gives: 0000/1111
    # cross (1,3)x(2,4), 0011/1100 cross (1,4)x(2,3), 0110/1001 cross
    # (1,2)x(3,4), 0101/1010 are the planar drawings, and the eight patterns
    # of odd weight admit no good drawing at all.
    expect = {
        0b0000: ((1, 3), (2, 4)),
        0b1111: ((1, 3), (2, 4)),
        0b0011: ((1, 4), (2, 3)),
        0b1100: ((1, 4), (2, 3)),
        0b0110: ((1, 2), (3, 4)),
        0b1001: ((1, 2), (3, 4)),
        0b0101: (),
        0b1010: (),
    }
    table = build_k4_table()
    for bits in range(16):
        rs = k4_system_from_bits(bits)
        assert table.outcome(rs) == expect.get(bits), bits
        assert table.bits_realizable[bits] == (bits in expect)


def test_k4_mirror_is_bit_complement():
    table = k4_table()
    for bits in range(16):
        rs = k4_system_from_bits(bits)
        assert rs.mirror() == k4_system_from_bits(bits ^ 0b1111)
        assert table.outcome(rs) == table.outcome(rs.mirror())


def test_all_k4_systems_distinct():
    systems = all_k4_rotation_systems()
    assert len(set(systems)) == 16


# ---------------------------------------------------------------------------
# realization vs. exact geometry
# ---------------------------------------------------------------------------

def test_convex_crossing_counts():
    # in convex position every 4-subset contributes exactly one crossing
    for n in range(4, 9):
        dr = realize(convex_rotation(n))
        assert dr is not None
        assert dr.crossing_count == len(list(itertools.combinations(range(n), 4)))


def test_convex_k6_crossing_pairs_interleave():
    dr = realize(convex_rotation(6))
    want = set()
    for a, b, c, d in itertools.combinations(range(1, 7), 4):
        want.add(((a, c), (b, d)))  # only interleaved chords cross
    assert dr.crossing_set() == want


def test_realize_reproduces_geometric_crossings():
    rng = random.Random(90)
    for trial in range(30):
        n = rng.randint(4, 7)
        pts = geo.random_points(n, rng)
        rs = rs_from_points(pts)
        dr = realize(rs)
        assert dr is not None
        assert dr.crossing_set() == geo.crossing_pairs_geometric(pts)
        assert dr.extract_rotation() == rs


def test_region_partition_matches_geometric_sides():
    rng = random.Random(91)
    for trial in range(12):
        n = rng.randint(4, 7)
        pts = geo.random_points(n, rng)
        dr = realize(rs_from_points(pts))
        for tri in itertools.combinations(range(1, n + 1), 3):
            left, right = geo.triangle_sides(pts, tri)
            assert dr.region_partition(tri).unordered() == {left, right}


def test_crossing_pairs_table_agrees_with_drawing():
    # the 4-subset table predicts exactly the crossings the search realizes
    rng = random.Random(92)
    table = k4_table()
    for trial in range(10):
        pts = geo.random_points(7, rng)
        rs = rs_from_points(pts)
        assert crossing_pairs(rs, table) == realize(rs).crossing_set()


def test_star_triangles_match_geometry():
    rng = random.Random(93)
    for trial in range(8):
        n = rng.randint(5, 7)
        pts = geo.random_points(n, rng)
        dr = realize(rs_from_points(pts))
        for v in range(1, n + 1):
            stars = geo.star_triangles_geometric(pts, v)
            for tri in itertools.combinations(range(1, n + 1), 3):
                if v not in tri:
                    continue
                assert dr.is_star_triangle(tri, v) == (tri in stars)


def test_is_star_triangle_rejects_outside_apex():
    dr = realize(convex_rotation(5))
    with pytest.raises(ValueError):
        dr.is_star_triangle((1, 2, 3), 4)


# ---------------------------------------------------------------------------
# search behavior
# ---------------------------------------------------------------------------

def test_unrealizable_without_k4_witness():
    rs = RotationSystem(K4_CLEAN_UNREALIZABLE_5)
    crossing_pairs(rs, k4_table())  # every restriction is fine on its own
    assert realize(rs) is None
    assert realize(rs, guided=False) is None


def test_unrealizable_by_k4_restriction():
    rs = k4_system_from_bits(0b0001)
    assert realize(rs) is None
    with pytest.raises(UnrealizableError) as exc:
        crossing_pairs(rs, k4_table())
    assert exc.value.witness == (1, 2, 3, 4)


def test_guided_and_unguided_agree():
    # the unguided search applies only the good-drawing axioms; the guided
    # one prunes with required crossings and must keep the same verdicts
    rng = random.Random(94)
    for trial in range(60):
        rs = random_system(5, rng)
        g = realize(rs)
        u = realize(rs, guided=False)
        assert (g is None) == (u is None)
        if g is not None:
            assert g.crossing_set() == u.crossing_set()


def test_mirror_realizability_invariance():
    rng = random.Random(95)
    for trial in range(40):
        rs = random_system(rng.choice((5, 6)), rng)
        dr = realize(rs)
        dm = realize(rs.mirror())
        assert (dr is None) == (dm is None)
        if dr is not None:
            assert dr.crossing_set() == dm.crossing_set()


def test_restriction_of_realizable_is_realizable():
    rng = random.Random(96)
    pts = geo.random_points(7, rng)
    rs = rs_from_points(pts)
    for keep in itertools.combinations(range(1, 8), 5):
        sub = rs.restrict(keep)
        assert realize(sub) is not None


def test_node_budget_raises():
    with pytest.raises(SearchBudgetExceeded) as exc:
        realize(convex_rotation(7), node_budget=3)
    assert exc.value.nodes > 3


def test_paranoid_mode_passes():
    rng = random.Random(97)
    assert realize(convex_rotation(6), paranoid=True) is not None
    pts = geo.random_points(6, rng)
    assert realize(rs_from_points(pts), paranoid=True) is not None


def test_edge_order_must_cover_all_edges():
    with pytest.raises(ValueError, match="every edge"):
        realize(convex_rotation(4), edge_order=[(1, 2), (3, 4)])


def test_edge_order_must_keep_prefixes_connected():
    order = [(1, 2), (3, 4), (1, 3), (1, 4), (2, 3), (2, 4)]
    with pytest.raises(ValueError, match="disconnects"):
        realize(convex_rotation(4), edge_order=order)


def test_edge_order_choice_keeps_crossings():
    rs = convex_rotation(5)
    base = realize(rs).crossing_set()
    order = [(1, 5), (4, 5), (3, 4), (2, 3), (1, 2), (1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]
    dr = realize(rs, edge_order=order)
    assert dr is not None
    assert dr.crossing_set() == base


# ---------------------------------------------------------------------------
# planar map integrity
# ---------------------------------------------------------------------------

def test_map_is_spherical_and_faces_partition_darts():
    dr = realize(convex_rotation(6))
    m = dr.map
    assert m.euler_characteristic() == 2
    seen = []
    for face in m.faces():
        seen.extend(face)
    assert sorted(seen) == list(range(m.dart_count))


def test_crossing_vertices_have_degree_four():
    dr = realize(convex_rotation(5))
    m = dr.map
    assert len(m.crossing_vertices) == 5
    for z in m.crossing_vertices:
        assert len(m.rotation_at(z)) == 4


def test_chain_lists_each_crossing_once():
    dr = realize(convex_rotation(6))
    per_edge = {}
    for i, e in enumerate(dr.edges):
        per_edge[e] = {dr.edges[other] for other, _z, _s in dr.chain_crossings(i)}
    for (e, f) in dr.crossing_set():
        assert f in per_edge[e] and e in per_edge[f]
    total = sum(len(v) for v in per_edge.values())
    assert total == 2 * dr.crossing_count


# ---------------------------------------------------------------------------
# triangle cells with a chosen outer face
# ---------------------------------------------------------------------------

def test_classify_with_outer_tracks_region_partition():
    rng = random.Random(98)
    pts = geo.random_points(6, rng)
    dr = realize(rs_from_points(pts))
    for tri in itertools.combinations(range(1, 7), 3):
        sides = dr.region_partition(tri)
        classes = {dr.classify_with_outer(tri, d) for d in range(dr.map.dart_count)}
        if sides.left and sides.right:
            assert classes == {CellClass.NON_EMPTY}
        else:
            # empty side: the verdict flips with the chosen outer cell
            assert classes == {CellClass.INTERIOR_EMPTY, CellClass.EXTERIOR_EMPTY}


def test_classify_with_outer_k3_both_empty():
    dr = realize(convex_rotation(3))
    assert dr.classify_with_outer((1, 2, 3), 0) is CellClass.BOTH_EMPTY


# ---------------------------------------------------------------------------
# drawing files
# ---------------------------------------------------------------------------

def test_draw_roundtrip_convex():
    dr = realize(convex_rotation(6))
    text = dump_draw(dr)
    back = load_draw(text)
    assert back.crossing_set() == dr.crossing_set()
    assert back.extract_rotation() == dr.source
    assert dump_draw(back) == text


def test_draw_roundtrip_random():
    rng = random.Random(99)
    for trial in range(6):
        pts = geo.random_points(7, rng)
        dr = realize(rs_from_points(pts))
        back = load_draw(dump_draw(dr))
        for i in range(len(dr.edges)):
            want = [(dr.edges[o], s) for o, _z, s in dr.chain_crossings(i)]
            got = [(back.edges[o], s) for o, _z, s in back.chain_crossings(i)]
            assert want == got


def test_load_draw_rejects_corruption():
    text = dump_draw(realize(convex_rotation(6)))
    cases = [
        ("missing 'crossings:'", text.replace("crossings:", "")),
        ("bad rotation block", "rot 6\n1: 2 3\ncrossings:\n"),
        ("unexpected line", text + "wat\n"),
        ("self crossing", text.replace("edge 1 2:", "edge 1 2: 1-2+", 1)),
        ("adjacent crossing", text.replace("edge 1 2:", "edge 1 2: 1-3+", 1)),
    ]
    for label, bad in cases:
        with pytest.raises(DrawParseError):
            load_draw(bad)


def test_load_draw_rejects_one_sided_crossing():
    text = dump_draw(realize(convex_rotation(6)))
    assert "edge 1 3: 2-6+ 2-5+ 2-4+" in text  # guards the edits below
    bad = text.replace("edge 1 3: 2-6+ 2-5+ 2-4+", "edge 1 3: 2-5+ 2-4+")
    with pytest.raises(DrawParseError, match="only one edge"):
        load_draw(bad)


def test_load_draw_rejects_double_crossing():
    text = dump_draw(realize(convex_rotation(6)))
    bad = text.replace("edge 1 3: 2-6+ 2-5+ 2-4+", "edge 1 3: 2-6+ 2-5+ 2-4+ 2-6+")
    with pytest.raises(DrawParseError, match="cross twice"):
        load_draw(bad)


def test_load_draw_rejects_impossible_order():
    # swapping two crossings along one edge breaks the sphere
    text = dump_draw(realize(convex_rotation(6)))
    bad = text.replace("edge 1 3: 2-6+ 2-5+ 2-4+", "edge 1 3: 2-5+ 2-6+ 2-4+")
    with pytest.raises(DrawParseError):
        load_draw(bad)


def test_load_draw_rejects_flipped_side():
    text = dump_draw(realize(convex_rotation(6)))
    bad = text.replace("edge 1 3: 2-6+ 2-5+ 2-4+", "edge 1 3: 2-6- 2-5+ 2-4+")
    with pytest.raises(DrawParseError):
        load_draw(bad)
