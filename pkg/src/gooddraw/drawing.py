"""Realizing rotation systems as crossing-annotated planar maps.

:func:`realize` decides whether a rotation system admits a good drawing of
K_n (no edge crosses itself, edges with a shared endpoint never cross, any
two edges cross at most once) and, when it does, returns one explicit drawing
as a planar map on the sphere: crossings become degree-4 vertices, edges
become chains of segments, and every vertex carries its counterclockwise
dart order.

Construction inserts edges one at a time and routes each new edge through the
faces of the partial map by depth-first search.  The rotation system pins the
corner where the new edge must leave (and arrive at) its endpoints, so the
only freedom is the sequence of segments the edge crosses; every crossing
sequence realizable by some drawing corresponds to exactly one search branch,
which makes full exhaustion a proof of unrealizability.

Darts are integers allocated in twin pairs (``twin(d) == d ^ 1``); ``nxt``
and ``prv`` give the circular rotation at the dart's origin, and faces are
the orbits of ``d -> nxt[twin(d)]``, tracing each face with its interior on
the left.  All mutations go through a trail so routing choices undo in O(1)
per change.
"""

from __future__ import annotations

import enum
import itertools
import sys
from typing import Iterable, NamedTuple, Sequence

from gooddraw.rotation import (
    RotationSystem,
    SidePartition,
    UnrealizableError,
    crossing_pairs,
    edge_key,
    parse_rot,
    dump_rot,
)

__all__ = [
    "realize",
    "RealizedDrawing",
    "PlanarMap",
    "CellClass",
    "SearchBudgetExceeded",
    "DrawParseError",
    "dump_draw",
    "load_draw",
    "K4CrossingTable",
    "all_k4_rotation_systems",
    "k4_system_from_bits",
    "build_k4_table",
    "k4_table",
]


class SearchBudgetExceeded(Exception):
    """Routing search exceeded ``node_budget``; carries progress counters."""

    def __init__(self, nodes: int, edges_placed: int):
        super().__init__(
            f"search budget exhausted after {nodes} nodes, "
            f"{edges_placed} edges placed"
        )
        self.nodes = nodes
        self.edges_placed = edges_placed


class DrawParseError(ValueError):
    """Malformed or inconsistent .draw input."""


class CellClass(enum.Enum):
    """How a triangle's two sides relate to vertices and the outer cell."""

    INTERIOR_EMPTY = "interior-empty"
    EXTERIOR_EMPTY = "exterior-empty"
    BOTH_EMPTY = "both-empty"
    NON_EMPTY = "non-empty"


def _lex_edges(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, n + 1), 2))


class _Builder:
    """Mutable planar map under construction, with an undo trail.

    Vertices are 1..n (originals) then crossing vertices; index 0 unused.
    Darts live in parallel lists; twin(d) = d ^ 1.
    """

    def __init__(self, rs: RotationSystem, edges: list[tuple[int, int]]):
        self.rs = rs
        self.n = rs.n
        self.edges = edges
        self.edge_index = {e: i for i, e in enumerate(edges)}
        self.nxt: list[int] = []
        self.prv: list[int] = []
        self.org: list[int] = []
        self.dart_edge: list[int] = []
        # per vertex; -1 = not placed, crossings get their pair of edge ids
        self.first_dart = [-1] * (self.n + 1)
        self.cross_pair: list[tuple[int, int] | None] = [None] * (self.n + 1)
        self.end_darts = [[-1, -1] for _ in edges]  # dart at min/max endpoint
        self.e_done = [False] * len(edges)
        self.trail: list = []
        self.nodes = 0
        self.max_k = 0
        self.node_budget: int | None = None
        self.paranoid = False
        # required[k]: edge indices that edge k must cross (from the K_4
        # table), or None to fall back to the raw good-drawing axioms
        self.required: list[set[int]] | None = None

    # -- trail ------------------------------------------------------------

    def _set(self, arr: list, i: int, val) -> None:
        self.trail.append((arr, i, arr[i]))
        arr[i] = val

    def _undo_to(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            arr, i, old = trail.pop()
            if arr is None:
                # allocation record: (None, kind, old length)
                if i == "darts":
                    del self.nxt[old:]
                    del self.prv[old:]
                    del self.org[old:]
                    del self.dart_edge[old:]
                else:
                    del self.first_dart[old:]
                    del self.cross_pair[old:]
            else:
                arr[i] = old

    # -- allocation -------------------------------------------------------

    def _new_dart_pair(self, e_idx: int, org_a: int, org_b: int) -> int:
        d = len(self.nxt)
        self.trail.append((None, "darts", d))
        self.nxt.extend((-1, -1))
        self.prv.extend((-1, -1))
        self.org.extend((org_a, org_b))
        self.dart_edge.extend((e_idx, e_idx))
        return d

    def _new_vertex(self, pair: tuple[int, int] | None) -> int:
        v = len(self.first_dart)
        self.trail.append((None, "vertex", v))
        self.first_dart.append(-1)
        self.cross_pair.append(pair)
        return v

    # -- rotation edits ---------------------------------------------------

    def _init_lone(self, g: int) -> None:
        self._set(self.nxt, g, g)
        self._set(self.prv, g, g)
        self._set(self.first_dart, self.org[g], g)

    def _splice_after(self, d: int, g: int) -> None:
        """Insert dart g immediately after d in the rotation at org(d)."""
        e = self.nxt[d]
        self._set(self.nxt, d, g)
        self._set(self.nxt, g, e)
        self._set(self.prv, g, d)
        self._set(self.prv, e, g)

    def _replace_dart(self, old: int, new: int) -> None:
        """Give dart ``new`` the rotation slot of ``old`` (same origin)."""
        p, q = self.prv[old], self.nxt[old]
        if p == old:
            self._set(self.nxt, new, new)
            self._set(self.prv, new, new)
        else:
            self._set(self.nxt, p, new)
            self._set(self.prv, new, p)
            self._set(self.nxt, new, q)
            self._set(self.prv, q, new)
        v = self.org[old]
        if self.first_dart[v] == old:
            self._set(self.first_dart, v, new)

    # -- queries ------------------------------------------------------------

    def _face_darts(self, d0: int) -> list[int]:
        """The face orbit of d0 under d -> prv[twin(d)].

        With counterclockwise rotations this walks each face with its
        interior on the left, and the corner swept from d to nxt[d] at
        org(d) belongs to the face of d.
        """
        out = [d0]
        d = self.prv[d0 ^ 1]
        while d != d0:
            out.append(d)
            d = self.prv[d ^ 1]
        return out

    def _corner_pred(self, v: int, nbr: int) -> int:
        """Dart at v after which the new edge (v, nbr) must be spliced.

        Scans the target rotation backward from nbr to the nearest neighbor
        whose edge is already drawn; the new dart goes right after it.
        """
        row = self.rs.rots[v]
        i = row.index(nbr)
        m = len(row)
        for step in range(1, m):
            p = row[(i - step) % m]
            e = self.edge_index.get(edge_key(v, p))
            if e is not None and self.e_done[e]:
                side = 0 if v < p else 1
                return self.end_darts[e][side]
        raise AssertionError(f"no placed neighbor at vertex {v}")

    # -- routing steps ------------------------------------------------------

    def _begin_segment(self, k: int, a: int, d_a: int, to_org: int, first: bool) -> int:
        """New segment pair leaving anchor a through corner(d_a); returns g."""
        g = self._new_dart_pair(k, a, to_org)
        self._splice_after(d_a, g)
        if first:
            u, v = self.edges[k]
            side = 0 if a == u else 1
            self.trail.append((self.end_darts[k], side, self.end_darts[k][side]))
            self.end_darts[k][side] = g
        return g

    def _cross(self, k: int, a: int, d_a: int, t: int, first: bool) -> tuple[int, int]:
        """Cross boundary dart t (from its face side); return (z, next corner).

        The crossed segment w--x (t points w to x) splits at a new crossing
        vertex z; the arc gains segment a--z and continues on the far side,
        whose attachment corner is the z-to-w dart.
        """
        f_idx = self.dart_edge[t]
        tp = t ^ 1  # twin, currently x -> w
        x = self.org[tp]
        z = self._new_vertex((f_idx, k))
        # keep (t, tp) as the w--z segment: re-origin tp to z
        s = self._new_dart_pair(f_idx, z, x)  # s: z->x, s^1: x->z
        self._replace_dart(tp, s ^ 1)
        self._set(self.org, tp, z)
        # if tp was an end dart of the crossed edge, s^1 takes that role
        ed = self.end_darts[f_idx]
        for side in (0, 1):
            if ed[side] == tp:
                self.trail.append((ed, side, tp))
                ed[side] = s ^ 1
        # arc segment a--z
        g = self._begin_segment(k, a, d_a, z, first)
        gp = g ^ 1  # z -> a
        # rotation at z so far (counterclockwise): s, gp, tp; the out-dart
        # of the arc is spliced after tp later, completing f,e,f,e alternation
        self._set(self.nxt, s, gp)
        self._set(self.prv, gp, s)
        self._set(self.nxt, gp, tp)
        self._set(self.prv, tp, gp)
        self._set(self.nxt, tp, s)
        self._set(self.prv, s, tp)
        self._set(self.first_dart, z, tp)
        return z, tp

    def _complete_placed(self, k: int, a: int, d_a: int, v: int, d_v: int, first: bool) -> None:
        g = self._begin_segment(k, a, d_a, v, first)
        gp = g ^ 1
        self._splice_after(d_v, gp)
        u, w = self.edges[k]
        side = 0 if v == u else 1
        self.trail.append((self.end_darts[k], side, self.end_darts[k][side]))
        self.end_darts[k][side] = gp
        self._set(self.e_done, k, True)

    def _complete_floating(self, k: int, a: int, d_a: int, v: int, first: bool) -> None:
        g = self._begin_segment(k, a, d_a, v, first)
        gp = g ^ 1
        self._init_lone(gp)
        u, w = self.edges[k]
        side = 0 if v == u else 1
        self.trail.append((self.end_darts[k], side, self.end_darts[k][side]))
        self.end_darts[k][side] = gp
        self._set(self.e_done, k, True)

    # -- routing search -----------------------------------------------------

    def _route(self, k: int):
        """Yield once per way of drawing edge k into the current map.

        The map holds the applied routing at each yield; it is undone before
        trying the next option and after the last one (abandoning the
        generator mid-iteration keeps the current routing in place).
        """
        u, v = self.edges[k]
        placed_u = self.first_dart[u] != -1
        placed_v = self.first_dart[v] != -1
        if not placed_u and not placed_v:
            if self.nxt:
                raise ValueError(
                    f"edge order disconnects the drawing at edge {self.edges[k]}"
                )
            mark = len(self.trail)
            g = self._new_dart_pair(k, u, v)
            self._init_lone(g)
            self._init_lone(g ^ 1)
            for side, d in ((0, g), (1, g ^ 1)):
                self.trail.append((self.end_darts[k], side, self.end_darts[k][side]))
                self.end_darts[k][side] = d
            self._set(self.e_done, k, True)
            yield
            self._undo_to(mark)
            return
        if not placed_u:
            u, v = v, u
            placed_v = False
        d_a = self._corner_pred(u, v)
        d_v = self._corner_pred(v, u) if placed_v else -1
        need = None
        if self.required is not None:
            need = {f for f in self.required[k] if self.e_done[f]}
        yield from self._route_dfs(k, u, d_a, v, d_v, placed_v, set(), True, need)

    def _route_dfs(self, k, a, d_a, v, d_v, placed_v, crossed, first, need):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise SearchBudgetExceeded(self.nodes, self.max_k)
        face = self._face_darts(d_a)
        mark = len(self.trail)
        # crossed is a subset of need when guided, so equal sizes means every
        # required crossing with a placed edge has happened
        may_end = need is None or len(crossed) == len(need)
        if not placed_v:
            if may_end:
                self._complete_floating(k, a, d_a, v, first)
                if self.paranoid:
                    self._check_invariants()
                yield
                self._undo_to(mark)
        elif may_end and d_v in face:
            self._complete_placed(k, a, d_a, v, d_v, first)
            if self.paranoid:
                self._check_invariants()
            yield
            self._undo_to(mark)
        u0, v0 = self.edges[k]
        for t in face:
            f_idx = self.dart_edge[t]
            if f_idx in crossed:
                continue
            if need is None:
                x, y = self.edges[f_idx]
                if x == u0 or x == v0 or y == u0 or y == v0:
                    continue
            elif f_idx not in need:
                continue
            mark = len(self.trail)
            z, cont = self._cross(k, a, d_a, t, first)
            if self.paranoid:
                self._check_invariants()
            crossed.add(f_idx)
            yield from self._route_dfs(
                k, z, cont, v, d_v, placed_v, crossed, False, need
            )
            crossed.discard(f_idx)
            self._undo_to(mark)

    def _rec(self, k: int) -> bool:
        if k == len(self.edges):
            return True
        if k > self.max_k:
            self.max_k = k
        for _ in self._route(k):
            if self._rec(k + 1):
                return True
        return False

    # -- integrity ----------------------------------------------------------

    def _check_invariants(self) -> None:
        """Euler formula and rotation-link consistency of the partial map."""
        nd = len(self.nxt)
        for d in range(nd):
            assert self.prv[self.nxt[d]] == d, "broken rotation links"
        verts = {self.org[d] for d in range(nd)}
        seen = set()
        faces = 0
        for d in range(nd):
            if d in seen:
                continue
            faces += 1
            for x in self._face_darts(d):
                seen.add(x)
        assert len(verts) - nd // 2 + faces == 2, "Euler formula violated"

    def snapshot(self) -> "PlanarMap":
        return PlanarMap(
            n_orig=self.n,
            edges=tuple(self.edges),
            nxt=tuple(self.nxt),
            prv=tuple(self.prv),
            org=tuple(self.org),
            dart_edge=tuple(self.dart_edge),
            first_dart=tuple(self.first_dart),
            cross_pair=tuple(self.cross_pair),
            end_darts=tuple((a, b) for a, b in self.end_darts),
        )


class PlanarMap(NamedTuple):
    """Immutable combinatorial map of a drawing on the sphere.

    Vertices 1..n_orig are the graph's; higher labels are crossings, with
    ``cross_pair[z]`` naming the two edge indices meeting there.  Darts are
    indices into the parallel tuples; ``twin(d) == d ^ 1``; ``nxt`` is the
    counterclockwise rotation at ``org[d]``.  ``end_darts[e]`` gives the
    darts of edge e at its min and max endpoint.
    """

    n_orig: int
    edges: tuple[tuple[int, int], ...]
    nxt: tuple[int, ...]
    prv: tuple[int, ...]
    org: tuple[int, ...]
    dart_edge: tuple[int, ...]
    first_dart: tuple[int, ...]
    cross_pair: tuple
    end_darts: tuple[tuple[int, int], ...]

    @property
    def dart_count(self) -> int:
        return len(self.nxt)

    @property
    def vertex_count(self) -> int:
        return len(self.first_dart) - 1

    @property
    def crossing_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.n_orig + 1, len(self.first_dart)))

    def face_cycle(self, d0: int) -> tuple[int, ...]:
        """Boundary darts of the face left of d0, walked counterclockwise."""
        out = [d0]
        d = self.prv[d0 ^ 1]
        while d != d0:
            out.append(d)
            d = self.prv[d ^ 1]
        return tuple(out)

    def faces(self) -> list[tuple[int, ...]]:
        """All faces, each reported once, seeded from its smallest dart."""
        seen = [False] * self.dart_count
        out = []
        for d in range(self.dart_count):
            if seen[d]:
                continue
            cyc = self.face_cycle(d)
            for x in cyc:
                seen[x] = True
            out.append(cyc)
        return out

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.dart_count // 2 + len(self.faces())

    def rotation_at(self, v: int) -> tuple[int, ...]:
        """Darts at v in counterclockwise order, from first_dart[v]."""
        d0 = self.first_dart[v]
        out = [d0]
        d = self.nxt[d0]
        while d != d0:
            out.append(d)
            d = self.nxt[d]
        return tuple(out)

    def chain(self, e_idx: int) -> list[int]:
        """Forward darts of edge e walked min endpoint to max endpoint."""
        d = self.end_darts[e_idx][0]
        out = [d]
        while self.org[d ^ 1] > self.n_orig:
            d = self.nxt[self.nxt[d ^ 1]]
            out.append(d)
        return out


def _heads_to_larger(m: PlanarMap, d: int) -> bool:
    """Walk dart d along its edge; True if it terminates at the max endpoint."""
    e = m.dart_edge[d]
    while m.org[d ^ 1] > m.n_orig:
        d = m.nxt[m.nxt[d ^ 1]]
    return m.org[d ^ 1] == m.edges[e][1]


class RealizedDrawing:
    """A rotation system together with one good drawing realizing it."""

    def __init__(self, source: RotationSystem, pmap: PlanarMap):
        self.source = source
        self.map = pmap
        self.edges = pmap.edges

    @property
    def crossing_count(self) -> int:
        return len(self.map.first_dart) - 1 - self.map.n_orig

    def crossing_set(self) -> set[tuple[tuple[int, int], tuple[int, int]]]:
        """Unordered crossing pairs as sorted pairs of edge keys."""
        out = set()
        for z in self.map.crossing_vertices:
            e, f = self.map.cross_pair[z]
            out.add(tuple(sorted((self.edges[e], self.edges[f]))))
        return out

    def extract_rotation(self) -> RotationSystem:
        """Read the rotation system back off the map."""
        m = self.map
        rows = []
        for v in range(1, m.n_orig + 1):
            nbrs = []
            for d in m.rotation_at(v):
                a, b = m.edges[m.dart_edge[d]]
                nbrs.append(b if a == v else a)
            rows.append(tuple(nbrs))
        return RotationSystem._trusted(m.n_orig, rows)

    def chain_crossings(self, e_idx: int):
        """Crossings along edge e, in walk order: (other edge, z, sign).

        sign is '+' when, at the crossing, the next dart counterclockwise
        from the edge's continuation heads toward the crossed edge's larger
        endpoint.
        """
        m = self.map
        out = []
        for d in m.chain(e_idx)[:-1]:
            z = m.org[d ^ 1]
            pair = m.cross_pair[z]
            other = pair[0] if pair[1] == e_idx else pair[1]
            cont = m.nxt[m.nxt[d ^ 1]]
            sign = "+" if _heads_to_larger(m, m.nxt[cont]) else "-"
            out.append((other, z, sign))
        return out

    def is_star_triangle(self, tri, apex: int) -> bool:
        """True when no edge incident to apex crosses the triangle's far edge."""
        a, b, c = sorted(tri)
        if apex not in (a, b, c):
            raise ValueError(f"apex {apex} not in triangle {tri!r}")
        u, w = [x for x in (a, b, c) if x != apex]
        e_idx = self.edges.index(edge_key(u, w))
        for other, _z, _sign in self.chain_crossings(e_idx):
            if apex in self.edges[other]:
                return False
        return True

    def _face_ids(self):
        m = self.map
        fid = [-1] * m.dart_count
        count = 0
        for d in range(m.dart_count):
            if fid[d] == -1:
                for x in m.face_cycle(d):
                    fid[x] = count
                count += 1
        return fid, count

    def _side_groups(self, tri):
        """Union faces across every segment not on the triangle's curve."""
        a, b, c = sorted(tri)
        tri_edges = {
            self.map.edges.index(e)
            for e in (edge_key(a, b), edge_key(a, c), edge_key(b, c))
        }
        fid, nf = self._face_ids()
        parent = list(range(nf))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        m = self.map
        for d in range(0, m.dart_count, 2):
            if m.dart_edge[d] in tri_edges:
                continue
            ra, rb = find(fid[d]), find(fid[d ^ 1])
            if ra != rb:
                parent[ra] = rb
        return fid, find

    def region_partition(self, tri) -> SidePartition:
        """Drawing-level side partition of a triangle's simple closed curve.

        The curve of a triangle separates the sphere into two regions; each
        remaining vertex lies in one of them.  Sides are ordered by smallest
        member, empty side last.
        """
        fid, find = self._side_groups(tri)
        m = self.map
        groups = {}
        tri_set = set(tri)
        for v in range(1, m.n_orig + 1):
            if v in tri_set:
                continue
            g = find(fid[m.first_dart[v]])
            groups.setdefault(g, set()).add(v)
        roots = {find(fid[d]) for d in range(m.dart_count)}
        if len(roots) != 2:
            raise AssertionError(
                f"triangle curve split the sphere into {len(roots)} regions"
            )
        sides = [frozenset(groups.get(r, ())) for r in roots]
        sides.sort(key=lambda s: (not s, min(s) if s else 0))
        return SidePartition(sides[0], sides[1])

    def classify_with_outer(self, tri, outer_dart: int) -> CellClass:
        """Triangle class when the face of ``outer_dart`` is the outer cell."""
        fid, find = self._side_groups(tri)
        m = self.map
        outer_group = find(fid[outer_dart])
        inside, outside = set(), set()
        tri_set = set(tri)
        for v in range(1, m.n_orig + 1):
            if v in tri_set:
                continue
            g = find(fid[m.first_dart[v]])
            (outside if g == outer_group else inside).add(v)
        if not inside and not outside:
            return CellClass.BOTH_EMPTY
        if not inside:
            return CellClass.INTERIOR_EMPTY
        if not outside:
            return CellClass.EXTERIOR_EMPTY
        return CellClass.NON_EMPTY


def realize(
    rs: RotationSystem,
    *,
    node_budget: int | None = None,
    edge_order: Sequence[tuple[int, int]] | None = None,
    paranoid: bool = False,
    guided: bool = True,
) -> RealizedDrawing | None:
    """Find a good drawing realizing ``rs``, or None if there is none.

    The search is exhaustive, so None is a certificate of unrealizability.
    ``node_budget`` caps explored routing states; exceeding it raises
    :class:`SearchBudgetExceeded`.  ``edge_order`` overrides the default
    lexicographic insertion order (every prefix must stay connected).
    ``paranoid`` re-checks map invariants after every routing step.

    With ``guided`` (the default for n >= 5) the search first derives the
    full set of crossing pairs any good drawing of ``rs`` must have: each
    4-vertex restriction is itself a rotation system of K_4, whose unique
    crossing is read off a precomputed table.  Routing then only ever
    crosses required pairs and only completes an edge once every required
    crossing with already-placed edges has happened, which prunes the
    search to (nearly) just the order of crossings along each edge.  If
    some restriction is not realizable the system is rejected outright.
    """
    if edge_order is None:
        edges = _lex_edges(rs.n)
    else:
        edges = [edge_key(*e) for e in edge_order]
        if sorted(edges) != _lex_edges(rs.n):
            raise ValueError("edge order must list every edge exactly once")
    b = _Builder(rs, edges)
    b.node_budget = node_budget
    b.paranoid = paranoid
    if guided and rs.n >= 5:
        try:
            pairs = crossing_pairs(rs, k4_table())
        except UnrealizableError:
            return None
        idx = {e: i for i, e in enumerate(edges)}
        required: list[set[int]] = [set() for _ in edges]
        for e1, e2 in pairs:
            required[idx[e1]].add(idx[e2])
            required[idx[e2]].add(idx[e1])
        b.required = required
    limit = sys.getrecursionlimit()
    if limit < 20000:
        sys.setrecursionlimit(20000)
    try:
        found = b._rec(0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return None
    drawing = RealizedDrawing(rs, b.snapshot())
    _validate_drawing(drawing)
    return drawing


def _validate_drawing(dr: RealizedDrawing) -> None:
    m = dr.map
    assert m.euler_characteristic() == 2, "drawing is not spherical"
    assert dr.extract_rotation() == dr.source, "rotation mismatch"
    for z in m.crossing_vertices:
        rot = m.rotation_at(z)
        assert len(rot) == 4, "crossing vertex degree != 4"
        es = [m.dart_edge[d] for d in rot]
        assert es[0] == es[2] and es[1] == es[3] and es[0] != es[1], \
            "crossing without proper alternation"


# ---------------------------------------------------------------------------
# .draw text format
# ---------------------------------------------------------------------------

def dump_draw(dr: RealizedDrawing) -> str:
    """Serialize a drawing: the rotation block, then per-edge crossing lists.

    Each edge line lists, in order along the edge from its smaller endpoint,
    the edges it crosses as "x-y" tokens with a +/- orientation suffix.
    """
    lines = [dump_rot(dr.source).rstrip("\n"), "crossings:"]
    for i, (u, v) in enumerate(dr.edges):
        toks = []
        for other, _z, sign in dr.chain_crossings(i):
            x, y = dr.edges[other]
            toks.append(f"{x}-{y}{sign}")
        lines.append(f"edge {u} {v}:" + (" " + " ".join(toks) if toks else ""))
    return "\n".join(lines) + "\n"


def load_draw(text: str) -> RealizedDrawing:
    """Parse and rebuild a drawing saved by :func:`dump_draw`.

    The map is reconstructed from the crossing lists and then validated
    (spherical Euler count, rotation extraction, crossing alternation), so
    inconsistent input fails with :class:`DrawParseError`.
    """
    head, sep, tail = text.partition("crossings:")
    if not sep:
        raise DrawParseError("missing 'crossings:' section")
    try:
        rs = parse_rot(head)
    except ValueError as exc:
        raise DrawParseError(f"bad rotation block: {exc}") from None
    edges = _lex_edges(rs.n)
    edge_index = {e: i for i, e in enumerate(edges)}
    lists: dict[int, list[tuple[int, str]]] = {}
    for raw in tail.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("edge "):
            raise DrawParseError(f"unexpected line in crossings section: {line!r}")
        headpart, _, tokpart = line.partition(":")
        bits = headpart.split()
        if len(bits) != 3:
            raise DrawParseError(f"bad edge header: {line!r}")
        try:
            u, v = int(bits[1]), int(bits[2])
        except ValueError:
            raise DrawParseError(f"bad edge header: {line!r}") from None
        e = edge_index.get(edge_key(u, v))
        if e is None:
            raise DrawParseError(f"unknown edge {u}-{v}")
        if e in lists:
            raise DrawParseError(f"edge {u}-{v} listed twice")
        row = []
        for tok in tokpart.split():
            sign = tok[-1]
            if sign not in "+-":
                raise DrawParseError(f"crossing token missing sign: {tok!r}")
            parts = tok[:-1].split("-")
            if len(parts) != 2:
                raise DrawParseError(f"bad crossing token: {tok!r}")
            try:
                x, y = int(parts[0]), int(parts[1])
            except ValueError:
                raise DrawParseError(f"bad crossing token: {tok!r}") from None
            f = edge_index.get(edge_key(x, y))
            if f is None:
                raise DrawParseError(f"crossing names unknown edge {x}-{y}")
            row.append((f, sign))
        lists[e] = row
    for e, (u, v) in enumerate(edges):
        if e not in lists:
            raise DrawParseError(f"no crossing line for edge {u}-{v}")
    return _rebuild(rs, edges, lists)


def _rebuild(rs: RotationSystem, edges, lists) -> RealizedDrawing:
    n = rs.n
    # pair consistency and crossing vertex allocation
    zid: dict[tuple[int, int], int] = {}
    sign_of: dict[tuple[int, int], str] = {}
    next_v = n + 1
    for e, row in lists.items():
        seen = set()
        for f, sign in row:
            if f == e:
                raise DrawParseError(f"edge {edges[e]} crosses itself")
            if f in seen:
                raise DrawParseError(
                    f"edges {edges[e]} and {edges[f]} cross twice"
                )
            seen.add(f)
            if set(edges[e]) & set(edges[f]):
                raise DrawParseError(
                    f"adjacent edges {edges[e]} and {edges[f]} cross"
                )
            key = (min(e, f), max(e, f))
            sign_of[(e, f)] = sign
            if key not in zid:
                zid[key] = next_v
                next_v += 1
    for (e, f) in list(zid):
        if (e, f) not in sign_of or (f, e) not in sign_of:
            raise DrawParseError(
                f"crossing of {edges[e]} and {edges[f]} listed on only one edge"
            )
    nxt: list[int] = []
    org: list[int] = []
    dart_edge: list[int] = []
    chains: dict[int, list[int]] = {}
    for e, row in lists.items():
        segs = len(row) + 1
        d0 = len(nxt)
        u, v = edges[e]
        nodes = [u] + [zid[(min(e, f), max(e, f))] for f, _ in row] + [v]
        ds = []
        for i in range(segs):
            d = len(nxt)
            nxt.extend((-1, -1))
            org.extend((nodes[i], nodes[i + 1]))
            dart_edge.extend((e, e))
            ds.append(d)
        chains[e] = ds
    first_dart = [-1] * next_v
    cross_pair: list = [None] * next_v
    prv = [-1] * len(nxt)

    def set_cycle(darts):
        for i, d in enumerate(darts):
            nxt[d] = darts[(i + 1) % len(darts)]

    # original vertices: rotation row order
    for v in range(1, n + 1):
        row_darts = []
        for nbr in rs.rots[v]:
            e = _edge_idx(edges, v, nbr)
            ch = chains[e]
            row_darts.append(ch[0] if v < nbr else ch[-1] ^ 1)
        set_cycle(row_darts)
        first_dart[v] = row_darts[0]
    # crossing vertices: counterclockwise (e_out, f_sign, e_in_twin, f_other)
    for (e, f), z in zid.items():
        pe = _chain_pos(lists[e], f)
        pf = _chain_pos(lists[f], e)
        e_out = chains[e][pe + 1]
        e_in_tw = chains[e][pe] ^ 1
        f_out = chains[f][pf + 1]
        f_in_tw = chains[f][pf] ^ 1
        s = sign_of[(e, f)]
        f_first = f_out if s == "+" else f_in_tw
        f_second = f_in_tw if s == "+" else f_out
        set_cycle([e_out, f_first, e_in_tw, f_second])
        first_dart[z] = e_out
        cross_pair[z] = (e, f)
    for d in range(len(nxt)):
        if nxt[d] == -1:
            raise DrawParseError("incomplete map: dart without rotation")
        prv[nxt[d]] = d
    end_darts = tuple((chains[e][0], chains[e][-1] ^ 1) for e in range(len(edges)))
    pmap = PlanarMap(
        n_orig=n,
        edges=tuple(edges),
        nxt=tuple(nxt),
        prv=tuple(prv),
        org=tuple(org),
        dart_edge=tuple(dart_edge),
        first_dart=tuple(first_dart),
        cross_pair=tuple(cross_pair),
        end_darts=end_darts,
    )
    dr = RealizedDrawing(rs, pmap)
    try:
        _validate_drawing(dr)
    except AssertionError as exc:
        raise DrawParseError(f"inconsistent drawing data: {exc}") from None
    # the declared signs must agree with the rebuilt geometry
    for e in range(len(edges)):
        rebuilt = [(o, s) for o, _z, s in dr.chain_crossings(e)]
        if rebuilt != lists[e]:
            raise DrawParseError(
                f"crossing list of edge {edges[e]} inconsistent with the map"
            )
    return dr


def _edge_idx(edges, a, b) -> int:
    # edges is the lex list of all pairs; closed-form index
    u, v = edge_key(a, b)
    n = edges[-1][1]
    return (u - 1) * n - u * (u + 1) // 2 + v - 1


def _chain_pos(row, f) -> int:
    for i, (g, _s) in enumerate(row):
        if g == f:
            return i
    raise DrawParseError("crossing lists disagree")


# ---------------------------------------------------------------------------
# the 16 rotation systems of K_4
# ---------------------------------------------------------------------------

def k4_system_from_bits(bits: int) -> RotationSystem:
    """K_4 system from 4 orientation bits, vertex 1 the highest bit.

    Bit 0 keeps the others in ascending cyclic order (x, y, z); bit 1 swaps
    to (x, z, y).
    """
    rows = []
    for v in range(1, 5):
        x, y, z = (w for w in range(1, 5) if w != v)
        bit = (bits >> (4 - v)) & 1
        rows.append((x, y, z) if bit == 0 else (x, z, y))
    return RotationSystem._trusted(4, rows)


def all_k4_rotation_systems() -> list[RotationSystem]:
    return [k4_system_from_bits(b) for b in range(16)]


class K4CrossingTable:
    """Realizability and forced crossing of every K_4 rotation system.

    A drawing of K_4 has at most one crossing, and the rotation system alone
    decides whether a drawing exists and which pair crosses.  ``outcome`` is
    None (unrealizable), () (planar) or a pair of local edge keys.
    """

    def __init__(self, outcomes: dict, bits_realizable: tuple):
        self.outcomes = outcomes
        self.bits_realizable = bits_realizable

    def outcome(self, rs4: RotationSystem):
        if rs4.n != 4:
            raise ValueError(f"need a 4-vertex system, got n={rs4.n}")
        try:
            return self.outcomes[rs4.rots]
        except KeyError:
            raise AssertionError("unknown K4 system") from None


def build_k4_table() -> K4CrossingTable:
    """Realize all 16 K_4 systems and tabulate crossings."""
    outcomes = {}
    bits = []
    for b in range(16):
        rs = k4_system_from_bits(b)
        dr = realize(rs)
        if dr is None:
            outcomes[rs.rots] = None
            bits.append(False)
        else:
            cs = dr.crossing_set()
            outcomes[rs.rots] = tuple(sorted(cs))[0] if cs else ()
            bits.append(True)
    return K4CrossingTable(outcomes, tuple(bits))


_TABLE: K4CrossingTable | None = None


def k4_table() -> K4CrossingTable:
    """Shared lazily built K_4 lookup table."""
    global _TABLE
    if _TABLE is None:
        _TABLE = build_k4_table()
    return _TABLE
