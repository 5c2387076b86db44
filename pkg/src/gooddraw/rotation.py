"""Rotation systems of complete graphs and triangle-emptiness analytics.

The central object is :class:`RotationSystem`: for every vertex v of K_n it
records the cyclic order in which the edges to the other n-1 vertices leave v.
All cyclic sequences are read in one fixed global direction (think
"counterclockwise" on an oriented sphere) and are stored phase-normalized,
smallest neighbor first, so two systems compare equal exactly when they carry
the same combinatorial data.

Whether a triangle is empty is decided from the rotation system alone.  For a
triangle a < b < c, the rotation of each triangle vertex is split by its two
triangle edges into two arcs; reading the triple cyclically, the arc from the
edge toward the predecessor to the edge toward the successor is the "right"
arc, the remainder the "left" arc.  Every other vertex lands in one arc per
triangle vertex and is assigned the side it hits at least twice.  A triangle
is empty when one side receives no vertex at all.  For systems that admit a
good drawing this agrees with the drawing-level partition computed in
:mod:`gooddraw.drawing`, which is the authority; the rotation-level rule is
just much cheaper.

Vertex analytics: t(v) counts empty triangles incident to v, l(v) counts
triangles not containing v in which v sits alone on its side ("lonely"), and a
vertex is "lucky" when t(v) - l(v) >= 2.  Deleting a lucky vertex from a
realizable system with n >= 5 strictly decreases the number of empty
triangles, which is what makes these quantities worth tabulating.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, NamedTuple

__all__ = [
    "RotationSystem",
    "SidePartition",
    "VertexStats",
    "CanonicalForm",
    "UnrealizableError",
    "RotParseError",
    "validate",
    "convex_rotation",
    "side_partition",
    "is_empty",
    "empty_triangles",
    "vertex_stats",
    "canonical_form",
    "canonical_key",
    "rotation_from_key",
    "is_mirror_symmetric",
    "crossing_pairs",
    "empty_star_triangles",
    "parse_rot",
    "dump_rot",
    "edge_key",
]

_B36 = "0123456789abcdefghijklmnopqrstuvwxyz"
_B36_INDEX = {c: i for i, c in enumerate(_B36)}


class UnrealizableError(Exception):
    """Raised when a rotation system is certified to admit no good drawing.

    ``witness`` names a vertex subset whose restriction already fails.
    """

    def __init__(self, message: str, witness: tuple[int, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class RotParseError(ValueError):
    """Malformed .rot input; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


def _phase_normalized(seq: tuple[int, ...]) -> tuple[int, ...]:
    """Rotate a cyclic sequence so its smallest entry comes first."""
    if not seq:
        return seq
    k = seq.index(min(seq))
    return seq[k:] + seq[:k]


def _coerce_rows(rotations, n: int | None):
    """Raw rotation data -> (n, rows) with rows[0] = () and no validation."""
    if isinstance(rotations, Mapping):
        if n is None:
            n = len(rotations)
        rows = [()] * (n + 1)
        for v, row in rotations.items():
            if not isinstance(v, int) or not 1 <= v <= n:
                return n, None, f"unexpected vertex {v!r}"
            rows[v] = tuple(row)
    else:
        seqs = [tuple(row) for row in rotations]
        if n is None:
            n = len(seqs)
        if len(seqs) != n:
            return n, None, f"expected {n} rotations, got {len(seqs)}"
        rows = [()] + seqs
    return n, tuple(rows), None


def validate(n: int, rotations) -> str | None:
    """Check raw rotation data; return None if valid, else a description.

    ``rotations`` is a mapping {vertex: neighbor sequence} or a sequence of
    n neighbor sequences for vertices 1..n.  Valid means: n >= 3 and every
    rotation is a permutation of the other vertices.  The first offending
    vertex (smallest label) is reported.
    """
    if n < 3:
        return f"need at least 3 vertices, got n={n}"
    n, rows, err = _coerce_rows(rotations, n)
    if err:
        return err
    for v in range(1, n + 1):
        row = rows[v]
        if not row:
            return f"no rotation given for vertex {v}"
        if len(row) != n - 1:
            return f"vertex {v}: expected {n - 1} neighbors, got {len(row)}"
        seen = set()
        for x in row:
            if x == v:
                return f"self-reference at {v}"
            if not isinstance(x, int) or not 1 <= x <= n:
                return f"vertex {v}: neighbor {x} out of range"
            if x in seen:
                return f"vertex {v}: duplicate neighbor {x}"
            seen.add(x)
        # n-1 distinct in-range non-self entries are exactly the other vertices
    return None


class RotationSystem:
    """Immutable rotation system of K_n.

    ``rots[v]`` is the phase-normalized cyclic neighbor order of vertex v
    (``rots[0]`` is an empty placeholder).  Construction validates; use the
    mapping or row-sequence form accepted by :func:`validate`.
    """

    __slots__ = ("n", "rots")

    def __init__(self, rotations, n: int | None = None):
        if not isinstance(rotations, Mapping):
            rotations = [tuple(row) for row in rotations]
        if n is None:
            n = len(rotations)
        msg = validate(n, rotations)
        if msg:
            raise ValueError(msg)
        _, rows, _ = _coerce_rows(rotations, n)
        self.n = n
        self.rots = tuple(_phase_normalized(row) for row in rows)

    @classmethod
    def _trusted(cls, n: int, rows) -> "RotationSystem":
        """Fast path for internally generated data; normalizes, skips checks.

        ``rows`` holds the rotations of vertices 1..n, without placeholder.
        """
        self = object.__new__(cls)
        self.n = n
        self.rots = ((),) + tuple(_phase_normalized(tuple(row)) for row in rows)
        return self

    def rotation(self, v: int) -> tuple[int, ...]:
        return self.rots[v]

    def as_dict(self) -> dict[int, tuple[int, ...]]:
        return {v: self.rots[v] for v in range(1, self.n + 1)}

    def mirror(self) -> "RotationSystem":
        """Reverse every rotation (the drawing seen from the other sphere side)."""
        return RotationSystem._trusted(self.n, (row[::-1] for row in self.rots[1:]))

    def relabel(self, perm) -> "RotationSystem":
        """Apply a vertex relabeling.

        ``perm`` maps old to new labels: a mapping {old: new} or a sequence
        whose i-th entry is the image of vertex i+1.  Must be a bijection on
        1..n.
        """
        n = self.n
        if isinstance(perm, Mapping):
            images = [perm.get(v) for v in range(1, n + 1)]
        else:
            images = list(perm)
        if sorted(x for x in images if isinstance(x, int)) != list(range(1, n + 1)):
            raise ValueError(f"relabeling is not a bijection on 1..{n}")
        table = [0] + images  # table[old] = new
        rows = [()] * n
        for v in range(1, n + 1):
            rows[table[v] - 1] = tuple(table[x] for x in self.rots[v])
        return RotationSystem._trusted(n, rows)

    def restrict(self, keep: Iterable[int]) -> "RotationSystem":
        """Induced system on a vertex subset, relabeled 1..|keep| order-preserving."""
        sub = sorted(set(keep))
        if len(sub) < 3:
            raise ValueError(f"restriction needs at least 3 vertices, got {len(sub)}")
        if sub[0] < 1 or sub[-1] > self.n:
            raise ValueError(f"restriction vertices out of range: {sub}")
        table = {old: i + 1 for i, old in enumerate(sub)}
        rows = [tuple(table[x] for x in self.rots[v] if x in table) for v in sub]
        return RotationSystem._trusted(len(sub), rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RotationSystem)
            and self.n == other.n
            and self.rots == other.rots
        )

    def __hash__(self) -> int:
        return hash(self.rots)

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {self.rots[v]}" for v in range(1, self.n + 1))
        return f"RotationSystem({{{inner}}})"


def convex_rotation(n: int) -> RotationSystem:
    """Rotation system of n points in convex position labeled along the hull.

    Around vertex i the others appear as i+1, i+2, ..., i+n-1 (mod n).
    """
    if n < 3:
        raise ValueError(f"need at least 3 vertices, got n={n}")
    rows = [
        tuple((i + k - 1) % n + 1 for k in range(1, n))
        for i in range(1, n + 1)
    ]
    return RotationSystem._trusted(n, rows)


# ---------------------------------------------------------------------------
# Triangle sides and emptiness
# ---------------------------------------------------------------------------

class SidePartition(NamedTuple):
    """The two sides of a triangle, as sets of non-triangle vertices.

    Which side is called left/right depends on the orientation convention;
    compare with :meth:`unordered` when that distinction is irrelevant.
    """

    left: frozenset[int]
    right: frozenset[int]

    def unordered(self) -> frozenset[frozenset[int]]:
        return frozenset((self.left, self.right))


class VertexStats(NamedTuple):
    t: int        # empty triangles incident to the vertex
    l: int        # triangles where the vertex is alone on its side
    lucky: bool   # t - l >= 2


def _check_triangle(n: int, triangle) -> tuple[int, int, int]:
    tri = tuple(sorted(triangle))
    if len(tri) != 3 or len(set(tri)) != 3:
        raise ValueError(f"not a triangle: {triangle!r}")
    if tri[0] < 1 or tri[2] > n:
        raise ValueError(f"triangle vertex out of range: {triangle!r}")
    return tri


def _side_votes(rots, a: int, b: int, c: int):
    """Right-side vote counts for the ordered triple (a, b, c).

    At each triple vertex the rotation arc running from the edge toward the
    cyclic predecessor to the edge toward the cyclic successor is the right
    arc; a vertex inside it gets one vote.
    """
    votes: dict[int, int] = {}
    order = (a, b, c)
    for i in range(3):
        v = order[i]
        pred = order[i - 1]
        succ = order[(i + 1) % 3]
        row = rots[v]
        m = len(row)
        j = (row.index(pred) + 1) % m
        while row[j] != succ:
            x = row[j]
            votes[x] = votes.get(x, 0) + 1
            j = (j + 1) % m
    return votes


def side_partition(rs: RotationSystem, triangle) -> SidePartition:
    """Split the non-triangle vertices into the two sides of a triangle.

    Each outside vertex appears in one arc per triangle vertex and is assigned
    the side it hits at least twice (out of three memberships a majority
    always exists).  The unordered partition is invariant under relabeling and
    mirroring.
    """
    a, b, c = _check_triangle(rs.n, triangle)
    votes = _side_votes(rs.rots, a, b, c)
    left, right = [], []
    for x in range(1, rs.n + 1):
        if x in (a, b, c):
            continue
        (right if votes.get(x, 0) >= 2 else left).append(x)
    return SidePartition(frozenset(left), frozenset(right))


def is_empty(rs: RotationSystem, triangle) -> bool:
    """True when every non-triangle vertex lies on one side of the triangle."""
    tri = _check_triangle(rs.n, triangle)
    if rs.n == 3:
        return True
    part = side_partition(rs, tri)
    return not part.left or not part.right


def empty_triangles(rs: RotationSystem) -> list[tuple[int, int, int]]:
    """All empty triangles, in lexicographic order."""
    empties, _, _ = _survey(rs.n, rs.rots)
    return empties


def _survey(n: int, rots):
    """One sweep over all triangles: (empty list, t-vector, l-vector).

    The vectors are 1-indexed lists of length n+1 (index 0 unused).
    """
    t = [0] * (n + 1)
    l = [0] * (n + 1)
    empties = []
    for tri in itertools.combinations(range(1, n + 1), 3):
        a, b, c = tri
        votes = _side_votes(rots, a, b, c)
        left_n = 0
        right_n = 0
        left_last = right_last = 0
        for x in range(1, n + 1):
            if x == a or x == b or x == c:
                continue
            if votes.get(x, 0) >= 2:
                right_n += 1
                right_last = x
            else:
                left_n += 1
                left_last = x
        if left_n == 0 or right_n == 0:
            empties.append(tri)
            t[a] += 1
            t[b] += 1
            t[c] += 1
        if left_n == 1:
            l[left_last] += 1
        if right_n == 1:
            l[right_last] += 1
    return empties, t, l


def vertex_stats(rs: RotationSystem, v: int) -> VertexStats:
    """t, l and luckiness of one vertex.  Requires n >= 4."""
    if rs.n < 4:
        raise ValueError(f"vertex statistics need n >= 4, got n={rs.n}")
    if not 1 <= v <= rs.n:
        raise ValueError(f"vertex {v} out of range")
    _, t, l = _survey(rs.n, rs.rots)
    return VertexStats(t[v], l[v], t[v] - l[v] >= 2)


# ---------------------------------------------------------------------------
# Canonical form under relabeling + mirror
# ---------------------------------------------------------------------------

class CanonicalForm(NamedTuple):
    """Canonical key plus the certificate transforming the input into it.

    ``relabel(mirror if mirrored else identity, perm)`` applied to the input
    yields the system encoded by ``key``.  ``perm[i]`` is the new label of
    vertex i+1.
    """

    key: str
    perm: tuple[int, ...]
    mirrored: bool


def _canonical_rows(n: int, rots, include_mirror: bool = True):
    """Minimal relabeled form over the traversal labeling family.

    A labeling is generated by a root vertex u, a first neighbor, and a
    reading direction: u becomes 1 and the rotation of u, read from the chosen
    neighbor in the chosen direction, becomes 2..n.  Relabelings permute this
    family and mirroring swaps its direction halves, so the minimum taken over
    all 2n(n-1) members is constant exactly on weak-isomorphism classes.
    Returns (rows, perm, mirrored).
    """
    best = None
    best_cert = None
    directions = (False, True) if include_mirror else (False,)
    for mirrored in directions:
        rows_dir = rots if not mirrored else tuple(row[::-1] for row in rots)
        for u in range(1, n + 1):
            base = rows_dir[u]
            for start in range(n - 1):
                order = base[start:] + base[:start]
                newlab = [0] * (n + 1)
                newlab[u] = 1
                nl = 2
                for x in order:
                    newlab[x] = nl
                    nl += 1
                cand = []
                decided = None  # None: tied with best so far
                for pos in range(n):
                    old = u if pos == 0 else order[pos - 1]
                    mapped = _phase_normalized(
                        tuple(newlab[x] for x in rows_dir[old])
                    )
                    cand.append(mapped)
                    if best is not None and decided is None:
                        ref = best[pos]
                        if mapped < ref:
                            decided = True
                        elif mapped > ref:
                            decided = False
                            break
                if best is None or decided:
                    best = cand
                    best_cert = (tuple(newlab[1:]), mirrored)
    return tuple(best), best_cert[0], best_cert[1]


def _rows_to_key(rows) -> str:
    return "-".join("".join(_B36[x] for x in row) for row in rows)


def canonical_form(rs: RotationSystem) -> CanonicalForm:
    """Canonical representative of the weak-isomorphism class of ``rs``.

    Two systems get equal keys iff one can be transformed into the other by a
    vertex relabeling, optionally composed with a mirror.  Deterministic.
    """
    rows, perm, mirrored = _canonical_rows(rs.n, rs.rots)
    return CanonicalForm(_rows_to_key(rows), perm, mirrored)


def canonical_key(rs: RotationSystem) -> str:
    rows, _, _ = _canonical_rows(rs.n, rs.rots)
    return _rows_to_key(rows)


def rotation_from_key(key: str) -> RotationSystem:
    """Decode a canonical key back into a rotation system."""
    try:
        rows = [tuple(_B36_INDEX[c] for c in part) for part in key.split("-")]
    except KeyError as exc:
        raise ValueError(f"bad key character: {exc}") from None
    rs = RotationSystem(rows)
    return rs


def is_mirror_symmetric(rs: RotationSystem) -> bool:
    """True when the mirror image is reachable by relabeling alone."""
    plain, _, _ = _canonical_rows(rs.n, rs.rots, include_mirror=False)
    flipped, _, _ = _canonical_rows(
        rs.n, tuple(row[::-1] for row in rs.rots), include_mirror=False
    )
    return plain == flipped


# ---------------------------------------------------------------------------
# Crossings and star triangles (through the 4-point table)
# ---------------------------------------------------------------------------

def crossing_pairs(rs: RotationSystem, table) -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """Edge pairs that cross in every good drawing of ``rs``.

    Each 4-vertex restriction determines its crossing pair (or none) via the
    lookup ``table`` (see :func:`gooddraw.drawing.build_k4_table`).  Raises
    :class:`UnrealizableError` when some restriction admits no drawing, which
    certifies that ``rs`` admits none either.
    """
    pairs = set()
    for sub in itertools.combinations(range(1, rs.n + 1), 4):
        out = table.outcome(rs.restrict(sub))
        if out is None:
            raise UnrealizableError(
                f"4-point restriction {sub} admits no good drawing", witness=sub
            )
        if out:
            (i, j), (k, m) = out
            e = edge_key(sub[i - 1], sub[j - 1])
            f = edge_key(sub[k - 1], sub[m - 1])
            pairs.add(tuple(sorted((e, f))))
    return pairs


def empty_star_triangles(rs: RotationSystem, v: int, crossings) -> list[tuple[int, int, int]]:
    """Empty triangles {v,u,w} whose far edge uw no edge at v crosses.

    ``crossings`` is the pair set from :func:`crossing_pairs`.  u and w must
    be rotation-adjacent at v for such a triangle to be empty, and every
    rotation-adjacent uncrossed pair gives one, so the scan below is exact.
    """
    if not 1 <= v <= rs.n:
        raise ValueError(f"vertex {v} out of range")
    blocked = set()
    for e, f in crossings:
        if v in e:
            blocked.add(f)
        if v in f:
            blocked.add(e)
    row = rs.rots[v]
    m = len(row)
    out = []
    for i in range(m):
        u, w = row[i], row[(i + 1) % m]
        if edge_key(u, w) not in blocked:
            out.append(tuple(sorted((v, u, w))))
    return sorted(set(out))


# ---------------------------------------------------------------------------
# .rot text format
# ---------------------------------------------------------------------------

def dump_rot(rs: RotationSystem) -> str:
    """Serialize: first line n, then one "v: neighbors" line per vertex."""
    lines = [str(rs.n)]
    for v in range(1, rs.n + 1):
        lines.append(f"{v}: " + " ".join(str(x) for x in rs.rots[v]))
    return "\n".join(lines) + "\n"


def parse_rot(text: str) -> RotationSystem:
    """Parse the .rot format; raises :class:`RotParseError` with a line number.

    Lines whose first non-blank character is '#' are comments.  Vertex lines
    are "v: p1 p2 ... p_{n-1}", 1-based, in any order, each vertex exactly
    once.  The stored phase is irrelevant.
    """
    n = None
    rows: dict[int, tuple[int, ...]] = {}
    row_line: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise RotParseError(lineno, f"expected vertex count, got {line!r}")
            if n < 3:
                raise RotParseError(lineno, f"need at least 3 vertices, got n={n}")
            continue
        if ":" not in line:
            raise RotParseError(lineno, "expected 'vertex: neighbors' line")
        head, _, tail = line.partition(":")
        try:
            v = int(head)
        except ValueError:
            raise RotParseError(lineno, f"bad vertex label {head.strip()!r}")
        if not 1 <= v <= n:
            raise RotParseError(lineno, f"vertex {v} out of range 1..{n}")
        if v in rows:
            raise RotParseError(lineno, f"vertex {v} listed twice")
        try:
            row = tuple(int(tok) for tok in tail.split())
        except ValueError:
            raise RotParseError(lineno, "neighbors must be integers")
        msg = _row_error(n, v, row)
        if msg:
            raise RotParseError(lineno, msg)
        rows[v] = row
        row_line[v] = lineno
    if n is None:
        raise RotParseError(1, "empty input")
    last = max(row_line.values(), default=1)
    for v in range(1, n + 1):
        if v not in rows:
            raise RotParseError(last, f"no rotation given for vertex {v}")
    return RotationSystem(rows, n)


def _row_error(n: int, v: int, row: tuple[int, ...]) -> str | None:
    """Per-vertex part of :func:`validate`, for line-accurate parse errors."""
    if len(row) != n - 1:
        return f"vertex {v}: expected {n - 1} neighbors, got {len(row)}"
    seen = set()
    for x in row:
        if x == v:
            return f"self-reference at {v}"
        if not 1 <= x <= n:
            return f"vertex {v}: neighbor {x} out of range"
        if x in seen:
            return f"vertex {v}: duplicate neighbor {x}"
        seen.add(x)
    return None
