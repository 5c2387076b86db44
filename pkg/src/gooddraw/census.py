"""Census of realizable rotation systems of K_n up to relabeling and mirror.

The census is built level by level.  Deleting a vertex from a good drawing
of K_{n+1} leaves a good drawing of K_n, so every realizable class at level
n+1 restricts to one at level n; conversely each level-(n+1) class has a
labeled representative whose restriction to 1..n is exactly the stored
canonical representative of some level-n class, with the new vertex labeled
n+1.  Extending every stored representative by every cyclic rotation of the
new vertex and every insertion gap in the old rotations therefore reaches
every class, and deduplicating by canonical key keeps exactly one record
per class.

Candidates are pruned during generation: a 4-subset's restricted rotation
system decides realizability (and the crossing pair) by table lookup, so
gap choices are filtered subset by subset before a candidate is ever built,
and full realization runs once per new canonical key.

Frontiers persist as hashed text snapshots that are byte-stable and safe to
resume mid-extension; class counts are independent of worker count and of
the order work is scheduled.
"""

from __future__ import annotations

import hashlib
import itertools
import multiprocessing
import os
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from gooddraw.rotation import (
    RotationSystem,
    _survey,
    canonical_key,
    crossing_pairs,
    edge_key,
    empty_star_triangles,
    rotation_from_key,
    is_mirror_symmetric,
)
from gooddraw.drawing import k4_table, realize

__all__ = [
    "CensusRecord",
    "Frontier",
    "CorruptSnapshot",
    "ClaimReport",
    "base_frontier",
    "extend",
    "enumerate_classes",
    "save_frontier",
    "load_frontier",
    "dump_census",
    "load_census",
    "summarize",
    "CensusSummary",
    "claim_names",
    "verify_claim",
]

SNAPSHOT_MAGIC = "gooddraw-census 1"


class CorruptSnapshot(ValueError):
    """A snapshot file failed its header, hash, or structure checks."""


class CensusRecord(NamedTuple):
    """One realizable class: canonical key plus its triangle analytics."""

    n: int
    key: str
    empty: int
    t: tuple[int, ...]  # t[v-1]: empty triangles with corner v
    l: tuple[int, ...]  # l[v-1]: triangles where v is alone on a side
    lucky: int  # vertices with t - l >= 2
    crossings: int

    def to_line(self) -> str:
        return (
            f"n={self.n} key={self.key} empty={self.empty}"
            f" t={','.join(map(str, self.t))}"
            f" l={','.join(map(str, self.l))}"
            f" lucky={self.lucky} crossings={self.crossings}"
        )

    @classmethod
    def from_line(cls, line: str) -> "CensusRecord":
        fields = {}
        for tok in line.split():
            name, sep, val = tok.partition("=")
            if not sep or name in fields:
                raise ValueError(f"bad record token {tok!r}")
            fields[name] = val
        if sorted(fields) != ["crossings", "empty", "key", "l", "lucky", "n", "t"]:
            raise ValueError(f"record fields {sorted(fields)} are wrong")
        try:
            return cls(
                n=int(fields["n"]),
                key=fields["key"],
                empty=int(fields["empty"]),
                t=tuple(int(x) for x in fields["t"].split(",")),
                l=tuple(int(x) for x in fields["l"].split(",")),
                lucky=int(fields["lucky"]),
                crossings=int(fields["crossings"]),
            )
        except ValueError as exc:
            raise ValueError(f"bad record line {line!r}: {exc}") from None

    def system(self) -> RotationSystem:
        return rotation_from_key(self.key)


class Frontier(NamedTuple):
    """All classes at one level, plus progress of the extension to the next.

    ``records`` is sorted by key.  ``cursor`` counts how many of them have
    already been extended; the classes found so far at level n+1 sit in
    ``partial``.  A fresh frontier has cursor 0 and no partial records.
    """

    n: int
    records: tuple[CensusRecord, ...]
    cursor: int = 0
    partial: tuple[CensusRecord, ...] = ()

    @property
    def complete(self) -> bool:
        return self.cursor == 0 and not self.partial

    def keys(self) -> tuple[str, ...]:
        return tuple(r.key for r in self.records)


def _record_for(key: str, crs: RotationSystem, crossings: int) -> CensusRecord:
    empties, t, l = _survey(crs.n, crs.rots)
    lucky = sum(1 for v in range(1, crs.n + 1) if t[v] - l[v] >= 2)
    return CensusRecord(
        n=crs.n,
        key=key,
        empty=len(empties),
        t=tuple(t[1:]),
        l=tuple(l[1:]),
        lucky=lucky,
        crossings=crossings,
    )


def base_frontier() -> Frontier:
    """The single class of K_3: one triangle, no crossings."""
    rs = RotationSystem({1: (2, 3), 2: (1, 3), 3: (1, 2)})
    key = canonical_key(rs)
    return Frontier(3, (_record_for(key, rotation_from_key(key), 0),))


# ---------------------------------------------------------------------------
# candidate generation
# ---------------------------------------------------------------------------

def _insertions(rows: Sequence[tuple[int, ...]], bits) -> Iterator[tuple]:
    """All extensions of a level-n system by vertex w = n+1 that pass the
    4-subset table on every subset containing w.

    A candidate is a cyclic rotation for w (sequences over 1..n starting
    with 1) plus, per old vertex, a gap where w enters its rotation.  For
    the subset {a, b, v, w} (a < b < v old) each member's restricted
    3-rotation reduces to one bit (ascending or not), and the 4-bit pattern
    indexes ``bits``.  Gaps are assigned vertex by vertex; at vertex v all
    subsets with maximum old vertex v are checked, as a constraint on the
    gap bitmask, so dead branches die as early as possible.
    """
    n = len(rows)
    w = n + 1
    L = n - 1  # old rotation length
    full = (1 << L) - 1
    pos = [None] * (n + 1)
    for v in range(1, n + 1):
        pos[v] = {x: i for i, x in enumerate(rows[v - 1])}

    # triples of old vertices, and for each the data needed at DFS level c:
    # (a, b, d_a, pa, d_b, pb, mask0, ti) where bit_a of subset {a,b,c,w} is
    # 0 iff d_a <= (gap_a - pa) % L, same for b, and mask0 collects c's gaps
    # with bit_c = 0
    tris = list(itertools.combinations(range(1, n + 1), 3))
    tri_index = {t: i for i, t in enumerate(tris)}
    by_level: list[list[tuple]] = [[] for _ in range(n + 1)]
    for ti, (a, b, c) in enumerate(tris):
        d_a = (pos[a][c] - pos[a][b]) % L
        pa = pos[a][b]
        d_b = (pos[b][c] - pos[b][a]) % L
        pb = pos[b][a]
        d_c = (pos[c][b] - pos[c][a]) % L
        pc = pos[c][a]
        mask0 = 0
        for g in range(L):
            if d_c <= (g - pc) % L:
                mask0 |= 1 << g
        by_level[c].append((a, b, d_a, pa, d_b, pb, mask0, ti))

    gaps = [0] * (n + 1)
    suffix = [rows[v - 1] for v in range(1, n + 1)]

    def emit():
        out = []
        for v in range(1, n + 1):
            r = suffix[v - 1]
            g = gaps[v]
            out.append(r[: g + 1] + (w,) + r[g + 1 :])
        return out

    def rec(v: int, wbits) -> Iterator[tuple]:
        if v > n:
            yield emit()
            return
        allowed = full
        for a, b, d_a, pa, d_b, pb, mask0, ti in by_level[v]:
            pre = wbits[ti]
            if d_a > (gaps[a] - pa) % L:
                pre |= 8
            if d_b > (gaps[b] - pb) % L:
                pre |= 4
            if bits[pre]:
                if not bits[pre | 2]:
                    allowed &= mask0
            elif bits[pre | 2]:
                allowed &= full ^ mask0
            else:
                return
            if not allowed:
                return
        for g in range(L):
            if allowed >> g & 1:
                gaps[v] = g
                yield from rec(v + 1, wbits)

    for tail in itertools.permutations(range(2, n + 1)):
        wrot = (1,) + tail
        wpos = {x: i for i, x in enumerate(wrot)}
        wbits = [0] * len(tris)
        for ti, (a, b, c) in enumerate(tris):
            if (wpos[b] - wpos[a]) % n > (wpos[c] - wpos[a]) % n:
                wbits[ti] = 1
        for cand in rec(1, wbits):
            yield cand + [wrot]


def _extend_parent(parent_rows, bits, seen, dead) -> list[CensusRecord]:
    """New class records reachable from one parent representative."""
    out = []
    n1 = len(parent_rows) + 1
    for rows in _insertions(parent_rows, bits):
        cand = RotationSystem._trusted(n1, rows)
        key = canonical_key(cand)
        if key in seen or key in dead:
            continue
        crs = rotation_from_key(key)
        dr = realize(crs)
        if dr is None:
            dead.add(key)
            continue
        rec = _record_for(key, crs, dr.crossing_count)
        seen[key] = rec
        out.append(rec)
    return out


def _extend_parent_task(parent_key: str) -> list[CensusRecord]:
    rows = rotation_from_key(parent_key).rots[1:]
    bits = k4_table().bits_realizable
    return _extend_parent(rows, bits, {}, set())


# ---------------------------------------------------------------------------
# extension driver
# ---------------------------------------------------------------------------

def extend(
    frontier: Frontier,
    *,
    workers: int = 1,
    checkpoint_path: str | None = None,
    checkpoint_every: int = 200,
    stop_after: int | None = None,
    progress: Callable[[str], None] | None = None,
) -> Frontier:
    """Extend a frontier one level, or resume a partially extended one.

    Returns the completed frontier at n+1, unless ``stop_after`` parents
    were processed first, in which case the same-level frontier comes back
    with an advanced cursor (and is checkpointed if a path is given).  The
    result is identical for any ``workers`` count and any interruption
    pattern.
    """
    accum = {rec.key: rec for rec in frontier.partial}
    dead: set[str] = set()
    parents = frontier.records[frontier.cursor :]
    if stop_after is not None:
        parents = parents[:stop_after]
    cursor = frontier.cursor
    since_save = 0

    def harvest(batch: Iterable[CensusRecord]) -> None:
        for rec in batch:
            if rec.key not in accum:
                accum[rec.key] = rec

    def partial_frontier() -> Frontier:
        return Frontier(
            frontier.n,
            frontier.records,
            cursor,
            tuple(sorted(accum.values(), key=lambda r: r.key)),
        )

    if workers <= 1:
        bits = k4_table().bits_realizable
        seen = dict(accum)  # shared within the level: skip known classes early
        for rec in parents:
            rows = rec.system().rots[1:]
            harvest(_extend_parent(rows, bits, seen, dead))
            cursor += 1
            since_save += 1
            if progress is not None:
                progress(f"n={frontier.n} parent {cursor}/{len(frontier.records)}")
            if (
                checkpoint_path
                and since_save >= checkpoint_every
                and cursor < len(frontier.records)
            ):
                save_frontier(partial_frontier(), checkpoint_path)
                since_save = 0
    else:
        with multiprocessing.Pool(workers) as pool:
            for batch in pool.imap(
                _extend_parent_task, [r.key for r in parents], chunksize=4
            ):
                harvest(batch)
                cursor += 1
                since_save += 1
                if progress is not None:
                    progress(
                        f"n={frontier.n} parent {cursor}/{len(frontier.records)}"
                    )
                if (
                    checkpoint_path
                    and since_save >= checkpoint_every
                    and cursor < len(frontier.records)
                ):
                    save_frontier(partial_frontier(), checkpoint_path)
                    since_save = 0

    if cursor < len(frontier.records):
        out = partial_frontier()
    else:
        out = Frontier(
            frontier.n + 1,
            tuple(sorted(accum.values(), key=lambda r: r.key)),
        )
    if checkpoint_path:
        save_frontier(out, checkpoint_path)
    return out


def enumerate_classes(
    n: int,
    *,
    workers: int = 1,
    checkpoint_path: str | None = None,
    progress: Callable[[str], None] | None = None,
) -> list[CensusRecord]:
    """The full census at level n, sorted by canonical key.

    With a checkpoint path, work resumes from whatever the file holds and
    every completed level (and periodic mid-level state) is saved to it.
    """
    if n < 3:
        raise ValueError(f"census starts at n=3, got {n}")
    fr = base_frontier()
    if checkpoint_path and os.path.exists(checkpoint_path):
        fr = load_frontier(checkpoint_path)
        if fr.n > n:
            raise ValueError(
                f"checkpoint is at level {fr.n}, past the requested n={n}"
            )
    while fr.n < n:
        fr = extend(
            fr,
            workers=workers,
            checkpoint_path=checkpoint_path,
            progress=progress,
        )
    return list(fr.records)


# ---------------------------------------------------------------------------
# snapshots and census text
# ---------------------------------------------------------------------------

def save_frontier(frontier: Frontier, path: str) -> None:
    """Write a byte-stable snapshot: header, records, trailing content hash."""
    lines = [SNAPSHOT_MAGIC, f"level {frontier.n}", f"cursor {frontier.cursor}"]
    lines += ["rec " + rec.to_line() for rec in frontier.records]
    if frontier.partial:
        lines.append("partial")
        lines += ["rec " + rec.to_line() for rec in frontier.partial]
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(body + "sha256 " + digest + "\n")
    os.replace(tmp, path)


def load_frontier(path: str) -> Frontier:
    with open(path) as fh:
        text = fh.read()
    body, _, trailer = text.rpartition("sha256 ")
    if not body:
        raise CorruptSnapshot("snapshot has no content hash")
    if hashlib.sha256(body.encode()).hexdigest() != trailer.strip():
        raise CorruptSnapshot("snapshot content hash mismatch")
    lines = body.splitlines()
    if not lines or lines[0] != SNAPSHOT_MAGIC:
        raise CorruptSnapshot(f"bad snapshot header {lines[:1]!r}")
    try:
        level = int(lines[1].split()[1])
        cursor = int(lines[2].split()[1])
    except (IndexError, ValueError):
        raise CorruptSnapshot("bad level/cursor lines") from None
    records: list[CensusRecord] = []
    partial: list[CensusRecord] = []
    bucket = records
    for line in lines[3:]:
        if line == "partial":
            if bucket is partial:
                raise CorruptSnapshot("two partial sections")
            bucket = partial
            continue
        if not line.startswith("rec "):
            raise CorruptSnapshot(f"unexpected snapshot line {line!r}")
        try:
            bucket.append(CensusRecord.from_line(line[4:]))
        except ValueError as exc:
            raise CorruptSnapshot(str(exc)) from None
    for bucket_, n_ in ((records, level), (partial, level + 1)):
        keys = [r.key for r in bucket_]
        if keys != sorted(set(keys)):
            raise CorruptSnapshot("record keys out of order")
        if any(r.n != n_ for r in bucket_):
            raise CorruptSnapshot("record level mismatch")
    if not 0 <= cursor <= len(records):
        raise CorruptSnapshot(f"cursor {cursor} out of range")
    if partial and cursor == 0:
        raise CorruptSnapshot("partial records but cursor at zero")
    return Frontier(level, tuple(records), cursor, tuple(partial))


def dump_census(records: Iterable[CensusRecord]) -> str:
    """One self-describing key=value line per class."""
    return "".join(rec.to_line() + "\n" for rec in records)


def load_census(text: str) -> list[CensusRecord]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(CensusRecord.from_line(line))
    return out


class CensusSummary(NamedTuple):
    n: int
    classes: int  # mirror images identified
    classes_unfolded: int  # mirror images counted separately
    min_empty: int
    max_empty: int
    lucky_free: tuple[str, ...]  # keys of classes where no vertex is lucky


def summarize(records: Sequence[CensusRecord]) -> CensusSummary:
    if not records:
        raise ValueError("no records to summarize")
    n = records[0].n
    asym = sum(1 for r in records if not is_mirror_symmetric(r.system()))
    return CensusSummary(
        n=n,
        classes=len(records),
        classes_unfolded=len(records) + asym,
        min_empty=min(r.empty for r in records),
        max_empty=max(r.empty for r in records),
        lucky_free=tuple(r.key for r in records if r.lucky == 0),
    )


# ---------------------------------------------------------------------------
# claims
# ---------------------------------------------------------------------------

class ClaimReport(NamedTuple):
    claim: str
    n: int
    ok: bool
    classes: int
    counterexample: str | None


def _class_crossings(rs: RotationSystem) -> dict:
    by_edge: dict = {}
    for e, f in crossing_pairs(rs, k4_table()):
        by_edge.setdefault(e, set()).add(f)
        by_edge.setdefault(f, set()).add(e)
    return by_edge


def _check_theorem_n(rec: CensusRecord) -> str | None:
    if rec.empty < rec.n:
        return f"key={rec.key} empty={rec.empty} < n={rec.n}"
    return None


def _check_obs_2n4(rec: CensusRecord) -> str | None:
    if rec.empty < 2 * rec.n - 4:
        return f"key={rec.key} empty={rec.empty} < 2n-4={2 * rec.n - 4}"
    return None


def _check_two_star(rec: CensusRecord) -> str | None:
    rs = rec.system()
    pairs = crossing_pairs(rs, k4_table())
    for v in range(1, rs.n + 1):
        found = empty_star_triangles(rs, v, pairs)
        if len(found) < 2:
            return f"key={rec.key} vertex {v} has {len(found)} empty star triangles"
    return None


def _check_lonely3(rec: CensusRecord) -> str | None:
    for v in range(1, rec.n + 1):
        if rec.l[v - 1] >= 1 and rec.t[v - 1] < 3:
            return f"key={rec.key} vertex {v}: l={rec.l[v - 1]} but t={rec.t[v - 1]}"
    return None


def _check_prop1(rec: CensusRecord) -> str | None:
    # among star triangles: empty iff far-edge endpoints adjacent at apex
    rs = rec.system()
    by_edge = _class_crossings(rs)
    empties = {tuple(tri) for tri in _survey(rs.n, rs.rots)[0]}
    for tri in itertools.combinations(range(1, rs.n + 1), 3):
        for apex in tri:
            u, w = [x for x in tri if x != apex]
            far = edge_key(u, w)
            if any(apex in f for f in by_edge.get(far, ())):
                continue  # not a star triangle at this apex
            row = rs.rots[apex]
            i = row.index(u)
            adjacent = row[(i + 1) % len(row)] == w or row[i - 1] == w
            if adjacent != (tri in empties):
                return (
                    f"key={rec.key} triangle {tri} apex {apex}:"
                    f" adjacent={adjacent} empty={tri in empties}"
                )
    return None


def _check_deletion(rec: CensusRecord) -> str | None:
    rs = rec.system()
    for v in range(1, rs.n + 1):
        sub = rs.restrict([x for x in range(1, rs.n + 1) if x != v])
        sub_empty = len(_survey(sub.n, sub.rots)[0])
        want = rec.empty - rec.t[v - 1] + rec.l[v - 1]
        if sub_empty != want:
            return (
                f"key={rec.key} delete {v}: empty={sub_empty},"
                f" expected {rec.empty}-{rec.t[v - 1]}+{rec.l[v - 1]}={want}"
            )
    return None


# claim -> (smallest n, largest n or None, per-class check)
_PER_CLASS_CLAIMS = {
    "THEOREM_N": (4, None, _check_theorem_n),
    "OBS_2N4": (4, 8, _check_obs_2n4),
    "COR_TWO_STAR": (4, None, _check_two_star),
    "PROP_LONELY3": (4, None, _check_lonely3),
    "PROP1_IFF": (4, None, _check_prop1),
    "DELETION_IDENTITY": (5, None, _check_deletion),
}


def claim_names() -> tuple[str, ...]:
    return tuple(sorted(_PER_CLASS_CLAIMS)) + ("NO_LUCKY_UNIQUE",)


def verify_claim(
    n: int,
    claim: str,
    records: Sequence[CensusRecord] | None = None,
    *,
    workers: int = 1,
    checkpoint_path: str | None = None,
) -> ClaimReport:
    """Check one claim against every class at level n.

    ``records`` may carry a precomputed census; otherwise it is enumerated
    (with optional checkpointing).  The report carries the first
    counterexample found, so a failing claim is reproducible.
    """
    if claim == "NO_LUCKY_UNIQUE":
        if n != 8:
            raise ValueError("NO_LUCKY_UNIQUE is a statement about n=8")
        if records is None:
            records = enumerate_classes(
                n, workers=workers, checkpoint_path=checkpoint_path
            )
        free = [r.key for r in records if r.lucky == 0]
        ok = len(free) == 1
        detail = None if ok else f"{len(free)} lucky-free classes: {free[:3]}"
        return ClaimReport(claim, n, ok, len(records), detail)
    if claim not in _PER_CLASS_CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; known: {', '.join(claim_names())}")
    lo, hi, check = _PER_CLASS_CLAIMS[claim]
    if n < lo or (hi is not None and n > hi):
        raise ValueError(f"claim {claim} applies to {lo} <= n <= {hi or 'inf'}")
    if records is None:
        records = enumerate_classes(
            n, workers=workers, checkpoint_path=checkpoint_path
        )
    if any(rec.n != n for rec in records):
        raise ValueError("records are not all at the requested level")
    for rec in records:
        ce = check(rec)
        if ce is not None:
            return ClaimReport(claim, n, False, len(records), ce)
    return ClaimReport(claim, n, True, len(records), None)
