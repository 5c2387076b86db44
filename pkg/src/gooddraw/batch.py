"""Vectorized census extension for large levels.

The per-level extension in :mod:`gooddraw.census` enumerates insertion
candidates one at a time and canonicalizes each with the pure-Python
traversal search, which is comfortable through n = 7 but much too slow for
the ~10^8 candidates one level higher.  This module keeps the same
mathematics and changes only the mechanics:

 * candidates leave the gap search as (gaps, wrot) pairs and expand to
   rotation rows in numpy batches;
 * every candidate is screened against a 5-vertex realizability table
   first, the analogue of the 4-vertex table used during gap assignment:
   restricting a realizable system cannot give an unrealizable one, so the
   screen never loses a class, and it removes most dead candidates before
   the expensive steps;
 * canonical keys are computed for whole batches: every traversal labeling
   is evaluated on a two-row prefix, and only the labelings still tied for
   the minimum are expanded to full keys;
 * new-class records stream to an append-only file with a small state file
   for crash-safe resume, and the finished level is written as a standard
   frontier snapshot, byte-identical to what save_frontier produces.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import time
from typing import Callable, Sequence

import numpy as np

from gooddraw.census import (
    SNAPSHOT_MAGIC,
    CensusRecord,
    _insertions,
    _record_for,
    load_frontier,
)
from gooddraw.drawing import k4_table, realize
from gooddraw.rotation import _B36, RotationSystem, _phase_normalized

__all__ = ["k5_table", "canonical_batch", "extend_stream"]


# ---------------------------------------------------------------------------
# 5-vertex realizability table
# ---------------------------------------------------------------------------
# A rotation system restricted to five vertices, renamed 1..5 in sorted
# order, is one phase-normalized row of 4 per vertex: 6 choices each, so
# 6**5 = 7776 labeled systems, indexed by base-6 digits.

_ROW_CHOICES: list[list[tuple[int, ...]]] = []
_ROW_DIGIT: list[dict[tuple[int, ...], int]] = []
for _i in range(1, 6):
    _rest = [x for x in range(1, 6) if x != _i]
    _opts = sorted((_rest[0],) + p for p in itertools.permutations(_rest[1:]))
    _ROW_CHOICES.append(_opts)
    _ROW_DIGIT.append({t: d for d, t in enumerate(_opts)})

_K5: np.ndarray | None = None


def k5_table() -> np.ndarray:
    """Realizability of all 7776 labeled 5-vertex systems, by digit index."""
    global _K5
    if _K5 is None:
        table = np.zeros(6 ** 5, dtype=bool)
        for idx in range(6 ** 5):
            x = idx
            rows = []
            for i in range(5):
                rows.append(_ROW_CHOICES[i][x % 6])
                x //= 6
            table[idx] = realize(RotationSystem._trusted(5, rows)) is not None
        _K5 = table
    return _K5


def _w_digits(wrot: tuple[int, ...], subsets) -> list[int]:
    """Weighted K5 digit of the new vertex, per 4-subset of old vertices."""
    out = []
    for T in subsets:
        rank = {v: i + 1 for i, v in enumerate(T)}
        row = _phase_normalized(tuple(rank[x] for x in wrot if x in rank))
        out.append(_ROW_DIGIT[4][row] * 1296)
    return out


def _arc_digит_tables(rows, subsets):
    raise NotImplementedError


def _arc_digit_tables(rows, subsets):
    """Weighted K5 digit of old vertex v in subset T, as a function of v's
    insertion gap: arc[v-1][j][g].  Entries with v not in subsets[j] stay
    None and are never used.
    """
    n = len(rows)
    w = n + 1
    arc: list[list] = [[None] * len(subsets) for _ in range(n)]
    for j, T in enumerate(subsets):
        rank = {v: i + 1 for i, v in enumerate(T)}
        rank[w] = 5
        for v in T:
            weight = 6 ** (rank[v] - 1)
            digit = _ROW_DIGIT[rank[v] - 1]
            base = rows[v - 1]
            tab = np.empty(n - 1, dtype=np.int32)
            for g in range(n - 1):
                ext = base[: g + 1] + (w,) + base[g + 1 :]
                red = _phase_normalized(
                    tuple(rank[x] for x in ext if x in rank)
                )
                tab[g] = digit[red] * weight
            arc[v - 1][j] = tab
    return arc


def _k5_mask(gaps, wids, wdig, arc, subsets, table):
    """Candidates whose every new 5-subset restriction is realizable."""
    alive = np.ones(gaps.shape[0], dtype=bool)
    for j, T in enumerate(subsets):
        idx = wdig[wids, j].copy()
        for v in T:
            idx += arc[v - 1][j][gaps[:, v - 1]]
        alive &= table[idx]
        if not alive.any():
            break
    return alive


def _build_rows(parent_rows, gaps, wids, wrots_arr):
    """Expand (gaps, wrot) candidates to rotation rows, shape (m, n+1, n)."""
    m = gaps.shape[0]
    n = len(parent_rows)
    w = n + 1
    out = np.empty((m, w, n), dtype=np.uint8)
    pos = np.arange(n)
    for v in range(1, n + 1):
        base = np.asarray(parent_rows[v - 1], dtype=np.uint8)
        g = gaps[:, v - 1][:, None].astype(np.intp)
        src = pos[None, :] - (pos[None, :] > g)
        row = np.where(pos[None, :] == g + 1, np.uint8(w), base[src])
        out[:, v - 1, :] = row
    out[:, w - 1, :] = wrots_arr[wids]
    return out


# ---------------------------------------------------------------------------
# batched canonical form
# ---------------------------------------------------------------------------

def canonical_batch(R: np.ndarray) -> np.ndarray:
    """Canonical rows for a batch of rotation systems.

    ``R`` has shape (m, N, N-1) with ``R[i, v-1]`` the rotation row of
    vertex v of system i.  Returns (m, N*(N-1)) uint8: for each system the
    concatenated rows of its canonical representative, exactly the rows
    behind :func:`gooddraw.rotation.canonical_key`.

    The traversal family has 2*N*(N-1) labelings (mirror x root x start).
    Row 1 of any relabeled system is the constant (2..N), so labelings are
    ranked by rows 2 and 3 first and only the ones still tied for the
    minimum are expanded to all N rows.
    """
    m, N, L = R.shape
    if L != N - 1:
        raise ValueError(f"rows of length {L} do not fit {N} vertices")
    if m == 0:
        return np.empty((0, N * L), dtype=np.uint8)
    ar = np.arange(L)
    arp = np.arange(m)
    RS = np.stack([R, R[:, :, ::-1]])
    labels = np.arange(2, N + 1, dtype=np.uint8)[None, :]

    nvar = 2 * N * L
    pref = np.empty((nvar, m, 2), dtype=np.uint64)
    pack = np.zeros((m, 16), dtype=np.uint8)
    t = 0
    for mirr in range(2):
        for u in range(1, N + 1):
            base = RS[mirr, :, u - 1, :]
            for start in range(L):
                order = base[:, (start + ar) % L].astype(np.intp)
                newlab = np.zeros((m, N + 1), dtype=np.uint8)
                np.put_along_axis(newlab, order, labels, axis=1)
                newlab[:, u] = 1
                rows23 = np.take_along_axis(
                    RS[mirr], order[:, :2, None], axis=1
                )
                mapped = np.take_along_axis(
                    newlab, rows23.reshape(m, -1), axis=1
                ).reshape(m, 2, L)
                amin = mapped.argmin(axis=2)
                rolled = np.take_along_axis(
                    mapped, (amin[:, :, None] + ar) % L, axis=2
                )
                pack[:, :L] = rolled[:, 0]
                pack[:, L : 2 * L] = rolled[:, 1]
                pref[t] = pack.view(">u8")
                t += 1

    b0 = pref[:, :, 0].min(axis=0)
    eq0 = pref[:, :, 0] == b0
    b1 = np.where(eq0, pref[:, :, 1], np.uint64(-1)).min(axis=0)
    vidx, cidx = np.nonzero(eq0 & (pref[:, :, 1] == b1))

    P = len(cidx)
    mirr_p = (vidx // (N * L)).astype(np.intp)
    u_p = ((vidx % (N * L)) // L).astype(np.intp) + 1
    start_p = (vidx % L).astype(np.intp)
    rows_dir = RS[mirr_p, cidx]
    base_p = rows_dir[np.arange(P), u_p - 1]
    order_p = np.take_along_axis(
        base_p, (start_p[:, None] + ar) % L, axis=1
    ).astype(np.intp)
    newlab = np.zeros((P, N + 1), dtype=np.uint8)
    np.put_along_axis(newlab, order_p, labels, axis=1)
    newlab[np.arange(P), u_p] = 1
    oldv = np.concatenate([u_p[:, None], order_p], axis=1)
    rows_all = np.take_along_axis(rows_dir, (oldv - 1)[:, :, None], axis=1)
    mapped = np.take_along_axis(
        newlab, rows_all.reshape(P, -1), axis=1
    ).reshape(P, N, L)
    amin = mapped.argmin(axis=2)
    rolled = np.take_along_axis(mapped, (amin[:, :, None] + ar) % L, axis=2)
    flat = np.ascontiguousarray(rolled.reshape(P, N * L))

    nb = N * L
    wpad = -nb % 8
    if wpad:
        buf = np.zeros((P, nb + wpad), dtype=np.uint8)
        buf[:, :nb] = flat
    else:
        buf = flat
    words = buf.view(">u8")
    keys = tuple(words[:, k] for k in reversed(range(words.shape[1])))
    order = np.lexsort(keys + (cidx,))
    sc = cidx[order]
    first = np.empty(P, dtype=bool)
    first[0] = True
    first[1:] = sc[1:] != sc[:-1]
    winners = order[first]
    assert len(winners) == m
    return flat[winners]


def _key_string(row: np.ndarray, L: int) -> str:
    s = "".join(_B36[x] for x in row)
    return "-".join(s[j : j + L] for j in range(0, len(s), L))


_KEY_TO_BYTES = bytes.maketrans(
    _B36.encode(), bytes(range(len(_B36)))
)


# ---------------------------------------------------------------------------
# streaming level extension
# ---------------------------------------------------------------------------

def _write_state(state_path: str, state: dict) -> None:
    tmp = state_path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, state_path)


def extend_stream(
    frontier_path: str,
    out_path: str,
    *,
    progress: Callable[[str], None] | None = None,
    checkpoint_every: int = 100,
    batch_size: int = 16384,
    stop_after: int | None = None,
) -> int:
    """Extend a finished frontier snapshot by one level, streaming to disk.

    Reads the level-n snapshot at ``frontier_path``, writes the level-(n+1)
    snapshot to ``out_path`` and returns the class count.  Intermediate
    work lives in ``out_path + '.part'`` (record lines, append-only) and
    ``out_path + '.state'`` (resume cursor); interrupted runs pick up at
    the last checkpoint.  ``stop_after`` stops after that many parents and
    leaves a resumable checkpoint (used by tests).

    The known-class set is rebuilt from the part file on resume; the
    dead-candidate cache is not persisted, so a resumed run may repeat a
    few unrealizability searches.  Output is deterministic either way.
    """
    part_path = out_path + ".part"
    state_path = out_path + ".state"
    if os.path.exists(out_path) and not os.path.exists(state_path):
        with open(out_path) as fh:
            return sum(1 for line in fh if line.startswith("rec "))

    frontier = load_frontier(frontier_path)
    if not frontier.complete:
        raise ValueError("source frontier is itself mid-extension")
    parents = [r.key for r in frontier.records]
    n = frontier.n
    n1 = n + 1
    L1 = n1 - 1  # row length at the new level

    cursor = 0
    seen: dict[bytes, None] = {}
    if os.path.exists(state_path):
        with open(state_path) as fh:
            st = json.load(fh)
        if st["level"] != n1 or st["parents"] != len(parents):
            raise ValueError(f"state file {state_path} is for another run")
        cursor = st["cursor"]
        with open(part_path, "r+") as fh:
            fh.truncate(st["offset"])
        with open(part_path) as fh:
            for line in fh:
                key = line.split(" ", 2)[1][4:]
                seen[key.encode().translate(_KEY_TO_BYTES, delete=b"-")] = None
    else:
        open(part_path, "w").close()
        _write_state(
            state_path,
            {"level": n1, "parents": len(parents), "cursor": 0, "offset": 0},
        )

    bits = k4_table().bits_realizable
    table = k5_table()
    subsets = list(itertools.combinations(range(1, n + 1), 4))
    windex: dict[tuple, int] = {}
    wlist: list[tuple] = []
    wdig_rows: list[list[int]] = []
    wrots_arr = np.empty((0, n), dtype=np.uint8)
    wdig_arr = np.empty((0, len(subsets)), dtype=np.int32)

    dead: set[bytes] = set()
    t_start = time.monotonic()
    processed = 0
    part = open(part_path, "a")

    for i in range(cursor, len(parents)):
        if stop_after is not None and processed >= stop_after:
            break
        rows = RotationSystem._trusted(
            n, _decode_key_rows(parents[i])
        ).rots[1:]
        gl: list[tuple] = []
        wl: list[int] = []
        for gaps, wrot in _insertions(rows, bits, raw=True):
            wid = windex.get(wrot)
            if wid is None:
                wid = len(wlist)
                windex[wrot] = wid
                wlist.append(wrot)
                wdig_rows.append(_w_digits(wrot, subsets))
            gl.append(gaps)
            wl.append(wid)
        if gl:
            if len(wlist) > len(wrots_arr):
                wrots_arr = np.asarray(wlist, dtype=np.uint8)
                wdig_arr = np.asarray(wdig_rows, dtype=np.int32)
            gaps_a = np.asarray(gl, dtype=np.uint8)
            wids_a = np.asarray(wl, dtype=np.intp)
            arc = _arc_digit_tables(rows, subsets)
            alive = _k5_mask(gaps_a, wids_a, wdig_arr, arc, subsets, table)
            gaps_a = gaps_a[alive]
            wids_a = wids_a[alive]
            for lo in range(0, len(gaps_a), batch_size):
                chunk = slice(lo, lo + batch_size)
                cand_rows = _build_rows(
                    rows, gaps_a[chunk], wids_a[chunk], wrots_arr
                )
                canon = canonical_batch(cand_rows)
                for ci in range(len(canon)):
                    kb = canon[ci].tobytes()
                    if kb in seen or kb in dead:
                        continue
                    cand = RotationSystem._trusted(
                        n1, [tuple(row) for row in cand_rows[ci].tolist()]
                    )
                    dr = realize(cand)
                    if dr is None:
                        dead.add(kb)
                        continue
                    seen[kb] = None
                    crs = RotationSystem._trusted(
                        n1,
                        [
                            tuple(canon[ci][j : j + L1].tolist())
                            for j in range(0, n1 * L1, L1)
                        ],
                    )
                    rec = _record_for(
                        _key_string(canon[ci], L1), crs, dr.crossing_count
                    )
                    part.write(rec.to_line() + "\n")
        processed += 1
        done = i + 1
        if done % checkpoint_every == 0 or done == len(parents):
            part.flush()
            os.fsync(part.fileno())
            _write_state(
                state_path,
                {
                    "level": n1,
                    "parents": len(parents),
                    "cursor": done,
                    "offset": part.tell(),
                },
            )
            if progress is not None:
                rate = processed / max(time.monotonic() - t_start, 1e-9)
                eta = (len(parents) - done) / max(rate, 1e-9)
                progress(
                    f"n={n} parent {done}/{len(parents)}"
                    f" classes={len(seen)} dead={len(dead)}"
                    f" rate={rate:.2f}/s eta={eta / 3600:.2f}h"
                )

    part.close()
    if stop_after is not None and processed >= stop_after and cursor + processed < len(parents):
        return len(seen)

    return _finalize(out_path, part_path, state_path, n1)


def _decode_key_rows(key: str) -> list[tuple[int, ...]]:
    raw = key.encode().translate(_KEY_TO_BYTES, delete=b"-")
    n = len(key.split("-", 1)[0]) + 1
    return [tuple(raw[j : j + n - 1]) for j in range(0, n * (n - 1), n - 1)]


def _finalize(out_path: str, part_path: str, state_path: str, level: int) -> int:
    """Sort the streamed record lines into a standard snapshot."""
    with open(part_path) as fh:
        lines = fh.read().splitlines()
    lines.sort()
    digest = hashlib.sha256()
    tmp = out_path + ".tmp"
    with open(tmp, "w") as fh:

        def emit(s: str) -> None:
            fh.write(s)
            digest.update(s.encode())

        emit(SNAPSHOT_MAGIC + "\n")
        emit(f"level {level}\n")
        emit("cursor 0\n")
        for line in lines:
            emit("rec " + line + "\n")
        fh.write("sha256 " + digest.hexdigest() + "\n")
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, out_path)
    os.remove(part_path)
    os.remove(state_path)
    return len(lines)
