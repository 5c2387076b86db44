"""Command-line surface for the gooddraw library.

Subcommands:
  analyze    print empty-triangle analytics for a .rot file
  realize    find a drawing for a .rot file and write it as .draw
  render     lay the drawing out and write a static SVG
  enumerate  build the census of weak isomorphism classes at a level
  verify     check one of the registered claims against a census level
  generate   write a named rotation-system family as a .rot file

Exit codes: 0 success / claim passes, 1 unrealizable input or failing
claim, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

from gooddraw.census import (
    dump_census,
    enumerate_classes,
    load_census,
    summarize,
    verify_claim,
)
from gooddraw.drawing import RealizedDrawing, dump_draw, realize
from gooddraw.rotation import (
    RotationSystem,
    convex_rotation,
    dump_rot,
    empty_triangles,
    parse_rot,
    vertex_stats,
)


def _read_rotation(path: str) -> RotationSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_rot(fh.read())


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _cmd_analyze(args) -> int:
    rs = _read_rotation(args.rotation)
    empties = empty_triangles(rs)
    print(f"n={rs.n}")
    print(f"empty={len(empties)}")
    print("empty triangles: " + " ".join("-".join(map(str, t)) for t in empties))
    if rs.n >= 4:
        lucky = 0
        for v in range(1, rs.n + 1):
            st = vertex_stats(rs, v)
            mark = "yes" if st.lucky else "no"
            lucky += st.lucky
            print(f"v={v} t={st.t} l={st.l} lucky={mark}")
        if lucky == rs.n:
            print("all vertices lucky")
        else:
            print(f"lucky vertices: {lucky}/{rs.n}")
    dr = realize(rs)
    if dr is None:
        print("unrealizable")
    else:
        print(f"crossings={dr.crossing_count}")
    return 0


# ---------------------------------------------------------------------------
# realize / render
# ---------------------------------------------------------------------------

def _cmd_realize(args) -> int:
    rs = _read_rotation(args.rotation)
    dr = realize(rs)
    if dr is None:
        print("unrealizable")
        return 1
    text = dump_draw(dr)
    if args.out:
        _write(args.out, text)
        print(f"wrote {args.out} (crossings={dr.crossing_count})")
    else:
        sys.stdout.write(text)
    return 0


def _tutte_layout(dr: RealizedDrawing) -> dict[int, tuple[float, float]]:
    """Straight-line layout of the planarization.

    The largest face is pinned to a regular polygon and every other map
    vertex is placed at the average of its neighbours, which for a planar
    map yields a crossing-free drawing with convex faces.
    """
    import numpy as np

    m = dr.map
    outer = max(m.faces(), key=len)
    ring: list[int] = []
    for d in outer:
        v = m.org[d]
        if v not in ring:
            ring.append(v)
    pos: dict[int, tuple[float, float]] = {}
    for i, v in enumerate(ring):
        ang = 2 * math.pi * i / len(ring) + math.pi / 2
        pos[v] = (math.cos(ang), math.sin(ang))
    inner = [v for v in range(1, m.vertex_count + 1) if v not in pos]
    if inner:
        index = {v: i for i, v in enumerate(inner)}
        lap = np.zeros((len(inner), len(inner)))
        rhs = np.zeros((len(inner), 2))
        for v in inner:
            i = index[v]
            for d in m.rotation_at(v):
                u = m.org[d ^ 1]
                lap[i, i] += 1.0
                if u in index:
                    lap[i, index[u]] -= 1.0
                else:
                    rhs[i] += pos[u]
        sol = np.linalg.solve(lap, rhs)
        for v in inner:
            pos[v] = (float(sol[index[v], 0]), float(sol[index[v], 1]))
    return pos


def _svg_text(dr: RealizedDrawing) -> str:
    pos = _tutte_layout(dr)
    m = dr.map

    def pt(v: int) -> str:
        x, y = pos[v]
        return f"{x:.4f},{-y:.4f}"

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        'viewBox="-1.2 -1.2 2.4 2.4" width="480" height="480">',
        '<g fill="none" stroke="#444" stroke-width="0.012" '
        'stroke-linecap="round">',
    ]
    for e_idx in range(len(dr.edges)):
        chain = m.chain(e_idx)
        path = [m.org[chain[0]]] + [m.org[d ^ 1] for d in chain]
        lines.append(f'<polyline points="{" ".join(pt(v) for v in path)}"/>')
    lines.append("</g>")
    lines.append('<g fill="#c0392b">')
    for z in m.crossing_vertices:
        x, y = pos[z]
        lines.append(
            f'<circle class="crossing" cx="{x:.4f}" cy="{-y:.4f}" r="0.022"/>'
        )
    lines.append("</g>")
    lines.append('<g fill="#2962ad">')
    for v in range(1, m.n_orig + 1):
        x, y = pos[v]
        lines.append(f'<circle cx="{x:.4f}" cy="{-y:.4f}" r="0.04"/>')
    lines.append("</g>")
    lines.append('<g font-size="0.11" font-family="sans-serif" fill="#111">')
    for v in range(1, m.n_orig + 1):
        x, y = pos[v]
        r = math.hypot(x, y) or 1.0
        lx, ly = x * (r + 0.11) / r, y * (r + 0.11) / r
        lines.append(
            f'<text x="{lx:.4f}" y="{-ly + 0.04:.4f}" '
            f'text-anchor="middle">{v}</text>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _cmd_render(args) -> int:
    rs = _read_rotation(args.rotation)
    dr = realize(rs)
    if dr is None:
        print("unrealizable")
        return 1
    _write(args.out, _svg_text(dr))
    print(f"wrote {args.out} (crossings={dr.crossing_count})")
    return 0


# ---------------------------------------------------------------------------
# enumerate / verify
# ---------------------------------------------------------------------------

def _cmd_enumerate(args) -> int:
    ckpt = args.out + ".ckpt"
    if not args.resume and os.path.exists(ckpt):
        os.remove(ckpt)

    def progress(msg: str) -> None:
        print(msg, file=sys.stderr)

    records = enumerate_classes(
        args.n, workers=args.workers, checkpoint_path=ckpt, progress=progress
    )
    _write(args.out, dump_census(records))
    summary = summarize(records)
    print(
        f"n={args.n} classes={summary.classes} "
        f"(unfolded {summary.classes_unfolded}) "
        f"empty min={summary.min_empty} max={summary.max_empty} "
        f"lucky-free={len(summary.lucky_free)}"
    )
    print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    records = None
    if args.census:
        with open(args.census, encoding="utf-8") as fh:
            records = load_census(fh.read())
    report = verify_claim(args.n, args.claim, records)
    if report.ok:
        print(f"PASS {args.claim} n={args.n} classes={report.classes}")
        return 0
    print(f"FAIL {args.claim} n={args.n}: counterexample {report.counterexample}")
    return 1


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def _cmd_generate(args) -> int:
    rs = convex_rotation(args.n)
    text = dump_rot(rs)
    if args.out:
        _write(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser plumbing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="gooddraw",
        description="Empty triangles in good drawings of complete graphs.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analytics report for a .rot file")
    p.add_argument("--rotation", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("realize", help="search for a drawing, emit .draw")
    p.add_argument("--rotation", required=True, metavar="FILE")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("render", help="render the drawing as an SVG")
    p.add_argument("--rotation", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("enumerate", help="census of classes at one level")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--resume", action="store_true",
                   help="continue from FILE.ckpt instead of starting over")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("verify", help="check a claim against a census level")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--claim", required=True, metavar="ID")
    p.add_argument("--census", metavar="FILE",
                   help="read records from a census file instead of enumerating")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("generate", help="write a rotation-system family")
    p.add_argument("--family", required=True, choices=["convex"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_generate)

    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
