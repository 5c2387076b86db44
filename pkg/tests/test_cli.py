"""End-to-end tests for the command-line interface.

Most tests drive ``cli.main`` in-process for speed; one subprocess test
checks the installed console script.  The render tests reconstruct the
drawn polylines from the SVG and verify the segments cross exactly where
the markers are.
"""

import math
import random
import shutil
import subprocess
import xml.etree.ElementTree as ET
from math import comb

import pytest

from gooddraw import cli
from gooddraw.census import load_census
from gooddraw.drawing import k4_system_from_bits, load_draw, realize
from gooddraw.rotation import RotationSystem, convex_rotation, dump_rot

import geom_oracle as geo


def run_cli(capsys, *argv):
    rc = cli.main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def write_rot(path, rs):
    path.write_text(dump_rot(rs))
    return str(path)


PLANAR_K4 = k4_system_from_bits(0b0101)
UNREALIZABLE_K4 = k4_system_from_bits(0b0001)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def test_analyze_convex_k5(tmp_path, capsys):
    rot = write_rot(tmp_path / "k5.rot", convex_rotation(5))
    rc, out, _ = run_cli(capsys, "analyze", "--rotation", rot)
    assert rc == 0
    assert "n=5" in out
    assert "empty=10" in out
    assert "all vertices lucky" in out
    assert "crossings=5" in out


def test_analyze_planar_k4(tmp_path, capsys):
    rot = write_rot(tmp_path / "p4.rot", PLANAR_K4)
    rc, out, _ = run_cli(capsys, "analyze", "--rotation", rot)
    assert rc == 0
    assert "empty=4" in out
    assert "crossings=0" in out


def test_analyze_lists_every_empty_triangle(tmp_path, capsys):
    rot = write_rot(tmp_path / "k4.rot", convex_rotation(4))
    rc, out, _ = run_cli(capsys, "analyze", "--rotation", rot)
    assert rc == 0
    assert "empty triangles: 1-2-3 1-2-4 1-3-4 2-3-4" in out


def test_analyze_reports_unrealizable(tmp_path, capsys):
    rot = write_rot(tmp_path / "u4.rot", UNREALIZABLE_K4)
    rc, out, _ = run_cli(capsys, "analyze", "--rotation", rot)
    assert rc == 0
    assert "unrealizable" in out
    assert "crossings=" not in out


def test_parse_error_gives_exit_2_with_line_number(tmp_path, capsys):
    bad = tmp_path / "bad.rot"
    bad.write_text("1: 2 3 4\n2: 1 3 4\n")
    rc, _, err = run_cli(capsys, "analyze", "--rotation", str(bad))
    assert rc == 2
    assert "line 1" in err


def test_missing_file_gives_exit_2(tmp_path, capsys):
    rc, _, err = run_cli(capsys, "analyze", "--rotation", str(tmp_path / "no.rot"))
    assert rc == 2
    assert "error:" in err


# ---------------------------------------------------------------------------
# realize
# ---------------------------------------------------------------------------

def test_realize_writes_loadable_draw_file(tmp_path, capsys):
    rot = write_rot(tmp_path / "k6.rot", convex_rotation(6))
    out_path = tmp_path / "k6.draw"
    rc, out, _ = run_cli(capsys, "realize", "--rotation", rot,
                         "--out", str(out_path))
    assert rc == 0
    assert "crossings=15" in out
    dr = load_draw(out_path.read_text())
    assert dr.crossing_count == 15
    assert dr.source == convex_rotation(6)


def test_realize_without_out_prints_draw(tmp_path, capsys):
    rot = write_rot(tmp_path / "k4.rot", convex_rotation(4))
    rc, out, _ = run_cli(capsys, "realize", "--rotation", rot)
    assert rc == 0
    assert load_draw(out).crossing_count == 1


def test_realize_unrealizable_exits_1(tmp_path, capsys):
    rot = write_rot(tmp_path / "u4.rot", UNREALIZABLE_K4)
    rc, out, _ = run_cli(capsys, "realize", "--rotation", rot)
    assert rc == 1
    assert "unrealizable" in out


# ---------------------------------------------------------------------------
# render
# ---------------------------------------------------------------------------

def svg_markers(text):
    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    return [el for el in root.iter(f"{ns}circle")
            if el.get("class") == "crossing"]


def svg_polylines(text):
    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    out = []
    for el in root.iter(f"{ns}polyline"):
        pts = [tuple(float(c) for c in tok.split(","))
               for tok in el.get("points").split()]
        out.append(pts)
    return out


def render_to_text(tmp_path, capsys, rs, name):
    rot = write_rot(tmp_path / f"{name}.rot", rs)
    svg = tmp_path / f"{name}.svg"
    rc, _, _ = run_cli(capsys, "render", "--rotation", rot, "--out", str(svg))
    assert rc == 0
    return svg.read_text()


def test_render_convex_k4_has_one_marker(tmp_path, capsys):
    text = render_to_text(tmp_path, capsys, convex_rotation(4), "k4")
    assert len(svg_markers(text)) == 1


def test_render_planar_k4_has_no_markers(tmp_path, capsys):
    text = render_to_text(tmp_path, capsys, PLANAR_K4, "p4")
    assert len(svg_markers(text)) == 0


def test_render_marker_count_matches_crossing_count(tmp_path, capsys):
    rng = random.Random(11)
    cases = [convex_rotation(n) for n in (3, 5, 6, 7)]
    while len(cases) < 7:
        pts = geo.random_points(6, rng)
        cases.append(RotationSystem(geo.angular_rotation(pts)))
    for i, rs in enumerate(cases):
        text = render_to_text(tmp_path, capsys, rs, f"case{i}")
        dr = realize(rs)
        assert len(svg_markers(text)) == dr.crossing_count
        assert len(svg_polylines(text)) == comb(rs.n, 2)


def _seg_cross(p, q, r, s):
    """Proper interior crossing of segments pq and rs."""
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(r, s, p), orient(r, s, q)
    d3, d4 = orient(p, q, r), orient(p, q, s)
    eps = 1e-9
    return d1 * d2 < -eps and d3 * d4 < -eps


def test_render_segments_cross_exactly_at_markers(tmp_path, capsys):
    rng = random.Random(5)
    pts = geo.random_points(6, rng)
    rs = RotationSystem(geo.angular_rotation(pts))
    for name, system in [("k6", convex_rotation(6)), ("r6", rs)]:
        text = render_to_text(tmp_path, capsys, system, name)
        polys = svg_polylines(text)
        markers = {(round(float(el.get("cx")), 4), round(float(el.get("cy")), 4))
                   for el in svg_markers(text)}
        # interior polyline vertices are exactly the marker positions,
        # each shared by exactly two edges
        hits = {}
        for pts_ in polys:
            for p in pts_[1:-1]:
                key = (round(p[0], 4), round(p[1], 4))
                hits[key] = hits.get(key, 0) + 1
        assert set(hits) == markers
        assert all(c == 2 for c in hits.values())
        # and no two drawn segments cross anywhere else
        segs = [(a, b) for pts_ in polys for a, b in zip(pts_, pts_[1:])]
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                assert not _seg_cross(*segs[i], *segs[j])


def test_render_unrealizable_exits_1(tmp_path, capsys):
    rot = write_rot(tmp_path / "u4.rot", UNREALIZABLE_K4)
    rc, out, _ = run_cli(capsys, "render", "--rotation", rot,
                         "--out", str(tmp_path / "u4.svg"))
    assert rc == 1
    assert "unrealizable" in out
    assert not (tmp_path / "u4.svg").exists()


# ---------------------------------------------------------------------------
# enumerate / verify
# ---------------------------------------------------------------------------

def test_enumerate_writes_census(tmp_path, capsys):
    out = tmp_path / "c5.txt"
    rc, stdout, stderr = run_cli(capsys, "enumerate", "--n", "5",
                                 "--out", str(out))
    assert rc == 0
    assert "classes=5" in stdout
    records = load_census(out.read_text())
    assert len(records) == 5
    assert all(r.n == 5 for r in records)
    assert min(r.empty for r in records) == 6
    # progress lines go to stderr
    assert "n=4 parent" in stderr


def test_enumerate_resume_skips_finished_levels(tmp_path, capsys):
    out = tmp_path / "c5.txt"
    run_cli(capsys, "enumerate", "--n", "5", "--out", str(out))
    first = out.read_text()
    rc, stdout, stderr = run_cli(capsys, "enumerate", "--n", "5",
                                 "--out", str(out), "--resume")
    assert rc == 0
    assert stderr == ""  # no parents re-processed
    assert out.read_text() == first


def test_enumerate_resume_extends_earlier_run(tmp_path, capsys):
    out = tmp_path / "census.txt"
    run_cli(capsys, "enumerate", "--n", "4", "--out", str(out))
    rc, stdout, stderr = run_cli(capsys, "enumerate", "--n", "5",
                                 "--out", str(out), "--resume")
    assert rc == 0
    assert "classes=5" in stdout
    assert "n=4 parent" in stderr
    assert "n=3 parent" not in stderr


def test_enumerate_without_resume_starts_over(tmp_path, capsys):
    out = tmp_path / "c4.txt"
    run_cli(capsys, "enumerate", "--n", "4", "--out", str(out))
    rc, _, stderr = run_cli(capsys, "enumerate", "--n", "4", "--out", str(out))
    assert rc == 0
    assert "n=3 parent" in stderr  # level redone from scratch


def test_verify_pass_exits_0(tmp_path, capsys):
    out = tmp_path / "c5.txt"
    run_cli(capsys, "enumerate", "--n", "5", "--out", str(out))
    for claim in ("THEOREM_N", "OBS_2N4", "COR_TWO_STAR",
                  "PROP_LONELY3", "PROP1_IFF", "DELETION_IDENTITY"):
        rc, stdout, _ = run_cli(capsys, "verify", "--n", "5",
                                "--claim", claim, "--census", str(out))
        assert rc == 0, claim
        assert f"PASS {claim}" in stdout


def test_verify_fail_exits_1(tmp_path, capsys):
    out = tmp_path / "c4.txt"
    run_cli(capsys, "enumerate", "--n", "4", "--out", str(out))
    records = load_census(out.read_text())
    doctored = [records[0]._replace(empty=3)] + records[1:]
    bad = tmp_path / "bad.txt"
    bad.write_text("".join(r.to_line() + "\n" for r in doctored))
    rc, stdout, _ = run_cli(capsys, "verify", "--n", "4",
                            "--claim", "THEOREM_N", "--census", str(bad))
    assert rc == 1
    assert "FAIL THEOREM_N" in stdout
    assert records[0].key in stdout


def test_verify_usage_errors_exit_2(tmp_path, capsys):
    rc, _, err = run_cli(capsys, "verify", "--n", "5", "--claim", "NOPE")
    assert rc == 2
    assert "unknown claim" in err
    rc, _, err = run_cli(capsys, "verify", "--n", "5",
                         "--claim", "NO_LUCKY_UNIQUE")
    assert rc == 2
    assert "n=8" in err


def test_verify_enumerates_when_no_census_given(capsys):
    rc, stdout, _ = run_cli(capsys, "verify", "--n", "4",
                            "--claim", "THEOREM_N")
    assert rc == 0
    assert "PASS THEOREM_N n=4 classes=2" in stdout


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def test_generate_convex_roundtrip(tmp_path, capsys):
    for n in range(3, 11):
        out = tmp_path / f"k{n}.rot"
        rc, _, _ = run_cli(capsys, "generate", "--family", "convex",
                           "--n", str(n), "--out", str(out))
        assert rc == 0
        rc, stdout, _ = run_cli(capsys, "analyze", "--rotation", str(out))
        assert rc == 0
        assert f"empty={comb(n, 3)}" in stdout
        assert f"crossings={comb(n, 4)}" in stdout


def test_generate_unknown_family_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["generate", "--family", "twisted", "--n", "4"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_missing_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
    capsys.readouterr()


def test_console_script_pipeline(tmp_path):
    exe = shutil.which("gooddraw")
    assert exe, "console script not installed"
    rot = tmp_path / "k5.rot"
    subprocess.run([exe, "generate", "--family", "convex", "--n", "5",
                    "--out", str(rot)], check=True, capture_output=True)
    proc = subprocess.run([exe, "analyze", "--rotation", str(rot)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "empty=10" in proc.stdout
    proc = subprocess.run([exe, "realize", "--rotation", str(rot)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert load_draw(proc.stdout).crossing_count == 5
