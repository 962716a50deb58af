import json
import subprocess
import sys
from pathlib import Path

import pytest

from polytopes import polytope, triangulation
from toricmirror import io
from toricmirror.cli import COMMANDS, build_parser, main, run

DATA = Path(__file__).parent / "data"


def call(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def machine(argv, capsys):
    code, out, _ = call(list(argv) + ["--format", "machine"], capsys)
    assert code == 0
    return json.loads(out)


# ------------------------------------------------------------------ parsing


def test_parse_polytope_with_comments():
    P = io.parse_polytope("# diamond\n2 4\n1 0  # east\n0 1\n\n-1 0\n0 -1\n")
    assert sorted(P.vertices) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("2\n1 0\n", 1),
        ("2 3\n1 0\n0 1\n", 3),
        ("2 2\n1 0 0\n0 1\n", 2),
        ("2 2\n1 x\n0 1\n", 2),
        ("2 2\n1 0\n0 1\n5 5\n", 4),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(io.ParseError) as info:
        io.parse_polytope(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_parse_rejects_degenerate_polytope():
    with pytest.raises(io.ParseError):
        io.parse_polytope("2 2\n1 0\n-1 0\n")


def test_duplicate_vertex_warns():
    with pytest.warns(UserWarning):
        io.parse_polytope("2 5\n1 0\n0 1\n-1 0\n0 -1\n1 0\n")


def test_triangulation_round_trip(tmp_path):
    P = polytope("cube")
    T = triangulation("cube")
    path = tmp_path / "cube.tri"
    path.write_text(io.format_triangulation(T))
    assert io.read_triangulation(path, host=P) == T


def test_triangulation_parse_errors():
    P = polytope("diamond")
    with pytest.raises(io.ParseError) as info:
        io.parse_triangulation("2 4 4\n1 0\n0 1\n-1 0\n0 -1\n0 1\n1 2\n2 3\n3 9\n", P)
    assert info.value.line == 9
    with pytest.raises(io.ParseError):
        io.parse_triangulation("3 1 1\n1 0 0\n0\n", P)
    with pytest.raises(io.ParseError):  # not a complete fan
        io.parse_triangulation("2 4 3\n1 0\n0 1\n-1 0\n0 -1\n0 1\n1 2\n2 3\n", P)


# ----------------------------------------------------------------- commands


def test_dual_round_trip(tmp_path, capsys):
    code, out, _ = call(["dual", DATA / "cube.poly"], capsys)
    assert code == 0
    p = tmp_path / "oct.poly"
    p.write_text(out)
    code, back, _ = call(["dual", p], capsys)
    assert sorted(io.parse_polytope(back).vertices) == sorted(polytope("cube").vertices)


def test_reflexive_and_points(capsys):
    assert machine(["reflexive", DATA / "quintic.poly"], capsys)["payload"] == {"reflexive": True}
    doc = machine(["points", DATA / "cube.poly"], capsys)["payload"]
    assert doc["count"] == 27 and doc["interior"] == 1 and doc["skeleton"] == 20


def test_triangulate_output_parses(tmp_path, capsys):
    code, out, _ = call(["triangulate", DATA / "octahedron.poly"], capsys)
    assert code == 0
    T = io.parse_triangulation(out, polytope("octahedron"))
    assert len(T.simplices) == 8
    p = tmp_path / "oct.tri"
    p.write_text(out)
    doc = machine(["triangulate", DATA / "octahedron.poly", "--triangulation", p], capsys)["payload"]
    assert doc["spanning_index"] == 1 and doc["volume"] == 8


def test_hodge(capsys):
    doc = machine(["hodge", DATA / "quintic.poly"], capsys)["payload"]
    assert doc["picard"]["total"] == 1 and doc["deformation"]["total"] == 101
    code, out, _ = call(["hodge", DATA / "cube.poly"], capsys)
    assert "total: 17" in out and "total: 3" in out


def test_kahler_and_degeneration(capsys):
    doc = machine(["kahler", DATA / "quintic.poly", "--rays"], capsys)["payload"]
    assert doc["dimension"] == 1 and doc["interior_nonempty"] and doc["extreme_rays"] == [[1]]
    # the dual of the octahedron is the cube, whose skeleton has 20 points
    doc = machine(["degeneration", DATA / "octahedron.poly", "--mu", ",".join(["1"] * 20)], capsys)["payload"]
    assert doc["classification"] == "nonnegative" and doc["min_pairing"] == 0


def test_mirror_command(capsys):
    doc = machine(["mirror", DATA / "cube.poly"], capsys)["payload"]
    assert doc["ok"] and doc["k3_sum_20"] and doc["pic"] == 17 and doc["def"] == 3


def test_flops_command(capsys):
    doc = machine(["flops", DATA / "product4.poly", "--apply", "0"], capsys)["payload"]
    assert doc["count"] == 16
    a = doc["applied"]
    assert a["interiors_disjoint"] and a["separates"] and a["picard"] == a["picard_flopped"] == 28
    code, _, err = call(["flops", DATA / "product4.poly", "--apply", "99"], capsys)
    assert code == 1 and "there are 16" in err


def test_sections_command(capsys):
    doc = machine(["sections", DATA / "diamond.poly", "--rho", "2,2,2,2"], capsys)["payload"]
    assert doc["count"] == 25 and doc["canonical_count"] == 9
    doc = machine(["sections", DATA / "quintic.poly"], capsys)["payload"]
    assert doc["count"] == 126 and doc["canonical_count"] == 1
    code, _, err = call(["sections", DATA / "diamond.poly", "--rho", "1/2,1,1,1"], capsys)
    assert code == 1 and "integers" in err


def test_every_command_runs_in_both_formats(capsys):
    for cmd in COMMANDS:
        # flops need a rank-4 polytope
        path = DATA / ("product4.poly" if cmd == "flops" else "octahedron.poly")
        for fmt in ("text", "machine"):
            code, out, _ = call([cmd, path, "--format", fmt], capsys)
            assert code == 0 and out
    code, _, err = call(["flops", DATA / "octahedron.poly"], capsys)
    assert code == 1 and "rank 4" in err


def test_machine_output_is_deterministic(capsys):
    args = ["mirror", DATA / "octahedron.poly", "--format", "machine"]
    _, a, _ = call(args, capsys)
    _, b, _ = call(args, capsys)
    assert a == b
    doc = json.loads(a)
    assert doc["command"] == "mirror" and len(doc["input_sha256"]) == 64


def test_run_reports_warnings(tmp_path):
    p = tmp_path / "dup.poly"
    p.write_text("2 5\n1 0\n0 1\n-1 0\n0 -1\n1 0\n")
    rep = run("reflexive", build_parser().parse_args(["reflexive", str(p)]))
    assert rep.warnings and rep.human().startswith("# ")


def test_errors_exit_nonzero(tmp_path, capsys):
    code, _, err = call(["dual", tmp_path / "missing.poly"], capsys)
    assert code == 1 and err.startswith("error:")
    bad = tmp_path / "bad.poly"
    bad.write_text("2 2\n1 0\n")
    code, _, err = call(["dual", bad], capsys)
    assert code == 1 and "line" in err


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "toricmirror.cli", "reflexive", str(DATA / "diamond.poly")],
        capture_output=True, text=True, check=True,
    )
    assert "reflexive: true" in out.stdout
