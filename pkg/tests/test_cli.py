import json

import pytest

from isocert.cli import main
from isocert.elimination import load_golden


def _run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main(list(argv) + ["--out", str(out)])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc


def test_symbolic_single_sign(tmp_path):
    code, doc = _run(tmp_path, "symbolic", "--epsilon", "-1")
    assert code == 0
    assert doc["certified"] and doc["symbolic"][0]["epsilon"] == -1


def test_symbolic_bad_epsilon(tmp_path):
    code, doc = _run(tmp_path, "symbolic", "--epsilon", "0")
    assert code == 2 and doc is None


def test_symbolic_too_few_points(tmp_path):
    assert _run(tmp_path, "symbolic", "--points", "50")[0] == 2


def test_golden_corruption_detected(tmp_path):
    golden = load_golden()
    golden["1"]["t5-P2"] = golden["1"]["t5-P2"].replace("8", "9", 1)
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(golden))
    code, doc = _run(tmp_path, "symbolic", "--epsilon", "1", "--golden", str(path))
    assert code == 1
    assert doc["symbolic"][0]["first_failure"] == "golden t5-P2 (epsilon=1)"


def test_unreadable_golden(tmp_path):
    path = tmp_path / "golden.json"
    path.write_text("{not json")
    assert _run(tmp_path, "symbolic", "--epsilon", "1", "--golden", str(path))[0] == 2


def test_geometry_torus(tmp_path, capsys):
    code, doc = _run(tmp_path, "geometry", "--family", "sphere-torus-cylinder", "--grid", "4")
    assert code == 0
    assert doc["geometry"][0]["pass"]
    assert "principal curvatures" in capsys.readouterr().out


def test_geometry_constraint_violation(tmp_path):
    code, _ = _run(tmp_path, "geometry", "--family", "sphere-torus-cylinder", "--r1", "0.6", "--r2", "0.9")
    assert code == 2


def test_geometry_unchecked_violation_fails(tmp_path):
    code, doc = _run(tmp_path, "geometry", "--family", "sphere-torus-cylinder", "--r1", "0.6", "--r2", "0.801",
                     "--grid", "4", "--no-constraint-check")
    assert code == 1
    assert not doc["certified"]


def test_unknown_family(tmp_path):
    assert _run(tmp_path, "geometry", "--family", "bogus")[0] == 2


@pytest.mark.parametrize("bad", ["--grid=1", "--seed=-1", "--tol-curvature=0"])
def test_bad_numeric_options(tmp_path, bad):
    assert _run(tmp_path, "geometry", "--family", "slice", bad)[0] == 2


def test_parallel_helicoid(tmp_path):
    code, doc = _run(tmp_path, "parallel", "--family", "parabolic-helicoid", "--grid", "3")
    assert code == 0
    assert [r["offset"] for r in doc["parallel"][0]["parallel_table"]] == [0.1, 0.2, 0.3]


def test_parallel_focal(tmp_path):
    code, doc = _run(tmp_path, "parallel", "--family", "umbilical-cylinder", "--epsilon", "+1", "--r1", "0.2",
                     "--grid", "2")
    assert code == 1
    names = [c["name"] for c in doc["parallel"][0]["criteria"] if not c["pass"]]
    assert "parallel-no-focal@0.3" in names


@pytest.mark.parametrize("offsets", ["0.1,-0.1", "abc", "5"])
def test_bad_offsets(tmp_path, offsets):
    assert _run(tmp_path, "parallel", "--family", "slice", "--offsets", offsets)[0] == 2


def test_report_is_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = ["geometry", "--family", "parabolic-helicoid", "--B", "1.5", "--grid", "3", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_missing_subcommand():
    assert main([]) == 2
