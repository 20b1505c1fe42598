import json
import shutil
import subprocess
import sys

import pytest

from helpers import CORPUS
from tiltheart.cli import main
from tiltheart.fileformat import parse_input
from tiltheart.pipeline import Verdict


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_verdict_exit_codes():
    assert [v.exit_code for v in Verdict] == [0, 1, 2]


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", CORPUS / "six_vertex.toml")
    assert code == 0 and "dim 15" in out and "dim 6" in out


def test_analyze_json_equivalent(capsys):
    code, out, _ = run(capsys, "analyze", CORPUS / "six_vertex.toml", "--json")
    report = json.loads(out)
    assert code == 0 and report["verdict"] == "equivalent" and report["schema"] == 1
    assert "timings" not in report


def test_analyze_ill_posed(capsys):
    code, out, _ = run(capsys, "analyze", CORPUS / "dual_numbers.toml", "--json")
    report = json.loads(out)
    assert code == 2 and report["verdict"] == "inconclusive"
    assert report["certificates"]["torsion_class"] == "refuted"
    assert report["witness"]["map_V_to_tauV"] == [[1]]


def test_analyze_text_and_timings(capsys):
    code, out, _ = run(capsys, "analyze", CORPUS / "ka2_s1.toml", "--timings")
    assert code == 0 and "verdict: equivalent" in out and "time torsion_certificate" in out


def test_json_reports_are_byte_identical(capsys):
    first = run(capsys, "analyze", CORPUS / "six_vertex.toml", "--json")[1]
    second = run(capsys, "analyze", CORPUS / "six_vertex.toml", "--json")[1]
    assert first == second


def test_generator(capsys):
    code, out, _ = run(capsys, "generator", CORPUS / "ka2_s1.toml")
    assert code == 0 and "R2 tops [2, 2]" in out


def test_end_algebra_output_reparses(capsys):
    code, out, _ = run(capsys, "end-algebra", CORPUS / "six_vertex.toml")
    assert code == 0
    data = parse_input(out)
    assert data.algebra.dim == 14 and len(data.algebra.quiver.arrows) == 6


def test_end_algebra_regular_round_trip(capsys):
    code, out, _ = run(capsys, "end-algebra", CORPUS / "six_vertex.toml", "--regular")
    assert code == 0
    alg = parse_input(out).algebra
    assert alg.dim == 15 and alg.quiver.vertices == ("1", "2", "3", "4", "5", "6")


def test_heart_subcommands(capsys):
    code, out, _ = run(capsys, "heart", "hom", CORPUS / "ka2_heart.toml")
    assert code == 0 and "= 1" in out
    for op in ("kernel", "cokernel"):
        code, out, _ = run(capsys, "heart", op, CORPUS / "ka2_heart.toml")
        assert code == 0 and "zero object of the heart" in out


def test_heart_needs_morphism(capsys):
    code, _, err = run(capsys, "heart", "kernel", CORPUS / "ka2_s1.toml")
    assert code == 3 and "morphism" in err


def test_lattice(capsys):
    code, out, _ = run(capsys, "lattice", CORPUS / "ka2_s1.toml")
    assert code == 0 and out.startswith("2 submodules")


def test_lattice_cap(capsys):
    code, _, err = run(capsys, "lattice", CORPUS / "six_vertex.toml", "--lattice-cap", "3")
    assert code == 3 and "error" in err


def test_prune_writes_survivors(capsys, tmp_path):
    target = tmp_path / "survivors.toml"
    code, out, _ = run(capsys, "prune", CORPUS / "ka2_prune.toml", "-o", target)
    assert code == 0 and "['S1', 'P1']" in out
    assert [m.name for m in parse_input(target.read_text()).modules] == ["S1", "P1"]


def test_input_errors_exit_3(capsys):
    code, _, err = run(capsys, "validate", CORPUS / "loop_no_relation.toml")
    assert code == 3 and "line 8, column 1" in err
    code, _, err = run(capsys, "validate", CORPUS / "does_not_exist.toml")
    assert code == 3


@pytest.mark.parametrize("argv", [[], ["bogus", "x"], ["analyze"], ["heart", "sideways", "f.toml"]])
def test_usage_errors_exit_64(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 64


def test_console_script():
    exe = shutil.which("tiltheart")
    cmd = [exe] if exe else [sys.executable, "-m", "tiltheart.cli"]
    res = subprocess.run(cmd + ["analyze", str(CORPUS / "ka2_s1.toml"), "--json"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["theta"]["dim"] == 3
