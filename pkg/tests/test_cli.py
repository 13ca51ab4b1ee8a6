import json
import subprocess
import sys

from strata.cli import main
from strata.picard import DivisorClass, zero_residue_class


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_class_text(capsys):
    code, out, _ = run(capsys, "class", "--g", "2", "--n", "3", "--kappa", "-2,-2,4,1,1")
    assert code == 0
    assert out.strip() == str(zero_residue_class(2, (-2, -2, 4)))


def test_class_json_roundtrip(capsys):
    code, out, _ = run(capsys, "class", "--g", "2", "--n", "3", "--kappa=-2,-2,4,1,1", "--json")
    assert code == 0
    data = json.loads(out)
    assert DivisorClass.from_json(data) == zero_residue_class(2, (-2, -2, 4))
    assert json.loads(json.dumps(data)) == data
    assert all(set(t["coefficient"]) == {"num", "den"} for t in data["terms"])


def test_class_latex(capsys):
    code, out, _ = run(capsys, "class", "--g", "2", "--n", "3", "--kappa", "-2,-2,4,1,1", "--latex")
    assert code == 0 and "\\psi" in out


def test_bad_input_exit_code(capsys):
    code, _, err = run(capsys, "class", "--g", "2", "--n", "3", "--kappa", "-2,-2,4")
    assert code == 2 and "error[" in err
    code, _, _ = run(capsys, "nosuchcommand")
    assert code == 2


def test_fnef(capsys):
    code, out, _ = run(capsys, "fnef", "--kappa", "-2,-2,-2,1,1,1", "--json")
    assert code == 0
    assert json.loads(out)["violations"] == []


def test_nef_certificate(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = run(capsys, "nef", "--kappa", "-3,-2,-2,1,1,1,2,-2",
                       "--emit-certificate", str(path))
    assert code == 0
    assert json.loads(path.read_text())["kind"] == "recursive"


def test_residues(capsys, tmp_path):
    from importlib import resources
    chart = resources.files("strata") / "fixtures" / "figure1.json"
    code, out, _ = run(capsys, "residues", "--chart", str(chart), "--json")
    assert code == 0
    assert json.loads(out)["residues"] == ["-v1-v3", "v1+v3"]


def test_grc(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({
        "vertices": [{"genus": 1, "markings": [1], "level": 1},
                     {"genus": 0, "markings": [2, 3, 4], "level": 0}],
        "edges": [{"ends": [0, 1], "orders": [0, -2]}],
        "markings": {"1": 0, "2": -2, "3": 1, "4": 1}, "zeroed": [2],
        "residues": [{"at": ["edge", 0, 1], "re": "1/2"}, {"at": ["mark", 2], "re": "-1/2"}]}))
    code, out, _ = run(capsys, "grc", "--graph", str(path), "--json")
    assert code == 1
    report = json.loads(out)
    assert not report["grc"]["ok"]


def test_hurwitz_orbits_deterministic(capsys, tmp_path):
    args = ["hurwitz", "orbits", "--degree", "3", "--profile", "[2,1],[2,1],[2,1],[2,1]"]
    code, one, _ = run(capsys, *args)
    assert code == 0
    data = json.loads(one)
    assert (data["orbits"], data["classes"]) == (1, 4)
    _, two, _ = run(capsys, *args, "--threads", "4")
    assert one == two
    _, three, _ = run(capsys, *args, "--cache", str(tmp_path))
    _, four, _ = run(capsys, *args, "--cache", str(tmp_path))
    assert one == three == four


def test_selftest(capsys, tmp_path):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and out.count("PASS") == 3
    code, _, _ = run(capsys, "selftest", "--fixtures", str(tmp_path))
    assert code == 0


def test_selftest_detects_mismatch(capsys, tmp_path):
    (tmp_path / "figure1.json").write_text(json.dumps({
        "chart": {"n": 4, "nplus": [2, 4], "nminus": [4], "pit": [4, 2, 1, 3],
                  "pib": [1, 2, 3, 4], "dvec": [0, 1], "splus": 1, "sminus": 0},
        "residues": ["v1", "v3"], "zero_residue_rank": 1}))
    code, out, _ = run(capsys, "selftest", "--fixtures", str(tmp_path))
    assert code == 1 and "FAIL" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "strata", "selftest"], capture_output=True, text=True)
    assert proc.returncode == 0
