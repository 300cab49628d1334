import json
import subprocess
import sys

import pytest

from ntrans.cli import main
from ntrans.corpus import named
from ntrans.quiver import parse_quiver, serialize, validate
from conftest import GOLDEN

DATA = __import__("ntrans").__path__[0] + "/data"
A4 = f"{DATA}/a4rad2.quiver"
TILDE = f"{DATA}/tilde_a4rad2.quiver"
FREE = f"{DATA}/a2_free.quiver"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    data = json.loads(out)
    assert data["schema"] == "ntrans/1"
    return code, data


def test_koszul_json_a4rad2(capsys):
    code, data = run_json(capsys, "koszul", A4, "--max-degree", "10")
    assert code == 0
    assert data["p"] == 1 and data["koszul_up_to"] == 10 and "q" not in data
    assert data["command"] == "koszul"


def test_trivial_ext_then_koszul(capsys, tmp_path):
    out = tmp_path / "tilde.quiver"
    assert run(capsys, "trivial-ext", A4, "-o", out)[0] == 0
    assert out.read_text() == (GOLDEN / "tilde_a4rad2.quiver").read_text()
    code, text, _ = run(capsys, "koszul", out)
    assert code == 0 and "p = 2, q = 3" in text


def test_mixed_degree_input_is_exit_two(capsys, tmp_path):
    bad = tmp_path / "broken.quiver"
    bad.write_text("vertex 1 2\narrow a 1 2\narrow b 2 2\nrelation a + b.a\n")
    code, _, err = run(capsys, "validate", bad)
    assert code == 2
    assert "broken.quiver:4:" in err and "mixed-degree" in err


@pytest.mark.parametrize("argv", [
    ["dims", "missing.quiver"],
    ["dims", A4, "--max-degree", "0"],
    ["dims", A4, "--field", "gf4"],
    ["smash", A4, "-v", "0"],
    ["smash", A4, "-v", "2", "--window", "1..3"],
    ["smash", A4, "--window", "3..1"],
    ["truncate-slice", A4],
    ["truncate-slice", A4, "--slice", "9"],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_check_failures_are_exit_one(capsys, tmp_path):
    assert run(capsys, "admissible", FREE, "-n", "0")[0] == 1
    assert run(capsys, "trivial-ext", FREE)[0] == 1
    nk = tmp_path / "nk.quiver"
    nk.write_text("vertex 1\narrow x 1 1\narrow y 1 1\nrelation x.x\nrelation x.y - y.y\n")
    code, text, _ = run(capsys, "koszul", nk)
    assert code == 1 and "not (p,q)-Koszul" in text


def test_translation_and_admissible(capsys):
    code, data = run_json(capsys, "translation", A4, "-n", "0")
    assert code == 0
    assert data["translation"]["tau"] == {"2": "1", "3": "2", "4": "3"}
    assert data["check"]["passes"]
    code, data = run_json(capsys, "admissible", TILDE)
    assert code == 0 and data["pass"]


def test_dims_and_layers(capsys):
    code, data = run_json(capsys, "dims", TILDE)
    assert code == 0 and data["totals"] == [4, 6, 4]
    code, data = run_json(capsys, "layers", TILDE)
    assert [[x["simple"] for x in lev] for lev in data["layers"]["2"]] == [["2"], ["1", "3"], ["2"]]


def test_dual_and_double_dual(capsys):
    code, data = run_json(capsys, "dual", A4)
    assert code == 0 and data["relations"] == 0
    assert validate(parse_quiver(data["quiver"])) == []
    code, data = run_json(capsys, "double-dual", TILDE)
    assert code == 0 and data["double_dual_equal"] is True


def test_smash_window_and_slice(capsys, tmp_path):
    z = tmp_path / "z.quiver"
    q2 = tmp_path / "q2.quiver"
    assert run(capsys, "smash", A4, "-v", "0", "--window", "1..4", "-o", z)[0] == 0
    assert z.read_text() == (GOLDEN / "z_a4rad2_w1_4.quiver").read_text()
    assert run(capsys, "truncate-slice", z, "--slice", "1@1,2@1,3@1,4@1", "-o", q2)[0] == 0
    assert q2.read_text() == (GOLDEN / "q2.quiver").read_text()
    code, data = run_json(capsys, "almost-split", q2)
    assert code == 0 and data["oracle_agrees"]
    assert all(v["exists"] for v in data["vertices"])


def test_smash_cyclic(capsys):
    code, text, _ = run(capsys, "smash", A4, "-v", "2")
    assert code == 0
    q = parse_quiver(text)
    assert (len(q.vertices), len(q.arrows)) == (8, 12)


def test_hammock_dot_and_json(capsys):
    code, data = run_json(capsys, "hammock", A4, "--vertex", "2", "-n", "0")
    assert code == 0
    assert data["hammocks"][0]["levels"] == [[{"vertex": "2", "mult": 1}], [{"vertex": "3", "mult": 1}]]
    code, text, _ = run(capsys, "hammock", TILDE, "--vertex", "1", "--vertex", "2", "--format", "dot")
    assert code == 0 and text.count("digraph") == 2 and "rank=same" in text


def test_as_regular(capsys):
    code, data = run_json(capsys, "as-regular", TILDE)
    assert code == 0
    assert data["is_partial_AS_n_regular"] is True and data["gorenstein_parameter"] == 3
    code, data = run_json(capsys, "as-regular", A4, "-n", "0")
    assert data["is_partial_AS_n_regular"] == "out of theorem scope"


def test_export_dot(capsys):
    code, text, _ = run(capsys, "export-dot", A4)
    assert code == 0 and text.startswith("digraph") and '"1" -> "2"' in text


def test_field_override(capsys):
    code, data = run_json(capsys, "dims", A4, "--field", "gf3")
    assert code == 0 and data["totals"] == [4, 3]


def test_env_default_degree(capsys, monkeypatch):
    monkeypatch.setenv("NTRANS_MAX_DEGREE", "5")
    code, data = run_json(capsys, "koszul", A4)
    assert data["cap"] == 5 and data["koszul_up_to"] == 5
    monkeypatch.setenv("NTRANS_MAX_DEGREE", "abc")
    assert run(capsys, "koszul", A4)[0] == 2


@pytest.mark.parametrize("argv", [
    ["koszul", TILDE, "--json"], ["dims", TILDE, "--json", "--verbose"], ["smash", A4, "-v", "2"],
    ["almost-split", TILDE], ["export-dot", TILDE], ["hammock", TILDE, "--vertex", "1", "--format", "dot"],
])
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


@pytest.mark.parametrize("argv", [
    ["trivial-ext", A4], ["dual", A4], ["smash", A4, "-v", "1"], ["smash", A4, "--window", "0..2"],
])
def test_emitted_quivers_round_trip(capsys, tmp_path, argv):
    code, text, _ = run(capsys, *argv)
    assert code == 0
    q = parse_quiver(text)
    assert validate(q) == []
    assert serialize(q) == text
    f = tmp_path / "emitted.quiver"
    f.write_text(text)
    assert run(capsys, "validate", f)[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ntrans", "dims", A4], capture_output=True, text=True)
    assert proc.returncode == 0 and "degree 1: 3" in proc.stdout
    assert named("a4rad2") == parse_quiver(open(A4).read())
