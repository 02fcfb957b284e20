import json
import subprocess
import sys

import pytest

from homalgebroid.algebroid import algebroid_to_json
from homalgebroid.cli import main
from homalgebroid.fixtures import twisted_line


@pytest.fixture
def twisted_file(tmp_path):
    path = tmp_path / "twisted.json"
    path.write_text(json.dumps(algebroid_to_json(twisted_line())))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_file_passes(capsys, twisted_file):
    code, out, _ = run(capsys, "check", "--input", twisted_file)
    assert code == 0 and "=> pass" in out


def test_check_file_declared_b(capsys, twisted_file):
    data = json.loads(twisted_file.read_text())
    data["variant"] = "B"
    twisted_file.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check", "--input", twisted_file)
    # the rank-one data with zero bracket is valid under either definition
    assert code == 0


def test_check_failure_exit_one(capsys):
    code, out, _ = run(capsys, "check", "--builtin", "twisted-line", "--perturb", "anchor:1,1=x", "--emit", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["summary"]["status"] == "fail"
    failing = [c for c in doc["checks"] if c["status"] == "fail"]
    assert failing and "witness" in failing[0]


def test_malformed_polynomial_exit_two(capsys, twisted_file):
    data = json.loads(twisted_file.read_text())
    data["anchor"] = [["3x^"]]
    twisted_file.write_text(json.dumps(data))
    code, _, err = run(capsys, "check", "--input", twisted_file)
    assert code == 2 and "position 1" in err


def test_missing_and_invalid_files(capsys, tmp_path):
    code, _, err = run(capsys, "check", "--input", tmp_path / "nope.json")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "check", "--input", bad)
    assert code == 2 and "line 1" in err
    code, _, _ = run(capsys, "check", "--builtin", "no-such-thing")
    assert code == 2


def test_check_homlie_builtins(capsys):
    for name in ("heisenberg", "aff2"):
        code, out, _ = run(capsys, "check", "--builtin", name)
        assert code == 0, out


def test_check_homlie_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"dim": 2, "c": [[["0", "0"], ["0", "1"]], [["0", "-1"], ["0", "0"]]],
                                "alpha": [["2", "0"], ["0", "2"]]}))
    code, out, _ = run(capsys, "check", "--input", path)
    assert code == 1 and "alpha_morphism" in out


@pytest.mark.parametrize("builtin,function,s,args,expected", [
    ("twisted-line", "x", 0, "[e1]", "1"),
    ("twisted-line", "x", 1, "[e1]", "-1"),
    ("tangent-line", "x^3", 0, "[e1]", "3*x^2"),
    ("twisted-line", "x", 1, "[x*e1]", "x"),
])
def test_differential_values(capsys, builtin, function, s, args, expected):
    code, out, _ = run(capsys, "differential", "--builtin", builtin, "--function", function, "--s", s, "--args", args)
    assert code == 0 and out.strip() == expected


def test_differential_of_cochain_literal(capsys):
    lit = json.dumps({"kind": "basis", "k": 1, "twist": 0, "components": {"1": "1"}})
    code, out, _ = run(capsys, "differential", "--builtin", "twisted-line", "--cochain", lit,
                       "--s", 0, "--args", "[x*e1, e1]")
    assert code == 0 and out.strip() == "0"


def test_differential_arity_mismatch(capsys):
    code, _, err = run(capsys, "differential", "--builtin", "twisted-line", "--function", "x", "--args", "[e1, e1]")
    assert code == 2 and "takes 1" in err


def test_differential_bad_section(capsys):
    code, _, _ = run(capsys, "differential", "--builtin", "twisted-line", "--function", "x", "--args", "[e2]")
    assert code == 2


def test_reconstruct_reproduces_input(capsys, tmp_path, twisted_file):
    out_path = tmp_path / "rec.json"
    code, _, _ = run(capsys, "reconstruct", "--input", twisted_file, "--out", out_path)
    assert code == 0
    assert json.loads(out_path.read_text()) == json.loads(twisted_file.read_text())


def test_convert_to_b(capsys, tmp_path):
    out_path = tmp_path / "b.json"
    code, _, _ = run(capsys, "convert", "--builtin", "twisted-line", "--target", "B", "--out", out_path)
    assert code == 0
    data = json.loads(out_path.read_text())
    assert data["anchor"] == [["-1"]] and data["variant"] == "B"


def test_convert_refusal(capsys):
    code, out, _ = run(capsys, "convert", "--builtin", "projected-line", "--target", "B")
    assert code == 1 and "alpha_invertible" in out


def test_reconstruct_refusal(capsys):
    code, _, _ = run(capsys, "reconstruct", "--builtin", "twisted-line", "--perturb", "alpha:1,1=0")
    assert code == 1


@pytest.mark.parametrize("builtin", ["twisted-line", "tangent-line"])
def test_proptest_builtins(capsys, builtin):
    code, out, _ = run(capsys, "proptest", "--input", f"builtin:{builtin}", "--seed", 7, "--trials", 4)
    assert code == 0, out


def test_proptest_names_first_failure(capsys):
    code, out, _ = run(capsys, "proptest", "--builtin", "twisted-line", "--perturb", "bracket:1,1,1=1")
    assert code == 1
    assert "first failing identity: axioms.antisymmetry" in out


def test_bad_perturbation_is_input_error(capsys):
    code, _, _ = run(capsys, "proptest", "--builtin", "twisted-line", "--perturb", "bracket=1")
    assert code == 2


def test_invalid_config(capsys):
    code, _, _ = run(capsys, "check", "--builtin", "twisted-line", "--s-min", 2, "--s-max", 1)
    assert code == 2


def test_json_output_is_byte_identical(capsys):
    argv = ["check", "--builtin", "twisted-action", "--seed", "42", "--emit", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert json.loads(first)["meta"]["seed"] == 42


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "homalgebroid", "proptest", "--builtin", "tangent-line", "--trials", "3",
           "--emit", "json"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout
