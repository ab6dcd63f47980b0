import json

import pytest

from twk.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("obj,code", [("O(3)", 0), ("O(-5)", 0), ("O", 0), ("O(3)-perturbed", 1)])
def test_validate_line_bundles(capsys, obj, code):
    assert run(capsys, "validate", "p1-line-bundles", "--object", obj)[0] == code


@pytest.mark.parametrize("obj,code", [("sign", 0), ("repaired", 0), ("unrepaired", 1), ("cocycle-violating", 1)])
def test_validate_equivariant(capsys, obj, code):
    assert run(capsys, "validate", "z2-sign-rep", "--object", obj)[0] == code


def test_validate_json_payload(capsys):
    code, out, _ = run(capsys, "--format", "json", "validate", "p1-line-bundles", "--object", "O(3)-perturbed")
    payload = json.loads(out)
    assert code == 1
    assert payload["object"] == "O(3)-perturbed"
    code, out, _ = run(capsys, "validate", "p1-line-bundles", "--object", "O(2)", "--format", "json")
    assert code == 0 and json.loads(out)["object"] == "O(2)"


@pytest.mark.parametrize("argv", [
    ("validate", "p1-line-bundles", "--object", "no-such"),
    ("validate", "/nonexistent/manifest.json", "--object", "x"),
    ("nerve", "p1-line-bundles", "--level", "-1"),
    ("frobnicate",),
    ("cohomology", "z2-sign-rep", "--from", "sign", "--to", "sign"),
    ("roundtrip", "z2-sign-rep", "--object", "sign"),
    ("equivariant", "p1-line-bundles", "--object", "O"),
])
def test_input_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_malformed_manifest(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"cover": {"opens": ["U0"]}, "objects": {"x": {"type": "twisted", "components": [1.5]}}}')
    code, _, err = run(capsys, "validate", str(p), "--object", "x")
    assert code == 2 and err.startswith("error:")
    p.write_text("{not json")
    assert run(capsys, "validate", str(p), "--object", "x")[0] == 2


def test_cohomology_values(capsys):
    code, out, _ = run(capsys, "--format", "json", "cohomology", "p1-line-bundles", "--from", "O", "--to", "O(2)")
    assert code == 0 and json.loads(out)["totals"] == {"0": 3, "1": 0}
    code, out, _ = run(capsys, "cohomology", "p1-line-bundles", "--from", "O", "--to", "O(-2)")
    assert code == 0 and "H^1: 1" in out


def test_cohomology_refuses_invalid_objects(capsys):
    code, out, _ = run(capsys, "cohomology", "p1-line-bundles", "--from", "O", "--to", "O(3)-perturbed")
    assert code == 1 and "refusing" in out


def test_cohomology_threads(capsys, monkeypatch):
    monkeypatch.setenv("TWK_THREADS", "3")
    code, out, _ = run(capsys, "--format", "json", "cohomology", "p1-line-bundles", "--from", "O(1)", "--to", "O(-2)")
    assert code == 0 and json.loads(out)["totals"] == {"0": 0, "1": 2}
    monkeypatch.setenv("TWK_THREADS", "many")
    assert run(capsys, "cohomology", "p1-line-bundles", "--from", "O", "--to", "O")[0] == 2


def test_roundtrip(capsys):
    code, out, _ = run(capsys, "roundtrip", "three-open-nerve", "--object", "random-f7")
    assert code == 0 and "identical" in out


def test_equivariant_command(capsys):
    code, out, _ = run(capsys, "--format", "json", "equivariant", "z2-sign-rep", "--object", "unrepaired")
    payload = json.loads(out)
    assert code == 1
    assert payload["expanded_equations"][1]["violations"]
    assert run(capsys, "equivariant", "z2-sign-rep", "--object", "swap")[0] == 0


def test_nerve_output(capsys):
    code, out, _ = run(capsys, "--format", "json", "nerve", "p1-line-bundles", "--level", "1")
    payload = json.loads(out)
    assert code == 0
    assert payload["count"] == 4
    assert payload["split_factors"] == {"0,0": 2, "0,1": 2}
    code, out, _ = run(capsys, "nerve", "z2-sign-rep", "--level", "2")
    assert code == 0 and out.startswith("level 2: 4 simplices")


def test_selftest_passes_by_default(capsys):
    code, out, _ = run(capsys, "selftest", "--trials", "1", "--max-level", "2")
    assert code == 0
    assert out.count("PASS") == 7


def test_selftest_inject_bad_writes_revalidating_counterexample(capsys, tmp_path):
    out_path = tmp_path / "ce.json"
    code, out, _ = run(capsys, "selftest", "--trials", "1", "--max-level", "2", "--inject-bad", "--out", str(out_path))
    assert code == 1 and "FAIL  maurer-cartan" in out
    manifest = json.loads(out_path.read_text())
    (name,) = manifest["objects"]
    assert run(capsys, "validate", str(out_path), "--object", name)[0] == 1
