import json
import shutil
import subprocess
import sys

import pytest

from pie_lifter import acceptance
from pie_lifter.cli import main
from pie_lifter.report import emit_report, write_atomic


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_validate(capsys):
    code, rep, _ = run(capsys, "validate")
    assert code == 0
    assert rep["verdicts"] == {"parse_print_roundtrip": True}
    assert rep["tool"]["name"] == "pie-lifter"
    assert "basics.2cat" in rep["inputs"]


def test_pie_check_comma(capsys, corpus_dir):
    code, rep, _ = run(capsys, "pie-check", "Comma")
    assert code == 0
    comma = rep["result"]["Comma"]
    assert comma["components"] == [["A"], ["B", "C"]]
    assert comma["initials"] == ["A", "C"]
    # a file argument reports every shape declared in it
    code, rep, _ = run(capsys, "--no-corpus", "pie-check", str(corpus_dir / "comma.2cat"))
    assert code == 0 and rep["result"]["Comma"]["initials"] == ["A", "C"]
    assert list(rep["inputs"]) == ["comma.2cat"]


def test_pie_check_inserter_file(capsys, corpus_dir):
    code, rep, _ = run(capsys, "--no-corpus", "pie-check", str(corpus_dir / "inserter.2cat"))
    assert code == 0 and rep["result"]["Ins"]["initials"] == ["A"]


def test_pie_check_failure_exit_code(capsys):
    code, rep, _ = run(capsys, "pie-check", "Cospan")
    assert code == 1 and rep["ok"] is False
    assert rep["verdicts"]["Cospan:pie"] is False


def test_limit_report(capsys):
    code, rep, _ = run(capsys, "limit", "prod_22")
    assert code == 0
    table = rep["result"]["limit"]
    assert table["counts"] == {"objects": 4, "arrows": 9}
    assert table["object_provenance"]["o1"] == [["0", "1"], ["id_0", "id_1"]]
    assert set(rep["result"]["projections"]) == {"P", "Q"}
    proj = rep["result"]["projections"]["P"]
    assert set(proj["objects"]) == set(table["objects"])
    assert set(proj["arrows"]) == {a["id"] for a in table["arrows"]}


def test_reports_are_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.json"
        assert main(["--out", str(target), "limit", "--oplax", "comma_iso"]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].endswith(b"\n")


def test_compare_inserter(capsys):
    code, rep, _ = run(capsys, "compare", "ins_two")
    assert code == 0 and rep["result"]["iso"] is True
    assert rep["result"]["weighted"]["w_ins"] == {"El": True, "Gamma": True}


def test_lift_pointed_inserter(capsys):
    code, rep, _ = run(capsys, "lift", "pointed_inserter", "--monad", "pointed", "--omega", "l")
    assert code == 0
    assert rep["verdicts"]["algebra_axioms"] is True
    assert rep["verdicts"]["detects_strictness"] is True
    assert rep["result"]["strict_projections"] == ["A"]


def test_lift_refusals(capsys):
    code, rep, _ = run(capsys, "lift", "pointed_inserter_bad", "--monad", "pointed", "--omega", "l")
    assert code == 1 and rep["verdicts"]["canonical_invertible"] is False
    assert rep["witnesses"]
    code, rep, _ = run(capsys, "lift", "lp_ins", "--monad", "pointed", "--omega", "s")
    assert code == 1 and rep["verdicts"]["diagram_valid"] is False


@pytest.mark.parametrize("argv", [
    ["lift", "pointed_inserter", "--monad", "identity", "--omega", "l"],
    ["limit", "no_such_diagram"],
    ["limit", "Comma"],
    ["frobnicate"],
    ["--corpus", "/nonexistent", "validate"],
])
def test_input_errors(capsys, argv):
    code, rep, err = run(capsys, *argv)
    assert code == 2 and rep is None
    assert err


def test_bad_file_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.2cat"
    bad.write_text("category A {\n  objects: x\n}\n")
    code, _, err = run(capsys, "--no-corpus", "validate", str(bad))
    assert code == 2 and "bad.2cat:3:1" in err


def test_failed_run_leaves_existing_output(tmp_path):
    target = tmp_path / "report.json"
    target.write_text("previous\n")
    assert main(["--out", str(target), "limit", "no_such_diagram"]) == 2
    assert target.read_text() == "previous\n"
    with pytest.raises(TypeError):
        write_atomic(target, emit_report({"x": 0.5}))
    assert target.read_text() == "previous\n"
    assert [p.name for p in tmp_path.iterdir()] == ["report.json"]


def test_check_all_subset(monkeypatch, tmp_path, capsys, corpus_dir):
    copy = tmp_path / "corpus"
    shutil.copytree(corpus_dir, copy)
    monkeypatch.setattr(acceptance, "CRITERIA", (acceptance.criterion_1, acceptance.criterion_4))
    code, rep, err = run(capsys, "check-all", str(copy))
    assert code == 0
    assert [c["number"] for c in rep["result"]["criteria"]] == [1, 4]
    assert "criterion 1" in err and "criterion 4" in err
    assert "pie_shapes.json" in rep["inputs"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pie_lifter.cli", "pie-check", "Ins"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["Ins"]["initials"] == ["A"]
