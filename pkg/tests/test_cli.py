import json
import subprocess
import sys

import pytest

from permlab.cli import main
from permlab.matrix_io import load_matrix, parse_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_per_drury_exact(capsys):
    code, doc, _ = run(capsys, "per", "--input", "builtin:drury", "--exact")
    assert code == 0
    assert doc["value"] == {"value": "45", "exact": True, "radius": 0.0}
    m = doc["manifest"]
    assert m["subcommand"] == "per" and m["options"]["mode"] == "exact"
    assert m["inputs"][0]["digest"] == load_matrix("builtin:drury").digest()
    assert "version" in m and "seconds" in m["timing"]


def test_per_float_mode(capsys):
    code, doc, _ = run(capsys, "per", "-i", "builtin:shchesnovich", "--float", "--precision", "80")
    assert code == 0 and doc["exact"] is False
    assert abs(float(doc["value"]["value"]) - 814016640) <= doc["value"]["radius"] + 1e-6
    assert doc["manifest"]["options"]["mode"] == "float"


def test_bad_matrix_names_line(tmp_path, capsys):
    p = tmp_path / "bad.mat"
    p.write_text("matrix 2 rational\n1 2 3\n4 5\n")
    code, doc, err = run(capsys, "per", "--input", str(p))
    assert code == 1
    assert doc["error"]["line"] == 2 and "line 2" in err


def test_usage_errors_exit_one(capsys):
    assert main(["bogus"]) == 1
    capsys.readouterr()
    assert main(["per"]) == 1
    capsys.readouterr()
    assert main([]) == 1
    capsys.readouterr()
    assert main(["per", "--input", "/nonexistent.mat"]) == 1


def test_det_gmf_immanant(tmp_path, capsys):
    p = tmp_path / "a.mat"
    p.write_text("matrix 3 rational\n1 2 3\n4 5 6\n7 8 10\n")
    assert run(capsys, "det", "-i", str(p))[1]["value"]["value"] == "-3"
    assert run(capsys, "immanant", "-i", str(p), "--partition", "2,1")[1]["value"]["value"] == "-80"
    code, doc, _ = run(capsys, "gmf", "-i", str(p), "--character", "sign")
    assert doc["value"]["value"] == "-3" and doc["group_order"] == 6
    code, doc, _ = run(capsys, "gmf", "-i", str(p), "--group", "(1 2)")
    # identity and (1 2): 1*5*10 + 2*4*10
    assert doc["value"]["value"] == "130"
    code, doc, _ = run(capsys, "gmf", "-i", str(p), "--group", "(1 2 3)", "--character", "linear:1")
    assert code == 0 and doc["group_order"] == 3
    assert main(["gmf", "-i", str(p), "--group", "(1 2)", "--character", "2,1"]) == 1


def test_schur_and_dump(tmp_path, capsys):
    dump = tmp_path / "pi.mat"
    code, doc, _ = run(capsys, "schur", "-i", "builtin:shchesnovich")
    assert code == 0 and doc["size"] == 120 and doc["summary"]["rank"] == 27
    assert doc["summary"]["pot_violated"] is True
    p = tmp_path / "a.mat"
    p.write_text("matrix 3 gaussian\n2 1+i 0\n1-i 3 1\n0 1 1\n")
    code, doc, _ = run(capsys, "schur", "-i", str(p), "--dump", str(dump))
    D = parse_matrix(dump.read_text())
    assert D.n == 6 and D.field == "gaussian"
    assert main(["schur", "-i", "builtin:shchesnovich", "--dump", str(dump)]) == 1


def test_check_exit_codes(capsys):
    code, doc, _ = run(capsys, "check", "bapat-sunder", "-i", "builtin:drury")
    assert code == 2
    assert doc["reports"][0]["verdict"] == "violated" and doc["reports"][0]["ratio"] == "1237/1152"
    code, doc, _ = run(capsys, "check", "chollet", "-i", "builtin:drury")
    assert code == 0 and doc["reports"][0]["verdict"] == "holds"
    code, doc, _ = run(capsys, "check", "pot", "-i", "builtin:shchesnovich")
    assert code == 2


def test_check_variants(tmp_path, capsys):
    p = tmp_path / "a.mat"
    p.write_text("matrix 4 rational\n4 1 0 1\n1 3 1 0\n0 1 2 1\n1 0 1 3\n")
    for argv in (["classical", "--split", "2"], ["per-in-per", "--blocks", "2"], ["det-in-det", "--blocks", "2"],
                 ["drury"], ["dominance", "--character", "2,2"], ["pate", "--k", "2"], ["per-max"],
                 ["hadamard-power", "--kmax", "3"]):
        code, doc, _ = run(capsys, "check", *argv, "-i", str(p))
        assert code == 0, argv
    assert main(["check", "per-in-per", "--blocks", "3", "-i", str(p)]) == 1


def test_convert_round_trip(tmp_path, capsys):
    out = tmp_path / "h.mat"
    code, doc, _ = run(capsys, "convert", "-i", "builtin:shchesnovich", "--to", "cyc40", "-o", str(out))
    assert code == 0 and doc["to"] == "cycN:40"
    a = run(capsys, "per", "-i", "builtin:shchesnovich")[1]["value"]
    b = run(capsys, "per", "-i", str(out))[1]["value"]
    assert a == b
    code, doc, _ = run(capsys, "convert", "-i", "builtin:drury", "--to", "gaussian")
    assert code == 1 and "FieldMismatch" in doc["error"]["kind"]


def test_search_state_and_resume(tmp_path, capsys):
    s1, s2 = tmp_path / "a.json", tmp_path / "b.json"
    base = ["search", "--target", "chollet", "--n", "2", "--seed", "3", "--threads", "1"]
    code, doc, _ = run(capsys, *base, "--budget", "60", "--state", str(s1))
    assert code == 0 and doc["violations"] == 0
    run(capsys, *base, "--budget", "20", "--state", str(s2))
    code, doc, err = run(capsys, "search", "--budget", "40", "--state", str(s2), "--threads", "1")
    assert "resuming" in err
    assert s1.read_bytes() == s2.read_bytes()


def test_search_pinned_violation(capsys):
    code, doc, _ = run(capsys, "search", "--target", "bapat_sunder", "--pinned", "builtin:drury", "--budget", "1")
    assert code == 2 and doc["candidates"][0]["exact_ratio"] == "1237/1152"


def test_search_requires_target(capsys):
    assert main(["search", "--budget", "1"]) == 1


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("PERMLAB_THREADS", "3")
    code, doc, _ = run(capsys, "det", "-i", "builtin:drury")
    assert doc["manifest"]["options"]["threads"] == 3
    monkeypatch.setenv("PERMLAB_THREADS", "x")
    assert main(["det", "-i", "builtin:drury"]) == 1


def test_verify_paper_and_module_entry():
    proc = subprocess.run([sys.executable, "-m", "permlab", "verify-paper"], capture_output=True, text=True)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["ok"] and doc["mismatches"] == []
    assert doc["manifest"]["subcommand"] == "verify-paper"


def test_verify_paper_mismatch_exit(monkeypatch, capsys):
    from permlab import cli
    from permlab.registry import CheckOutcome, PaperReport

    def broken(raise_on_mismatch=True):
        bad = CheckOutcome("drury", "per", 45, 44, False, 0.0)
        return PaperReport([bad], [], 0.0)

    monkeypatch.setattr(cli, "verify_paper", broken)
    code, doc, err = run(capsys, "verify-paper")
    assert code == 3 and not doc["ok"] and "mismatch" in err


@pytest.mark.parametrize("argv", [["--version"], ["per", "--help"]])
def test_help_and_version(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
