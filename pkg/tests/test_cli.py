from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from conftest import DATA
from nesscause import cli
from nesscause.harness import checks, default_corpus_dir

BACKUP = str(DATA / "backup.scm.txt")
ROCKS = str(DATA / "rocks.scm.txt")


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_backup(capsys):
    code, out, _ = run(capsys, "solve", BACKUP, "--model", "backup", "--context", "shot")
    assert code == 0
    assert out.splitlines() == ["Trainee = 1", "Supervisor = 0", "Victim = 1"]


def test_solve_rocks(capsys):
    code, out, _ = run(capsys, "solve", ROCKS, "--context", "both")
    assert code == 0 and "BH = 0" in out.splitlines()


def test_solve_unknown_or_ambiguous_context(capsys):
    code, _, err = run(capsys, "solve", BACKUP, "--context", "dawn")
    assert code == 2 and "dawn" in err
    code, _, err = run(capsys, "solve", BACKUP)
    assert code == 2 and "--context" in err


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.scm.txt"
    bad.write_text("var X: {0,1} = Y\n")
    code, _, err = run(capsys, "solve", str(bad))
    assert code == 2 and "UndeclaredVariable" in err
    code, _, _ = run(capsys, "solve", str(tmp_path / "missing.scm.txt"))
    assert code == 2


def test_cause_cness_with_certificate(capsys):
    code, out, _ = run(capsys, "cause", BACKUP, "--context", "shot", "--def", "cness", "Trainee=1", "Victim=1", "--explain")
    assert code == 0
    assert out.splitlines() == ["TRUE", "path=(), c'=0"]


def test_cause_bv_false(capsys):
    code, out, _ = run(capsys, "cause", BACKUP, "--context", "shot", "--def", "bv", "Trainee=1", "Victim=1")
    assert code == 1 and out.strip() == "FALSE"


def test_cause_json(capsys):
    code, out, _ = run(capsys, "cause", BACKUP, "--context", "shot", "--def", "hp", "Trainee=1", "Victim=1", "--explain", "--json")
    assert code == 0
    assert json.loads(out) == {
        "definition": "hp", "cause": "Trainee=1", "effect": "Victim=1",
        "verdict": True, "certificate": "intervention=[Supervisor<-0]",
    }


@pytest.mark.parametrize("args", [("Trainee=1", "Trainee=1"), ("Ghost=1", "Victim=1"), ("Trainee", "Victim=1")])
def test_cause_bad_arguments(capsys, args):
    code, _, err = run(capsys, "cause", BACKUP, "--context", "shot", "--def", "ness", *args)
    assert code == 2 and err.startswith("error:")


def test_unknown_definition_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["cause", BACKUP, "--context", "shot", "--def", "inus", "Trainee=1", "Victim=1"])
    assert exc.value.code == 2


def test_matrix_table_and_json(capsys):
    code, out, _ = run(capsys, "matrix", BACKUP, "--context", "shot")
    assert code == 0 and "invariants: ok" in out
    code, out, _ = run(capsys, "matrix", BACKUP, "--context", "shot", "--json")
    rows = json.loads(out)
    assert rows["Trainee=1 -> Victim=1"] == {
        "cd": False, "suff": True, "dness": True, "ness": True, "bv": False, "cness": True, "hp": True,
    }
    assert all(isinstance(v, bool) for row in rows.values() for v in row.values())
    _, again, _ = run(capsys, "matrix", BACKUP, "--context", "shot", "--json")
    assert again == out


def test_matrix_invariant_violation_exits_3(capsys, monkeypatch):
    real = checks.decide

    def broken(model, u, definition, cause, effect):
        v = real(model, u, definition, cause, effect)
        return type(v)(False) if definition == "ness" else v

    monkeypatch.setattr(checks, "decide", broken)
    code, _, err = run(capsys, "matrix", BACKUP, "--context", "shot")
    assert code == 3 and "invariant violation" in err


def test_check_corpus(capsys):
    code, out, _ = run(capsys, "check", "--corpus")
    assert code == 0 and "corpus: 41/41" in out


def test_check_corpus_failure(capsys, tmp_path):
    corpus = tmp_path / "c"
    shutil.copytree(default_corpus_dir(), corpus)
    g = corpus / "conjunction.golden.json"
    data = json.loads(g.read_text())
    data["A=0 -> E=0"]["ness"] = False
    g.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check", "--corpus", str(corpus))
    assert code == 1 and "FAIL conjunction" in out


def test_check_properties_repeatable(capsys):
    code, first, _ = run(capsys, "check", "--properties", "--seeds", "0..0", "--json")
    assert code == 0
    _, second, _ = run(capsys, "check", "--properties", "--seeds", "0..0", "--json")
    assert first == second
    report = json.loads(first)["properties"]
    assert report["seeds"] == [0, 0]


def test_check_properties_counts(capsys):
    code, out, _ = run(capsys, "check", "--properties", "--seeds", "0..30")
    assert code == 0
    assert "theorem_2:" in out and "0 violations" in out


def test_check_needs_a_suite(capsys):
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--properties", "--seeds", "9..3")[0] == 2


def test_fmt_is_canonical(capsys, tmp_path):
    code, out, _ = run(capsys, "fmt", BACKUP)
    assert code == 0
    f = tmp_path / "again.scm.txt"
    f.write_text(out)
    assert run(capsys, "fmt", str(f))[1] == out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nesscause.cli", "solve", BACKUP, "--context", "noshot"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["Trainee = 0", "Supervisor = 1", "Victim = 1"]
