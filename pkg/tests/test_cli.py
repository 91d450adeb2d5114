import json

import pytest

from frameforge.cli import main
from frameforge.core import builtin_frame, frame_from_dict


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_cep_example1(capsys):
    code, report = run_json(capsys, "cep", "--builtin", "example1")
    assert code == 0
    assert [c["holds"] for c in report["checks"]] == [True, True, True]


def test_cep_example_sh(capsys):
    code, report = run_json(capsys, "cep", "--builtin", "example-sh", "--method", "direct")
    assert code == 1
    assert report["checks"][0]["witness"] == {"subalgebra": [0, 3, 4, 7], "generator": 3}


def test_check_star_example1_reports_failure(capsys):
    # the star quasi-equation fails on the warm-up frame; the CLI reports the witness
    code, report = run_json(capsys, "check", "--builtin", "example1", "--property", "star")
    assert code == 1
    assert report["checks"][0]["witness"] == {"x": 1, "y": 5, "z": 4}


def test_check_formula(capsys):
    code, _, _ = run(capsys, "check", "--builtin", "example1", "x <= f(x)")
    assert code == 0


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "check", "--builtin", "example1", "x <= => y")
    assert code == 2 and "1:6" in err


def test_usage_errors(capsys):
    assert run(capsys, "cep")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "cep", "--builtin", "nope")[0] == 2
    assert run(capsys, "check", "--builtin", "example1")[0] == 2


def test_malformed_frame_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"atoms": 2, "f": [0, 1, 2, 9]}')
    code, _, err = run(capsys, "con", "--input", str(path))
    assert code == 2 and "ValueOutOfRange" in err and "f[3]" in err
    path.write_text('{"atoms": 2, "f": [0, 1]}')
    code, _, err = run(capsys, "con", "--input", str(path))
    assert code == 2 and "LengthMismatch" in err


def test_budget_exit_3(capsys):
    code, _, _ = run(capsys, "check", "--builtin", "example1", "--property", "star",
                     "--mode", "exhaustive", "--eval-budget", "10")
    assert code == 3
    assert run(capsys, "clone", "--builtin", "cycle:3", "--cap", "64")[0] == 3
    assert run(capsys, "con", "--builtin", "example1", "--max-atoms", "2")[0] == 3


def test_compute_commands(capsys):
    code, report = run_json(capsys, "con", "--builtin", "cycle:2")
    assert code == 0 and report["results"]["generators"] == [0, 2, 3]
    code, report = run_json(capsys, "sub", "--builtin", "example-sh")
    assert report["results"]["count"] == 5
    code, report = run_json(capsys, "clone", "--builtin", "example1")
    assert code == 0 and report["results"]["size"] == 16


def test_decision_commands(capsys):
    assert run(capsys, "hs-sh", "--builtin", "example-sh")[0] == 0
    assert run(capsys, "additive-equiv", "--builtin", "example1")[0] == 1
    assert run(capsys, "iso", "--builtin", "cycle:3", "--builtin", "two:id")[0] == 1
    assert run(capsys, "switching", "--builtin", "example1")[0] == 1


def test_frames_round_trip_through_files(tmp_path, capsys):
    out = tmp_path / "prod.json"
    code, report = run_json(capsys, "product", "--builtin", "example1", "--builtin", "two:zero",
                            "--emit", str(out))
    assert code == 0
    emitted = frame_from_dict(json.loads(out.read_text()))
    assert emitted == frame_from_dict(report["results"]["frame"])
    code, again = run_json(capsys, "con", "--input", str(out))
    assert frame_from_dict(again["frame"]) == emitted
    q = tmp_path / "q.json"
    assert run(capsys, "quotient", "--builtin", "example1", "--gen", "2", "--emit", str(q))[0] == 0
    assert frame_from_dict(json.loads(q.read_text())).atoms == 2
    assert run(capsys, "quotient", "--builtin", "example-sh", "--gen", "4")[0] == 1


def test_random_uses_environment_seed(capsys, monkeypatch):
    monkeypatch.setenv("FRAMEFORGE_SEED", "11")
    _, a = run_json(capsys, "random", "--atoms", "2", "--count", "3")
    _, b = run_json(capsys, "random", "--atoms", "2", "--count", "3", "--seed", "11")
    assert a["params"]["seed"] == 11 and a["results"] == b["results"]


def test_witnesses_reverify(capsys):
    from frameforge.cep import verify_witness

    _, report = run_json(capsys, "cep", "--builtin", "example-sh")
    frame = frame_from_dict(report["frame"])
    for check in report["checks"]:
        w = check["witness"]
        assert verify_witness(frame, (tuple(w["subalgebra"]), w["generator"]))


def test_json_is_deterministic(capsys):
    first = run(capsys, "hs-sh", "--builtin", "example-sh", "--json")[1]
    second = run(capsys, "hs-sh", "--builtin", "example-sh", "--json")[1]
    assert first == second
    assert json.loads(first)["elapsed_ms"] is None


def test_report_schema(capsys):
    _, report = run_json(capsys, "cep", "--builtin", "example1", "--timing")
    assert {"command", "params", "frame", "checks", "open_questions", "elapsed_ms"} <= set(report)
    assert set(report["checks"][0]) == {"name", "anchor", "holds", "status", "witness"}
    assert isinstance(report["elapsed_ms"], float)


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(capsys, "sub", "--builtin", "two:id", "--json", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["command"] == "sub"


def test_verify_paper_mutation(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    sh = builtin_frame("example-sh")
    table = list(sh.f)
    table[4] = 4  # undo one arrow of the figure
    bad.write_text(json.dumps({"atoms": 3, "f": table}))
    code, report = run_json(capsys, "verify-paper", "--no-corpus", "--override", f"example-sh={bad}")
    assert code == 1
    assert any(not c["holds"] and c["name"].startswith("example-sh") for c in report["checks"])


def test_verify_paper_open_question(capsys):
    code, report = run_json(capsys, "verify-paper", "--no-corpus")
    assert report["open_questions"][0]["frame"] == "cycle:2"
    assert report["open_questions"][0]["simple"] is False
    failing = [c["name"] for c in report["checks"] if not c["holds"]]
    assert failing == ["example1: star quasi-equation holds"]
    assert code == 1


@pytest.mark.parametrize("suite", ["oracle", "parser", "independence"])
def test_corpus_suites(capsys, suite):
    assert run(capsys, "corpus", "--suite", suite, "--random-count", "20")[0] == 0
