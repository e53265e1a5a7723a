"""The command-line driver: exit codes, JSON reports, translate output."""

import json
import os
import subprocess
import sys

from loopcert import cli, pipeline

CORPUS = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", "corpus"))


def run_cli(args, **kw):
    return cli.main(args)


def test_check_ok(capsys):
    assert run_cli(["check", os.path.join(CORPUS, "figure1.loop")]) == 0
    out = capsys.readouterr().out
    assert "check-source" in out and "p_add" in out


def test_check_source_error(capsys):
    path = os.path.join(CORPUS, "negative", "neg_bad_axiom.loop")
    assert run_cli(["check", path]) == 2
    assert "[T_AX]" in capsys.readouterr().out


def test_parse_error_exit(capsys):
    path = os.path.join(CORPUS, "negative", "neg_meta_subst.loop")
    assert run_cli(["check", path]) == 1


def test_pipeline_json_deterministic(capsys):
    path = os.path.join(CORPUS, "figure1.loop")
    assert run_cli(["pipeline", path, "--json"]) == 0
    first = json.loads(capsys.readouterr().out)
    assert run_cli(["pipeline", path, "--json"]) == 0
    second = json.loads(capsys.readouterr().out)

    def strip(report):
        for phase in report["phases"]:
            phase.pop("elapsed_s")
        return report

    assert strip(first) == strip(second)
    names = [p["name"] for p in first["phases"]]
    assert names == ["parse", "check-source", "translate", "check-target", "evaluate"]


def test_pipeline_args_override_eval(capsys):
    path = os.path.join(CORPUS, "figure1.loop")
    assert run_cli(["pipeline", path, "--args", "4,1", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    evaluate = [p for p in report["phases"] if p["name"] == "evaluate"][0]
    assert evaluate["payload"]["value"] == "<5>"


def test_translate_writes_recheckable_file(tmp_path, capsys):
    src = os.path.join(CORPUS, "figure1.loop")
    out = str(tmp_path / "figure1.t")
    assert run_cli(["translate", src, "-o", out]) == 0
    capsys.readouterr()
    assert run_cli(["check", out]) == 0
    text = capsys.readouterr().out
    assert "FD" in text


def test_fmt_round_trip(tmp_path, capsys):
    src = os.path.join(CORPUS, "witness_call.loop")
    assert run_cli(["fmt", src]) == 0
    formatted = capsys.readouterr().out
    path = tmp_path / "w.loop"
    path.write_text(formatted, encoding="utf-8")
    assert run_cli(["check", str(path)]) == 0


def test_pipeline_all_uses_corpus_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LOOPCERT_CORPUS", CORPUS)
    assert run_cli(["pipeline", "--all"]) == 0
    out = capsys.readouterr().out
    assert "figure1.loop" in out and "figure2.loop" in out


def test_fuzz_exit_zero(capsys):
    assert run_cli(["fuzz", "--count", "5", "--seed", "3"]) == 0
    assert "5/5 passed" in capsys.readouterr().out


def test_eval_runtime_value(capsys):
    assert run_cli(["eval", os.path.join(CORPUS, "figure2.loop"), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    evaluate = [p for p in report["phases"] if p["name"] == "evaluate"][0]
    assert evaluate["payload"]["store"] == {"z": "5"}


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "loopcert.cli", "check", os.path.join(CORPUS, "figure1.loop")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
