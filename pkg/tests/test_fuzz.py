"""The differential fuzzer: determinism, the mutation smoke check, and
shrinking."""

from loopcert import fuzz, simple
from loopcert import syntax as S


def test_count_zero_empty_report():
    report = fuzz.fuzz_differential(0, 42)
    assert report["count"] == 0 and report["passed"] == 0 and report["failures"] == []


def test_report_deterministic():
    a = fuzz.fuzz_differential(25, 7)
    b = fuzz.fuzz_differential(25, 7)
    assert a == b


def test_small_run_clean():
    report = fuzz.fuzz_differential(40, 1234, size_bound=25)
    assert report["failures"] == []


def test_corrupted_inc_translation_is_caught(monkeypatch):
    """Corrupting the inc rule to emit pred must surface within 200 programs,
    and the counterexample shrinks."""
    original = simple._translate_is_command

    def corrupted(cmd, tail, tctx):
        if isinstance(cmd, S.CInc):
            return S.TLet(cmd.name, S.TPred(S.TVar(cmd.name)), tail)
        return original(cmd, tail, tctx)

    monkeypatch.setattr(simple, "_translate_is_command", corrupted)
    report = fuzz.fuzz_differential(200, 42, 30)
    assert report["failures"], "the corrupted translation went unnoticed"
    first = report["failures"][0]
    assert first["phase"] == "differential"
    assert len(first["shrunk"]) <= len(first["program"])
    assert "inc(" in first["shrunk"]
