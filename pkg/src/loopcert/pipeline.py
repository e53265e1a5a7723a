"""The certification pipeline: parse, check the source, translate,
re-check the image, evaluate; with machine-readable reports.

Exit codes: 0 all phases pass; 1 parse error; 2 source type error;
3 translation-target type error (always a defect in the toolchain);
4 runtime discrepancy or evaluation failure; 5 fuzz counterexample.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from . import dependent, envs, runtime, simple
from . import syntax as S
from .errors import CheckError, EvalError, LoopcertError, ParseError
from .parser import parse
from .printer import show, show_env, show_file, show_qenv, show_term
from .simple import CheckCtx, TranslateCtx

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_SOURCE = 2
EXIT_TARGET = 3
EXIT_RUNTIME = 4
EXIT_FUZZ = 5


@dataclass
class Report:
    file: str
    discipline: str = ""
    phases: List[Dict[str, Any]] = field(default_factory=list)
    diagnostics: List[Dict[str, Any]] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def phase(self, name: str, ok: bool, elapsed: float, payload: Dict[str, Any]) -> None:
        self.phases.append({"name": name, "ok": ok, "elapsed_s": round(elapsed, 6), "payload": payload})

    def diag(self, rule: str, span, message: str, severity: str = "error") -> None:
        self.diagnostics.append(
            {
                "severity": severity,
                "rule": rule,
                "span": list(span) if span else None,
                "message": message,
            }
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "file": self.file,
            "discipline": self.discipline,
            "phases": self.phases,
            "diagnostics": self.diagnostics,
            "exit_code": self.exit_code,
        }


@dataclass
class CheckedFile:
    sf: S.SourceFile
    cst_types: Tuple[Tuple[str, Any], ...]  # Prop (I) or Formula (F)
    trace: List[str]
    warnings: Tuple[str, ...] = ()


@dataclass
class TranslatedFile:
    terms: Tuple[Tuple[str, S.Term], ...]
    main_term: Optional[S.Term]
    target: S.SourceFile  # the functional-discipline image


def check_source(sf: S.SourceFile, trace: Optional[List[str]] = None) -> CheckedFile:
    """Check every cst and the main sequence of a file, any discipline."""
    ctx = CheckCtx(trace=trace if trace is not None else [])
    types: List[Tuple[str, Any]] = []
    gamma: S.Env = ()
    if sf.discipline == "IS":
        for name, expr in sf.csts:
            ty = simple.is_check_expr(gamma, (), expr, ctx)
            gamma = gamma + ((name, ty),)
            types.append((name, ty))
        if sf.main is not None:
            out_env = _main_out_env(sf)
            names, _ = envs.split(out_env)
            simple.check_header_idents((), names, "T_PROC", sf.main.span)
            final = simple.is_check_seq(gamma, envs.init(names, S.PTop()), sf.main.body, ctx)
            if not S.alpha_env(final, out_env):
                raise CheckError(
                    "T_PROC",
                    f"main ends with store {show_env(final)}, declared out is {show_env(out_env)}",
                    span=sf.main.span,
                    reason="OutputMismatch",
                )
    elif sf.discipline == "ID":
        for name, expr in sf.csts:
            ty = dependent.id_check_expr(gamma, (), expr, ctx)
            gamma = gamma + ((name, ty),)
            types.append((name, ty))
        if sf.main is not None:
            names, _ = envs.qsplit(sf.main.out)
            simple.check_header_idents((), names, "T_PROC_DECL", sf.main.span)
            dependent.id_check_seq(gamma, envs.init(names, S.PTop()), sf.main.body, sf.main.out, ctx)
    elif sf.discipline in ("FS", "FD"):
        check = simple.fs_check_term if sf.discipline == "FS" else dependent.fd_check_term
        for name, term in sf.csts:
            ty = check(gamma, term, ctx)
            gamma = gamma + ((name, ty),)
            types.append((name, ty))
        if sf.main is not None:
            types.append(("main", check(gamma, sf.main.term, ctx)))
    else:
        raise LoopcertError(f"unknown discipline {sf.discipline}")
    return CheckedFile(sf, tuple(types), ctx.trace or [], tuple(ctx.warnings))


def _main_out_env(sf: S.SourceFile) -> S.Env:
    out = sf.main.out
    if not isinstance(out, S.QSimple):
        raise CheckError("T_PROC", "IS main cannot declare an existential output", span=sf.main.span)
    return out.env


def translate_file(sf: S.SourceFile) -> TranslatedFile:
    """Translate a checked imperative file into its functional image."""
    tctx = TranslateCtx()
    if sf.discipline == "IS":
        terms = tuple((name, simple.translate_is_expr(e, tctx)) for name, e in sf.csts)
        main_term = None
        if sf.main is not None:
            names, _ = envs.split(_main_out_env(sf))
            main_term = simple.translate_is_seq(sf.main.body, names, tctx)
        target = "FS"
    elif sf.discipline == "ID":
        terms = tuple((name, dependent.translate_id_expr(e, tctx)) for name, e in sf.csts)
        main_term = None
        if sf.main is not None:
            names, _ = envs.qsplit(sf.main.out)
            main_term = dependent.translate_id_seq(sf.main.body, names, tctx)
        target = "FD"
    else:
        raise LoopcertError(f"{sf.discipline} files are already functional; nothing to translate")
    image = S.SourceFile(
        target, terms, S.MainF(main_term) if main_term is not None else None
    )
    return TranslatedFile(terms, main_term, image)


def check_target(
    sf: S.SourceFile, checked: CheckedFile, translated: TranslatedFile, trace: Optional[List[str]] = None
) -> Tuple[Tuple[str, S.Formula], ...]:
    """Re-check the translation and verify type preservation."""
    ctx = CheckCtx(trace=trace if trace is not None else [])
    functional_check = simple.fs_check_term if sf.discipline == "IS" else dependent.fd_check_term
    type_image = simple.translate_is_type if sf.discipline == "IS" else dependent.translate_id_type
    sigma: S.Env = ()
    result: List[Tuple[str, S.Formula]] = []
    for (name, term), (_, source_ty) in zip(translated.terms, checked.cst_types):
        fty = functional_check(sigma, term, ctx)
        want = type_image(source_ty)
        if not S.alpha_eq(fty, want):
            raise CheckError(
                "TYPE_PRESERVATION",
                f"'{name}' translates at {show(fty)}, the source type maps to {show(want)}",
            )
        sigma = sigma + ((name, fty),)
        result.append((name, fty))
    if translated.main_term is not None:
        fty = functional_check(sigma, translated.main_term, ctx)
        if sf.discipline == "IS":
            _, out_types = envs.split(_main_out_env(sf))
            want = S.FTuple(tuple(simple.translate_is_type(t) for t in out_types))
        else:
            _, want = dependent.translate_qenv(sf.main.out)
        if not S.alpha_eq(fty, want):
            raise CheckError(
                "TYPE_PRESERVATION",
                f"main translates at {show(fty)}, the declared output maps to {show(want)}",
            )
        result.append(("main", fty))
    return tuple(result)


def _closed_term(translated: TranslatedFile, entry: Optional[str]) -> S.Term:
    if entry is not None:
        body: S.Term = S.TVar(entry)
    elif translated.main_term is not None:
        body = translated.main_term
    else:
        raise EvalError("NoMain", "the file has no main sequence and no entry was chosen")
    for name, term in reversed(translated.terms):
        body = S.TLet(name, term, body)
    return body


def evaluate_file(
    sf: S.SourceFile,
    translated: TranslatedFile,
    args: Optional[Tuple[int, ...]],
    fuel: int,
) -> Dict[str, Any]:
    """Erase and run; for jump-free IS input the direct interpreter must
    agree with the machine on the final store."""
    entry = sf.csts[-1][0] if args is not None and sf.csts else None
    erased = runtime.erase(_closed_term(translated, entry))
    if args is not None:
        erased = runtime.RApp(erased, runtime.RTuple(tuple(runtime.RNum(n) for n in args)))
    value = runtime.evaluate(erased, fuel)
    payload: Dict[str, Any] = {"value": runtime.show_value(value)}
    if entry is None and sf.main is not None:
        names, _ = (
            envs.split(_main_out_env(sf)) if sf.discipline == "IS" else envs.qsplit(sf.main.out)
        )
        if isinstance(value, tuple) and len(value) == len(names):
            payload["store"] = {x: runtime.show_value(v) for x, v in zip(names, value)}
    if sf.discipline == "IS":
        oracle = runtime.interpret_program(sf.csts, sf.main, entry, args or ())
        payload["interpreter"] = runtime.show_value(oracle)
        if oracle != value:
            raise EvalError(
                "Discrepancy",
                f"interpreter yields {runtime.show_value(oracle)}, machine yields {runtime.show_value(value)}",
            )
    return payload


def run_pipeline(
    path: str,
    text: Optional[str] = None,
    system: Optional[str] = None,
    args: Optional[Tuple[int, ...]] = None,
    fuel: int = runtime.DEFAULT_FUEL,
    do_eval: bool = True,
    want_trace: bool = False,
    stop_after: str = "evaluate",
) -> Report:
    report = Report(file=path)
    if text is None:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()

    start = time.monotonic()
    try:
        sf = parse(text)
    except ParseError as ex:
        report.phase("parse", False, time.monotonic() - start, {})
        report.diag("PARSE", (ex.line, ex.col), str(ex))
        report.exit_code = EXIT_PARSE
        return report
    if system is not None:
        sf = S.SourceFile(system, sf.csts, sf.main, sf.notes, sf.warnings)
    report.discipline = sf.discipline
    for note in sf.notes:
        report.diag("NOTE", None, note, severity="note")
    for warning in sf.warnings:
        report.diag("PARSE", None, warning, severity="warning")
    report.phase(
        "parse", True, time.monotonic() - start,
        {"csts": [name for name, _ in sf.csts], "has_main": sf.main is not None},
    )

    start = time.monotonic()
    trace: List[str] = []
    try:
        checked = check_source(sf, trace)
    except CheckError as ex:
        report.phase("check-source", False, time.monotonic() - start, {})
        report.diag(ex.rule, ex.span, ex.message)
        report.exit_code = EXIT_SOURCE
        return report
    for warning in checked.warnings:
        report.diag("CHECK", None, warning, severity="warning")
    payload = {
        "types": {name: show(ty) for name, ty in checked.cst_types},
        "derivation_size": len(trace),
    }
    if sf.main is not None and sf.discipline in ("IS", "ID"):
        payload["main_out"] = (
            show_env(_main_out_env(sf)) if sf.discipline == "IS" else show_qenv(sf.main.out)
        )
    if want_trace:
        payload["trace"] = list(trace)
    report.phase("check-source", True, time.monotonic() - start, payload)
    if stop_after == "check-source":
        return report

    if sf.discipline in ("FS", "FD"):
        if do_eval and (sf.main is not None or args is not None):
            _run_eval_phase(report, sf, TranslatedFile(sf.csts, sf.main.term if sf.main else None, sf), args, fuel)
        return report

    start = time.monotonic()
    try:
        translated = translate_file(sf)
    except LoopcertError as ex:
        report.phase("translate", False, time.monotonic() - start, {})
        report.diag("TRANSLATE", None, str(ex))
        report.exit_code = EXIT_TARGET
        return report
    report.phase(
        "translate", True, time.monotonic() - start,
        {"terms": {name: len(show_term(t)) for name, t in translated.terms}},
    )
    if stop_after == "translate":
        return report

    start = time.monotonic()
    trace2: List[str] = []
    try:
        target_types = check_target(sf, checked, translated, trace2)
    except CheckError as ex:
        report.phase("check-target", False, time.monotonic() - start, {})
        report.diag(ex.rule, ex.span, ex.message)
        report.exit_code = EXIT_TARGET
        return report
    payload = {
        "types": {name: show(ty) for name, ty in target_types},
        "derivation_size": len(trace2),
    }
    if want_trace:
        payload["trace"] = list(trace2)
    report.phase("check-target", True, time.monotonic() - start, payload)

    if do_eval and (sf.main is not None or args is not None):
        _run_eval_phase(report, sf, translated, args, fuel)
    return report


def _run_eval_phase(
    report: Report,
    sf: S.SourceFile,
    translated: TranslatedFile,
    args: Optional[Tuple[int, ...]],
    fuel: int,
) -> None:
    start = time.monotonic()
    try:
        payload = evaluate_file(sf, translated, args, fuel)
    except (EvalError, LoopcertError) as ex:
        report.phase("evaluate", False, time.monotonic() - start, {})
        report.diag("EVAL", None, str(ex))
        report.exit_code = EXIT_RUNTIME
        return
    report.phase("evaluate", True, time.monotonic() - start, payload)


def translation_text(sf: S.SourceFile) -> str:
    """The functional image as a re-parsable .t file."""
    return show_file(translate_file(sf).target)
