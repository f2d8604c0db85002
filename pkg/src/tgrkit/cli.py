"""Command-line interface.

One binary, five subcommands: compile, closure, check, trace, report.
Exit codes: 0 ok/pass, 1 fail/not-found, 2 usage or I/O error,
3 inconclusive (caps too small to decide).  All caps are flags - there is
no environment-variable configuration - and machine-readable output echoes
the caps so results are reproducible.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .ctgr import closure_pc
from .dumps import load_dump
from .errors import TgrkitError, TraceError
from .grammars import KurodaGrammar, RegularGrammar, parse_grammar
from .recompile import (
    compile_kuroda,
    dump_compiled_re,
    simulate_derivation,
    soundness_check,
    trace_lines,
)
from .regcompile import compile_regular, complexity_report, dump_compiled_regular, equiv_check
from .tgr import closure, derivation_trace
from .words import parse_language, word, word_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_regular(path: str) -> RegularGrammar:
    g = parse_grammar(_read(path))
    if not isinstance(g, RegularGrammar):
        raise TgrkitError(f"{path}: expected a regular grammar, found {g.kind}")
    return g


def _load_kuroda(path: str) -> KurodaGrammar:
    g = parse_grammar(_read(path))
    if not isinstance(g, KurodaGrammar):
        raise TgrkitError(f"{path}: expected a kuroda grammar, found {g.kind}")
    return g


def _caps_lines(args, k: bool = True) -> list[str]:
    lines = []
    if k and hasattr(args, "k"):
        lines.append(f"k {args.k}")
    lines.append(f"max-len {args.max_len}")
    lines.append(f"max-rounds {args.max_rounds}")
    lines.append(f"max-set-size {args.max_set_size}")
    return lines


def cmd_compile(args) -> int:
    if args.kind == "reg":
        dump = dump_compiled_regular(compile_regular(_load_regular(args.grammar)))
    else:
        dump = dump_compiled_re(compile_kuroda(_load_kuroda(args.grammar)))
    _emit(args, dump)
    return EXIT_OK


def cmd_closure(args) -> int:
    loaded = load_dump(_read(args.dump))
    base = loaded.base
    if args.base:
        base = parse_language(_read(args.base), loaded.system.alphabet)
    run = closure if loaded.kind == "tgr" else closure_pc
    result = run(loaded.system, base, args.max_len, args.max_rounds, args.max_set_size)
    if args.format == "lines":
        out = _caps_lines(args, k=False)
        out += [
            f"rounds {result.rounds_used}",
            f"fixpoint {str(result.reached_fixpoint).lower()}",
            f"truncated {str(result.truncated_by_length).lower()}",
        ]
        out += [f"word {word_text(w)}" for w in result.language]
    else:
        out = [
            f"closure of {len(base)} base word(s): {len(result.language)} words, "
            f"rounds: {result.rounds_used}, fixpoint: {result.reached_fixpoint}, "
            f"truncated: {result.truncated_by_length}"
        ]
        out += ["  " + word_text(w) for w in result.language]
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.kind == "reg":
        g = _load_regular(args.grammar)
        report = equiv_check(
            compile_regular(g),
            g,
            args.k,
            max_len=args.max_len,
            max_rounds=args.max_rounds,
            max_set_size=args.max_set_size,
        )
        if args.format == "lines":
            out = ["kind reg"] + _caps_lines(args)
            out.append(f"verdict {report.verdict}")
            out += [f"missing {word_text(w)}" for w in report.missing]
            out += [f"extra {word_text(w)}" for w in report.extra]
        else:
            label = {"pass": "PASS", "fail": "FAIL", "inconclusive": "INCONCLUSIVE"}
            out = [
                f"{label[report.verdict]}: pipeline vs grammar enumeration up to length {args.k}"
            ]
            out += [f"  missing: {word_text(w)}" for w in report.missing]
            out += [f"  extra: {word_text(w)}" for w in report.extra]
        _emit(args, "\n".join(out) + "\n")
        if report.verdict == "pass":
            return EXIT_OK
        return EXIT_FAIL if report.verdict == "fail" else EXIT_INCONCLUSIVE

    g = _load_kuroda(args.grammar)
    report = soundness_check(
        compile_kuroda(g),
        g,
        args.k,
        max_len=args.max_len,
        max_rounds=args.max_rounds,
        max_set_size=args.max_set_size,
    )
    verdict = "unsound" if report.non_members else ("inconclusive" if report.unknowns else "sound")
    if args.format == "lines":
        out = ["kind re"] + _caps_lines(args)
        out.append(f"verdict {verdict}")
        out += [f"produced {word_text(w)}" for w in report.produced]
        out += [f"non-member {word_text(w)}" for w in report.non_members]
        out += [f"unknown {word_text(w)}" for w in report.unknowns]
    else:
        out = [
            f"{verdict.upper()}: {len(report.produced)} produced word(s), "
            f"{len(report.non_members)} non-member(s), {len(report.unknowns)} unknown"
        ]
        out += [f"  non-member: {word_text(w)}" for w in report.non_members]
    _emit(args, "\n".join(out) + "\n")
    if verdict == "sound":
        return EXIT_OK
    return EXIT_FAIL if verdict == "unsound" else EXIT_INCONCLUSIVE


def cmd_trace(args) -> int:
    if args.kind == "reg":
        if not args.target:
            raise TgrkitError("trace reg needs --target")
        g = _load_regular(args.grammar)
        cr = compile_regular(g)
        trace = derivation_trace(
            cr.system,
            cr.base,
            word(args.target),
            args.max_len,
            args.max_rounds,
            args.max_set_size,
        )
        if trace is None:
            sys.stderr.write("no trace within caps\n")
            return EXIT_FAIL
        out = [
            f"{word_text(ev.x)} | {word_text(ev.y)} | {word_text(ev.template)} | {word_text(ev.w)}"
            for ev in trace
        ]
        _emit(args, "\n".join(out) + ("\n" if out else ""))
        return EXIT_OK

    if not args.derivation:
        raise TgrkitError("trace re needs --derivation")
    g = _load_kuroda(args.grammar)
    cr = compile_kuroda(g)
    forms = [word(line) for line in _read(args.derivation).splitlines() if line.strip()]
    try:
        trace = simulate_derivation(cr, forms)
    except TraceError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_FAIL
    _emit(args, "\n".join(trace_lines(trace)) + "\n")
    return EXIT_OK


def cmd_report(args) -> int:
    g = _load_regular(args.grammar)
    rep = complexity_report(compile_regular(g), g)
    if args.format == "lines":
        out = [
            f"rules {rep.rule_count}",
            f"templates {rep.template_count}",
            f"quadratic-bound {rep.quadratic_bound}",
            f"cubic-bound {rep.cubic_bound}",
            f"alphabet {rep.alphabet_size}",
            f"bounds-hold {str(rep.ok).lower()}",
        ]
    else:
        out = [
            f"rules {rep.rule_count} / templates {rep.template_count} / "
            f"quadratic bound {rep.quadratic_bound} / cubic bound {rep.cubic_bound} / "
            f"alphabet {rep.alphabet_size}"
        ]
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _add_caps(p: argparse.ArgumentParser, with_k: bool = True) -> None:
    if with_k:
        p.add_argument("--k", type=int, default=8, help="output length bound (default 8)")
    p.add_argument(
        "--max-len", type=int, default=19, help="closure word length bound (default 19)"
    )
    p.add_argument("--max-rounds", type=int, default=64, help="closure round cap (default 64)")
    p.add_argument(
        "--max-set-size", type=int, default=200_000, help="closure set size cap (default 200000)"
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--format", choices=("human", "lines"), default="human", help="output style"
    )
    p.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgrkit",
        description="Template-guided recombination workbench: compile grammars to "
        "recombination systems, run bounded closures, check them against grammar oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a grammar to a system dump")
    p.add_argument("kind", choices=("reg", "re"))
    p.add_argument("grammar")
    _add_common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("closure", help="run a bounded closure over a system dump")
    p.add_argument("dump")
    p.add_argument("--base", help="language file overriding the dump's base language")
    _add_caps(p, with_k=False)
    _add_common(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("check", help="verify a compiled system against its grammar")
    p.add_argument("kind", choices=("reg", "re"))
    p.add_argument("grammar")
    _add_caps(p)
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="explain how a word / derivation is produced")
    p.add_argument("kind", choices=("reg", "re"))
    p.add_argument("grammar")
    p.add_argument("--target", help="target word (reg)")
    p.add_argument("--derivation", help="derivation file, one sentential form per line (re)")
    _add_caps(p, with_k=False)
    _add_common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("report", help="template-count and alphabet-size report")
    p.add_argument("grammar")
    _add_common(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        sys.stderr.write(f"file not found: {exc.filename}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except TgrkitError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
