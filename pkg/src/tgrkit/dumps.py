"""Loader for the compiled-system dump format (both system kinds)."""

from __future__ import annotations

from dataclasses import dataclass

from .ctgr import CTGRSystem, parse_tau
from .errors import FormatError
from .patterns import Pattern, parse_pattern
from .tgr import TGRSystem
from .words import FiniteLanguage, WeakCoding, Word, make_alphabet, word

SECTIONS = ("BASE", "TEMPLATES", "FILTER", "CODING", "PROVENANCE")


@dataclass(frozen=True)
class LoadedDump:
    kind: str  # "tgr" | "ctgr"
    system: TGRSystem | CTGRSystem
    base: FiniteLanguage
    filter: Pattern | None
    coding: WeakCoding | None


def load_dump(text: str) -> LoadedDump:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("tgrkit-dump "):
        raise FormatError("not a tgrkit dump (missing 'tgrkit-dump' header)")
    kind = lines[0].split()[1]
    if kind not in ("tgr", "ctgr"):
        raise FormatError(f"unknown dump kind {kind!r}")

    n1 = n2 = 1
    alphabet: frozenset[str] | None = None
    section: str | None = None
    base_words: set[Word] = set()
    template_words: set[Word] = set()
    filter_text: str | None = None
    coding_map: dict[str, str | None] = {}

    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        # "# " comments are honored only in the header: section bodies may
        # legitimately start with a "#" symbol (codings, tau words).
        if section is None and raw.startswith("# "):
            continue
        if line == "END":
            break
        if line in SECTIONS:
            section = line
            continue
        if section is None:
            key, _, rest = line.partition(" ")
            if key == "n1":
                n1 = int(rest)
            elif key == "n2":
                n2 = int(rest)
            elif key == "alphabet":
                alphabet = make_alphabet(rest.split())
            else:
                raise FormatError(f"unexpected header line {line!r}", line=lineno)
        elif section == "BASE":
            base_words.add(word(line))
        elif section == "TEMPLATES":
            template_words.add(word(line))
        elif section == "FILTER":
            filter_text = line
        elif section == "CODING":
            sym, arrow, image = line.split()
            if arrow != "->":
                raise FormatError(f"bad coding line {line!r}", line=lineno)
            coding_map[sym] = None if image == "@" else image
        elif section == "PROVENANCE":
            pass  # informational only

    if alphabet is None:
        raise FormatError("dump is missing the 'alphabet' header line")

    system: TGRSystem | CTGRSystem
    if kind == "tgr":
        system = TGRSystem(
            templates=FiniteLanguage(frozenset(template_words), alphabet),
            alphabet=alphabet,
            n1=n1,
            n2=n2,
        )
    else:
        tps = tuple(parse_tau(w) for w in sorted(template_words))
        system = CTGRSystem(templates=tps, alphabet=alphabet, n1=n1, n2=n2)

    return LoadedDump(
        kind=kind,
        system=system,
        base=FiniteLanguage(frozenset(base_words), alphabet),
        filter=parse_pattern(filter_text) if filter_text else None,
        coding=WeakCoding(coding_map) if coding_map else None,
    )
