"""Filter patterns: symbol-class atoms combined by concatenation, star and union.

The pattern language is deliberately small - it is just enough to express
the filters used by the compilers.  Matching is exact membership in the
denoted regular set, decided by simulating a small nondeterministic
automaton built once per pattern.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Union as TUnion

from .errors import FormatError
from .words import Word, check_symbol


@dataclass(frozen=True)
class Atom:
    """Matches any single symbol from a finite class."""

    symbols: frozenset[str]


@dataclass(frozen=True)
class Concat:
    parts: tuple["Pattern", ...]


@dataclass(frozen=True)
class Star:
    inner: "Pattern"


@dataclass(frozen=True)
class Union:
    alts: tuple["Pattern", ...]


Pattern = TUnion[Atom, Concat, Star, Union]


def atom(*symbols: str) -> Atom:
    return Atom(frozenset(check_symbol(s) for s in symbols))


def symbol_class(symbols: Iterable[str]) -> Atom:
    return Atom(frozenset(check_symbol(s) for s in symbols))


def seq(*parts: Pattern) -> Concat:
    return Concat(tuple(parts))


def star(inner: Pattern) -> Star:
    return Star(inner)


def alt(*alts: Pattern) -> Union:
    return Union(tuple(alts))


class _Nfa:
    __slots__ = ("eps", "trans", "start", "accept")

    def __init__(self):
        self.eps: list[set[int]] = []
        self.trans: list[list[tuple[frozenset[str], int]]] = []
        self.start = 0
        self.accept = 0

    def new_state(self) -> int:
        self.eps.append(set())
        self.trans.append([])
        return len(self.eps) - 1

    def closure(self, states: set[int]) -> set[int]:
        todo = list(states)
        seen = set(states)
        while todo:
            s = todo.pop()
            for t in self.eps[s]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen


def _build(nfa: _Nfa, p: Pattern) -> tuple[int, int]:
    if isinstance(p, Atom):
        a, b = nfa.new_state(), nfa.new_state()
        nfa.trans[a].append((p.symbols, b))
        return a, b
    if isinstance(p, Concat):
        a = cur = nfa.new_state()
        for part in p.parts:
            s, t = _build(nfa, part)
            nfa.eps[cur].add(s)
            cur = t
        return a, cur
    if isinstance(p, Star):
        a = nfa.new_state()
        s, t = _build(nfa, p.inner)
        nfa.eps[a].add(s)
        nfa.eps[t].add(a)
        return a, a
    if isinstance(p, Union):
        a, b = nfa.new_state(), nfa.new_state()
        for part in p.alts:
            s, t = _build(nfa, part)
            nfa.eps[a].add(s)
            nfa.eps[t].add(b)
        return a, b
    raise TypeError(f"not a pattern: {p!r}")


@functools.lru_cache(maxsize=None)
def _compile(p: Pattern) -> _Nfa:
    nfa = _Nfa()
    nfa.start, nfa.accept = _build(nfa, p)
    return nfa


def matches(p: Pattern, w: Word) -> bool:
    """True iff `w` belongs to the regular set denoted by `p`."""
    nfa = _compile(p)
    current = nfa.closure({nfa.start})
    for sym in w:
        nxt = set()
        for s in current:
            for symbols, t in nfa.trans[s]:
                if sym in symbols:
                    nxt.add(t)
        if not nxt:
            return False
        current = nfa.closure(nxt)
    return nfa.accept in current


# Textual form, used by the system dump format.  Grammar:
#   union  := concat ("|" concat)*
#   concat := factor+
#   factor := atom "*"?
#   atom   := "{" sym ("," sym)* "}" | "(" union ")"
# Symbol tokens may not contain the delimiter characters {},()|* or spaces.

_DELIMS = set("{}(),|*")


def pattern_text(p: Pattern) -> str:
    def render(q: Pattern, parent: str) -> str:
        if isinstance(q, Atom):
            return "{" + ",".join(sorted(q.symbols)) + "}"
        if isinstance(q, Star):
            return render(q.inner, "star") + "*"
        if isinstance(q, Concat):
            body = "".join(render(part, "concat") for part in q.parts)
            return f"({body})" if parent in ("star",) else body
        if isinstance(q, Union):
            body = "|".join(render(a, "union") for a in q.alts)
            return f"({body})" if parent in ("star", "concat") else body
        raise TypeError(f"not a pattern: {q!r}")

    return render(p, "top")


def _lex(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "{}(),|*":
            tokens.append(ch)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in _DELIMS:
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def parse_pattern(text: str) -> Pattern:
    """Parse the textual pattern form; inverse of `pattern_text`."""
    tokens = _lex(text)
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError(f"pattern ended unexpectedly (wanted {expected or 'more input'})")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise FormatError(f"expected {expected!r} in pattern, found {tok!r}")
        pos += 1
        return tok

    def parse_atom() -> Pattern:
        tok = peek()
        if tok == "{":
            take("{")
            syms = [take()]
            while peek() == ",":
                take(",")
                syms.append(take())
            take("}")
            for s in syms:
                if s in _DELIMS or not s:
                    raise FormatError(f"bad symbol {s!r} in pattern class")
            return symbol_class(syms)
        if tok == "(":
            take("(")
            inner = parse_union()
            take(")")
            return inner
        raise FormatError(f"unexpected token {tok!r} in pattern")

    def parse_factor() -> Pattern:
        p = parse_atom()
        while peek() == "*":
            take("*")
            p = Star(p)
        return p

    def parse_concat() -> Pattern:
        parts = [parse_factor()]
        while peek() not in (None, "|", ")"):
            parts.append(parse_factor())
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def parse_union() -> Pattern:
        alts = [parse_concat()]
        while peek() == "|":
            take("|")
            alts.append(parse_concat())
        return alts[0] if len(alts) == 1 else Union(tuple(alts))

    result = parse_union()
    if pos != len(tokens):
        raise FormatError(f"trailing tokens in pattern: {tokens[pos:]!r}")
    return result
