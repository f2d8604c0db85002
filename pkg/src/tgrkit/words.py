"""Symbols, words, finite languages and weak codings.

A symbol is a nonempty whitespace-free token compared by exact equality;
"#", "$" and "&" are ordinary tokens.  A word is a tuple of symbols; the
empty word is spelled "@" in text form.  All values here are immutable and
all operations are pure, so everything is safe to share between callers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import CodingDomainError, FormatError, ResourceLimitError

Word = tuple[str, ...]
Alphabet = frozenset[str]

EMPTY: Word = ()
EMPTY_WORD_TEXT = "@"


def check_symbol(token: str) -> str:
    if not token or any(ch.isspace() for ch in token):
        raise FormatError(f"bad symbol token {token!r}: must be nonempty and whitespace-free")
    return token


def make_alphabet(tokens: Iterable[str]) -> Alphabet:
    return frozenset(check_symbol(t) for t in tokens)


def word(text: str) -> Word:
    """Parse a word from space-separated tokens; "@" is the empty word."""
    text = text.strip()
    if text == EMPTY_WORD_TEXT:
        return ()
    if not text:
        raise FormatError(f"blank word text: the empty word is spelled {EMPTY_WORD_TEXT!r}")
    return tuple(check_symbol(t) for t in text.split())


def word_text(w: Word) -> str:
    return " ".join(w) if w else EMPTY_WORD_TEXT


def shortlex_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


def sort_words(words: Iterable[Word]) -> list[Word]:
    return sorted(words, key=shortlex_key)


def is_factor(needle: Word, hay: Word) -> bool:
    """True iff `needle` occurs contiguously in `hay` (the empty word always does)."""
    n = len(needle)
    if n == 0:
        return True
    return any(hay[i : i + n] == needle for i in range(len(hay) - n + 1))


def occurrences(needle: Word, hay: Word) -> list[int]:
    """All start offsets of `needle` in `hay`, overlapping occurrences included."""
    n = len(needle)
    if n == 0:
        return list(range(len(hay) + 1))
    return [i for i in range(len(hay) - n + 1) if hay[i : i + n] == needle]


@dataclass(frozen=True)
class FiniteLanguage:
    """A finite set of words over a declared alphabet.

    Iteration is in shortlex order (length, then token-wise lexicographic),
    so serialized output is deterministic for equal sets.
    """

    words: frozenset[Word]
    alphabet: Alphabet

    def __post_init__(self):
        for w in self.words:
            for sym in w:
                if sym not in self.alphabet:
                    raise FormatError(
                        f"word {word_text(w)!r} uses symbol {sym!r} outside the alphabet"
                    )

    @classmethod
    def of(cls, words: Iterable[Word], alphabet: Iterable[str]) -> "FiniteLanguage":
        return cls(frozenset(words), make_alphabet(alphabet))

    def __iter__(self) -> Iterator[Word]:
        return iter(sort_words(self.words))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w: Word) -> bool:
        return w in self.words

    def sorted(self) -> list[Word]:
        return sort_words(self.words)

    def union(self, other: "FiniteLanguage") -> "FiniteLanguage":
        return FiniteLanguage(self.words | other.words, self.alphabet | other.alphabet)

    def to_text(self) -> str:
        """One word per line; refuses words whose first token is "#".

        A line beginning "# " reads back as a comment, so such words cannot
        round-trip through the file format.
        """
        lines = []
        for w in self:
            if w and w[0] == "#":
                raise FormatError(
                    f"word {word_text(w)!r} starts with '#' and cannot be written unambiguously"
                )
            lines.append(word_text(w))
        return "\n".join(lines) + ("\n" if lines else "")


def parse_language(text: str, alphabet: Iterable[str] | None = None) -> FiniteLanguage:
    """Parse a language file: one word per line, "# "-prefixed comment lines.

    A bare "#" token inside a word line is an ordinary symbol; only an
    initial "# " marks a comment.  Blank lines are skipped.  When `alphabet`
    is None it is inferred from the words.
    """
    words = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.startswith("# "):
            continue
        try:
            words.add(word(raw))
        except FormatError as exc:
            raise FormatError(str(exc), line=lineno) from None
    if alphabet is None:
        alphabet = {sym for w in words for sym in w}
    return FiniteLanguage(frozenset(words), make_alphabet(alphabet))


@dataclass(frozen=True)
class WeakCoding:
    """A total letter-to-letter-or-empty map, extended homomorphically to words.

    `mapping` sends every domain symbol to a symbol or to None (erase).
    """

    mapping: Mapping[str, str | None]

    @property
    def domain(self) -> Alphabet:
        return frozenset(self.mapping)

    def apply(self, w: Word) -> Word:
        out = []
        for sym in w:
            if sym not in self.mapping:
                raise CodingDomainError(sym)
            image = self.mapping[sym]
            if image is not None:
                out.append(image)
        return tuple(out)


def apply_coding(h: WeakCoding, w: Word) -> Word:
    return h.apply(w)


def words_up_to(alphabet: Alphabet, k: int, max_words: int = 200_000) -> FiniteLanguage:
    """All words over `alphabet` of length at most k, including the empty word.

    Refuses to enumerate when the result would exceed `max_words`, reporting
    the required budget.
    """
    if k < 0:
        raise ValueError(f"length bound must be nonnegative, got {k}")
    m = len(alphabet)
    if m == 0:
        total = 1
    elif m == 1:
        total = k + 1
    else:
        total = (m ** (k + 1) - 1) // (m - 1)
    if total > max_words:
        raise ResourceLimitError(
            f"enumerating words up to length {k} over {m} symbols needs {total} words, "
            f"cap is {max_words}"
        )
    syms = sorted(alphabet)
    words: list[Word] = []
    for n in range(k + 1):
        words.extend(itertools.product(syms, repeat=n))
    return FiniteLanguage(frozenset(words), alphabet)
