from __future__ import annotations

import itertools
import random

import pytest

from tgrkit import FormatError, matches, parse_pattern, pattern_text, word
from tgrkit.patterns import Atom, Concat, Star, Union, alt, atom, seq, star, symbol_class


def naive_matches(p, w) -> bool:
    """Backtracking membership oracle, independent of the automaton path."""
    if isinstance(p, Atom):
        return len(w) == 1 and w[0] in p.symbols
    if isinstance(p, Concat):
        if not p.parts:
            return w == ()
        head, rest = p.parts[0], Concat(p.parts[1:])
        return any(
            naive_matches(head, w[:i]) and naive_matches(rest, w[i:])
            for i in range(len(w) + 1)
        )
    if isinstance(p, Star):
        if w == ():
            return True
        return any(
            naive_matches(p.inner, w[:i]) and naive_matches(p, w[i:])
            for i in range(1, len(w) + 1)
        )
    if isinstance(p, Union):
        return any(naive_matches(a, w) for a in p.alts)
    raise TypeError(p)


def encoding_filter():
    # {S}({a,b}{S,X})*({a,b}{#} | {#}{#})
    sigma = symbol_class("ab")
    nts = symbol_class(["S", "X"])
    return seq(
        atom("S"),
        star(seq(sigma, nts)),
        alt(seq(sigma, atom("#")), seq(atom("#"), atom("#"))),
    )


def test_matches_one_repetition():
    assert matches(encoding_filter(), word("S a X b #"))


def test_matches_star_zero_repetitions():
    p = seq(star(symbol_class("ab")), atom("Y"))
    assert matches(p, word("Y"))
    assert matches(p, word("a b Y"))
    assert not matches(p, word("Y a"))


def test_matches_double_hash_tail():
    assert matches(encoding_filter(), word("S a X # #"))
    assert not matches(encoding_filter(), word("S a X #"))
    assert not matches(encoding_filter(), word("a X b #"))


def test_matches_agrees_with_backtracking_oracle():
    rng = random.Random(9)
    syms = ["a", "b", "c"]
    universe = [tuple(w) for n in range(7) for w in itertools.product(syms, repeat=n)]

    def random_pattern(depth):
        kind = rng.choice(["atom", "concat", "star", "union"]) if depth else "atom"
        if kind == "atom":
            return symbol_class(rng.sample(syms, rng.randint(1, 3)))
        if kind == "concat":
            return Concat(tuple(random_pattern(depth - 1) for _ in range(rng.randint(1, 3))))
        if kind == "star":
            return Star(random_pattern(depth - 1))
        return Union(tuple(random_pattern(depth - 1) for _ in range(rng.randint(1, 3))))

    for _ in range(15):
        p = random_pattern(3)
        for w in universe:
            assert matches(p, w) == naive_matches(p, w), (pattern_text(p), w)
    for w in universe:
        assert matches(encoding_filter(), w) == naive_matches(encoding_filter(), w)


def test_pattern_text_round_trip():
    p = encoding_filter()
    text = pattern_text(p)
    q = parse_pattern(text)
    for w in [word("S a X b #"), word("S # #"), word("S a X # #"), word("a"), ()]:
        assert matches(p, w) == matches(q, w)
    assert pattern_text(q) == text


def test_parse_pattern_errors():
    with pytest.raises(FormatError):
        parse_pattern("{a,b")
    with pytest.raises(FormatError):
        parse_pattern("{a}}")
