from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from tgrkit import (
    CodingDomainError,
    FiniteLanguage,
    FormatError,
    ResourceLimitError,
    WeakCoding,
    apply_coding,
    parse_language,
    word,
    word_text,
    words_up_to,
)
from tgrkit.words import make_alphabet, sort_words


def test_word_round_trip():
    assert word("S a #") == ("S", "a", "#")
    assert word("@") == ()
    assert word_text(("S", "a", "#")) == "S a #"
    assert word_text(()) == "@"


def test_word_rejects_blank_and_bad_tokens():
    with pytest.raises(FormatError):
        word("")
    with pytest.raises(FormatError):
        make_alphabet(["a b"])


def test_apply_coding_erases_markers():
    h = WeakCoding({"S": None, "a": "a", "#": None})
    assert apply_coding(h, word("S a #")) == word("a")
    assert apply_coding(h, ()) == ()


def test_apply_coding_second_construction_shape():
    h = WeakCoding({"Y": None, "a": "a", "b": "b"})
    assert apply_coding(h, word("a b Y")) == word("a b")


def test_apply_coding_domain_error_names_symbol():
    h = WeakCoding({"a": "a"})
    with pytest.raises(CodingDomainError) as exc:
        h.apply(word("a q"))
    assert "q" in str(exc.value)


@given(
    st.lists(st.sampled_from("ab"), max_size=8),
    st.lists(st.sampled_from("ab"), max_size=8),
)
def test_apply_coding_is_homomorphic(u, v):
    h = WeakCoding({"a": "x", "b": None})
    u, v = tuple(u), tuple(v)
    assert h.apply(u + v) == h.apply(u) + h.apply(v)


def test_words_up_to_counts():
    assert len(words_up_to(make_alphabet("a"), 2)) == 3
    assert sort_words(words_up_to(make_alphabet("ab"), 1).words) == [(), ("a",), ("b",)]
    # geometric sum 1 + 2 + 4 + 8
    assert len(words_up_to(make_alphabet("ab"), 3)) == 15


@given(st.integers(min_value=0, max_value=5), st.integers(min_value=1, max_value=3))
def test_words_up_to_size_formula(k, m):
    alphabet = make_alphabet([f"s{i}" for i in range(m)])
    assert len(words_up_to(alphabet, k)) == sum(m**i for i in range(k + 1))


def test_words_up_to_resource_guard_reports_budget():
    with pytest.raises(ResourceLimitError) as exc:
        words_up_to(make_alphabet("abc"), 12, max_words=1000)
    assert "797161" in str(exc.value)


def test_finite_language_checks_alphabet():
    with pytest.raises(FormatError):
        FiniteLanguage(frozenset({word("a z")}), make_alphabet("a"))


def test_finite_language_canonical_order_is_stable():
    words = {word("b a"), word("a"), word("b"), word("a a a")}
    l1 = FiniteLanguage(frozenset(words), make_alphabet("ab"))
    l2 = FiniteLanguage(frozenset(sorted(words)), make_alphabet("ab"))
    assert l1.to_text().encode() == l2.to_text().encode()
    assert l1.sorted() == [("a",), ("b",), ("b", "a"), ("a", "a", "a")]


def test_language_file_comments_and_hash_words():
    text = "# this is a comment\nS a #\n#\n\n@\n"
    lang = parse_language(text)
    assert lang.words == {word("S a #"), ("#",), ()}


def test_language_file_refuses_ambiguous_leading_hash():
    lang = FiniteLanguage(frozenset({word("# a")}), make_alphabet(["#", "a"]))
    with pytest.raises(FormatError):
        lang.to_text()
