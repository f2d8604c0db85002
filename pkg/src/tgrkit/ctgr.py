"""Contextual template-guided recombination with permitting contexts.

A contextual template carries deletion contexts around its body and two
finite sets of permitting-context words: c1 words must occur in the first
participant x, c2 words in the second participant y.  With template body
alpha.beta.gamma, deletion contexts e1/d1 and x = u.alpha.beta.d1.d,
y = e.e1.beta.gamma.v, recombination yields u.alpha.beta.gamma.v: d1 is
consumed from x, e1 from y.  An empty context set and {empty word} both
impose no constraint (the empty word is a factor of every word), so
templates normalize context sets by dropping empty words.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import FormatError
from .words import (
    Alphabet,
    FiniteLanguage,
    Word,
    is_factor,
    occurrences,
    shortlex_key,
    sort_words,
    word,
    word_text,
)
from .tgr import ClosureResult, InertTemplateWarning, _iterate_closure, splits

HASH = "#"
DOLLAR = "$"
AMP = "&"


@dataclass(frozen=True)
class PCTemplate:
    e1: Word
    body: Word
    d1: Word
    c1: frozenset[Word]
    c2: frozenset[Word]

    def __post_init__(self):
        # Empty context words are vacuous; dropping them makes {} and {@} one value.
        object.__setattr__(self, "c1", frozenset(w for w in self.c1 if w))
        object.__setattr__(self, "c2", frozenset(w for w in self.c2 if w))


def tau(tp: PCTemplate) -> Word:
    """Canonical word form: e1 # body # d1 $ c1-words $ c2-words.

    Context words are listed in shortlex order and separated by "&"; this
    makes equal templates have equal tau words.
    """
    out = list(tp.e1) + [HASH] + list(tp.body) + [HASH] + list(tp.d1) + [DOLLAR]
    for i, w in enumerate(sorted(tp.c1, key=shortlex_key)):
        if i:
            out.append(AMP)
        out.extend(w)
    out.append(DOLLAR)
    for i, w in enumerate(sorted(tp.c2, key=shortlex_key)):
        if i:
            out.append(AMP)
        out.extend(w)
    return tuple(out)


def parse_tau(w: Word) -> PCTemplate:
    """Parse a tau word back into a template.

    Assumes "#", "$" and "&" do not occur in the template's own symbols,
    which holds for every compiler-produced system.
    """
    hashes = [i for i, s in enumerate(w) if s == HASH]
    dollars = [i for i, s in enumerate(w) if s == DOLLAR]
    if len(hashes) != 2 or len(dollars) != 2:
        raise FormatError(f"not a tau word: {word_text(w)!r}")
    h1, h2 = hashes
    d1, d2 = dollars
    if not h1 < h2 < d1 < d2:
        raise FormatError(f"not a tau word: {word_text(w)!r}")

    def split_words(seg: Word) -> frozenset[Word]:
        if not seg:
            return frozenset()
        parts: list[list[str]] = [[]]
        for s in seg:
            if s == AMP:
                parts.append([])
            else:
                parts[-1].append(s)
        return frozenset(tuple(p) for p in parts)

    return PCTemplate(
        e1=w[:h1],
        body=w[h1 + 1 : h2],
        d1=w[h2 + 1 : d1],
        c1=split_words(w[d1 + 1 : d2]),
        c2=split_words(w[d2 + 1 :]),
    )


def template_line(tp: PCTemplate) -> str:
    c1 = " ; ".join(word_text(w) for w in sorted(tp.c1, key=shortlex_key))
    c2 = " ; ".join(word_text(w) for w in sorted(tp.c2, key=shortlex_key))
    return (
        f"{word_text(tp.e1)} | {word_text(tp.body)} | {word_text(tp.d1)}"
        f" | C1: {c1} | C2: {c2}"
    )


def parse_template_line(line: str) -> PCTemplate:
    """Parse `e1 | body | d1 | C1: w1 ; w2 | C2: w1` with "@" for the empty word."""
    fields = [f.strip() for f in line.split("|")]
    if len(fields) != 5:
        raise FormatError(f"template line needs 5 '|'-separated fields: {line!r}")
    e1_t, body_t, d1_t, c1_t, c2_t = fields
    if not c1_t.startswith("C1:") or not c2_t.startswith("C2:"):
        raise FormatError(f"context fields must start with 'C1:' / 'C2:': {line!r}")

    def ctx(text: str) -> frozenset[Word]:
        text = text.partition(":")[2].strip()
        if not text:
            return frozenset()
        return frozenset(word(part) for part in text.split(";"))

    return PCTemplate(word(e1_t), word(body_t), word(d1_t), ctx(c1_t), ctx(c2_t))


def parse_template_file(text: str) -> tuple[PCTemplate, ...]:
    """Parse a template file: one template line each, "# " comments, blanks skipped."""
    templates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.startswith("# "):
            continue
        try:
            templates.append(parse_template_line(raw))
        except FormatError as exc:
            raise FormatError(str(exc), line=lineno) from None
    return tuple(templates)


@dataclass(frozen=True)
class CTGRSystem:
    templates: tuple[PCTemplate, ...]
    alphabet: Alphabet
    n1: int = 1
    n2: int = 1

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"length minima must be positive, got n1={self.n1}, n2={self.n2}")
        for tp in self.templates:
            for w in (tp.e1, tp.body, tp.d1, *tp.c1, *tp.c2):
                for sym in w:
                    if sym not in self.alphabet:
                        raise ValueError(
                            f"template symbol {sym!r} is outside the system alphabet"
                        )
        # Canonical order plus dedup by tau, so iteration and dumps are stable.
        by_tau = {tau(tp): tp for tp in self.templates}
        object.__setattr__(
            self, "templates", tuple(by_tau[t] for t in sorted(by_tau, key=shortlex_key))
        )
        least = 2 * self.n1 + self.n2
        inert = [tp for tp in self.templates if len(tp.body) < least]
        if inert:
            warnings.warn(
                f"{len(inert)} contextual template(s) have bodies shorter than "
                f"2*n1+n2={least} and can never fire",
                InertTemplateWarning,
                stacklevel=2,
            )

    @property
    def template_set(self) -> frozenset[PCTemplate]:
        return frozenset(self.templates)


@dataclass(frozen=True)
class PCRecombinationEvent:
    """One contextual recombination.

    Invariants: template.body = alpha+beta+gamma; x[pos_x:] starts with
    alpha+beta+d1; y[pos_y:] starts with e1+beta+gamma; every c1 word is a
    factor of x and every c2 word a factor of y; and
    w = x[:pos_x]+alpha+beta+gamma+v with v following e1+beta+gamma in y.
    """

    x: Word
    y: Word
    template: PCTemplate
    alpha: Word
    beta: Word
    gamma: Word
    pos_x: int
    pos_y: int
    w: Word


def _contexts_ok(tp: PCTemplate, x: Word, y: Word) -> bool:
    return all(is_factor(c, x) for c in tp.c1) and all(is_factor(c, y) for c in tp.c2)


def recombine_pc(
    sys: CTGRSystem, x: Word, y: Word, tp: PCTemplate, allow_unlisted: bool = False
) -> frozenset[PCRecombinationEvent]:
    """All contextual recombination events of x with y under template tp.

    Tries every body split meeting the minima and every offset where
    alpha+beta+d1 occurs in x and e1+beta+gamma occurs in y, subject to the
    permitting-context factor checks on the whole words x and y.
    """
    if not allow_unlisted and tp not in sys.template_set:
        raise ValueError("template is not in the system's template set")
    if not _contexts_ok(tp, x, y):
        return frozenset()
    events = []
    for alpha, beta, gamma in splits(tp.body, sys.n1, sys.n2):
        xneedle = alpha + beta + tp.d1
        yneedle = tp.e1 + beta + gamma
        xs = occurrences(xneedle, x)
        if not xs:
            continue
        keep = len(alpha) + len(beta)
        drop = len(yneedle)
        for oy in occurrences(yneedle, y):
            v = y[oy + drop :]
            for ox in xs:
                events.append(
                    PCRecombinationEvent(
                        x=x,
                        y=y,
                        template=tp,
                        alpha=alpha,
                        beta=beta,
                        gamma=gamma,
                        pos_x=ox,
                        pos_y=oy,
                        w=x[: ox + keep] + gamma + v,
                    )
                )
    return frozenset(events)


class _StepIndex:
    """Factor index over a growing word set, driving the template scan.

    For each template split the two required factors (alpha+beta+d1 in x,
    e1+beta+gamma in y) are looked up directly, so a template that cannot
    fire costs one dictionary probe instead of a scan over all pairs.
    Permitting-context checks are memoized per word, and a frontier
    restricts pairs to those touching newly added words.
    """

    def __init__(self, sys: CTGRSystem):
        self.sys = sys
        self.plan: list[tuple[PCTemplate, Word, Word, Word, Word, Word]] = []
        max_needle = 1
        for tp in sys.templates:
            for alpha, beta, gamma in splits(tp.body, sys.n1, sys.n2):
                xneedle = alpha + beta + tp.d1
                yneedle = tp.e1 + beta + gamma
                self.plan.append((tp, alpha, beta, gamma, xneedle, yneedle))
                max_needle = max(max_needle, len(xneedle), len(yneedle))
        self.max_needle = max_needle
        self.words: list[Word] = []
        self.id_of: dict[Word, int] = {}
        self.by_factor: dict[Word, set[int]] = {}
        self._ctx_cache: dict[tuple[int, Word], bool] = {}

    def add_words(self, new: list[Word]) -> None:
        for w in new:
            if w in self.id_of:
                continue
            idx = len(self.words)
            self.words.append(w)
            self.id_of[w] = idx
            seen: set[Word] = set()
            for i in range(len(w)):
                for j in range(i + 1, min(i + self.max_needle, len(w)) + 1):
                    seen.add(w[i:j])
            for f in seen:
                self.by_factor.setdefault(f, set()).add(idx)

    def _ctx_filter(self, ids, contexts: frozenset[Word]) -> list[int]:
        if not contexts:
            return list(ids)
        out = []
        cache = self._ctx_cache
        for i in ids:
            ok = True
            for c in contexts:
                key = (i, c)
                hit = cache.get(key)
                if hit is None:
                    hit = cache[key] = is_factor(c, self.words[i])
                if not hit:
                    ok = False
                    break
            if ok:
                out.append(i)
        return out

    def run(
        self,
        frontier: set[Word] | None,
        max_len: int | None = None,
        collect: list[PCRecombinationEvent] | None = None,
    ) -> tuple[set[Word], bool]:
        produced: set[Word] = set()
        truncated = False
        words = self.words
        empty: set[int] = set()
        fids = (
            None
            if frontier is None
            else {self.id_of[w] for w in frontier if w in self.id_of}
        )
        for tp, alpha, beta, gamma, xneedle, yneedle in self.plan:
            xs = self.by_factor.get(xneedle, empty)
            if not xs:
                continue
            ys = self.by_factor.get(yneedle, empty)
            if not ys:
                continue
            if fids is None:
                pairs = [(xi, yi) for xi in self._ctx_filter(xs, tp.c1)
                         for yi in self._ctx_filter(ys, tp.c2)]
            else:
                fx = self._ctx_filter(xs & fids, tp.c1)
                fy = self._ctx_filter(ys & fids, tp.c2)
                pairs = []
                if fx:
                    pairs += [(xi, yi) for xi in fx for yi in self._ctx_filter(ys, tp.c2)]
                if fy:
                    rest = self._ctx_filter(xs - fids, tp.c1)
                    pairs += [(xi, yi) for xi in rest for yi in fy]
            keep = len(alpha) + len(beta)
            drop = len(yneedle)
            for xi, yi in pairs:
                x, y = words[xi], words[yi]
                for oy in occurrences(yneedle, y):
                    v = y[oy + drop :]
                    for ox in occurrences(xneedle, x):
                        w = x[: ox + keep] + gamma + v
                        if max_len is not None and len(w) > max_len:
                            truncated = True
                            continue
                        produced.add(w)
                        if collect is not None:
                            collect.append(
                                PCRecombinationEvent(
                                    x=x,
                                    y=y,
                                    template=tp,
                                    alpha=alpha,
                                    beta=beta,
                                    gamma=gamma,
                                    pos_x=ox,
                                    pos_y=oy,
                                    w=w,
                                )
                            )
        return produced, truncated


def step_pc(sys: CTGRSystem, language: FiniteLanguage) -> FiniteLanguage:
    """One application of the contextual operator over L x L x T."""
    index = _StepIndex(sys)
    index.add_words(sort_words(language.words))
    produced, _ = index.run(None)
    return FiniteLanguage(frozenset(produced), sys.alphabet)


def step_pc_events(sys: CTGRSystem, language: FiniteLanguage) -> list[PCRecombinationEvent]:
    """Like step_pc but returns the full event list (for audits and tests)."""
    index = _StepIndex(sys)
    index.add_words(sort_words(language.words))
    events: list[PCRecombinationEvent] = []
    index.run(None, collect=events)
    return events


def closure_pc(
    sys: CTGRSystem,
    initial: FiniteLanguage,
    max_len: int,
    max_rounds: int,
    max_set_size: int = 200_000,
) -> ClosureResult:
    """Bounded iterated closure of the contextual operator; see tgr.closure.

    Memory grows with the factor index, roughly max_len * max_needle entries
    per word, so the set-size cap also bounds the index.
    """
    index = _StepIndex(sys)
    indexed: set[Word] = set()

    def step_fn(words: set[Word], frontier: set[Word] | None) -> tuple[set[Word], bool]:
        fresh = sort_words(words - indexed)
        index.add_words(fresh)
        indexed.update(fresh)
        return index.run(frontier, max_len)

    return _iterate_closure(
        step_fn, set(initial.words), sys.alphabet, max_len, max_rounds, max_set_size
    )
