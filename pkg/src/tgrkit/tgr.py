"""Template-guided recombination: the binary relation and its bounded iterated closure.

A system holds plain word templates plus two minima: n1 bounds the flanking
template parts (alpha and gamma), n2 bounds the shared overlap (beta).  A
template t split as alpha.beta.gamma merges x = u.alpha.beta.d and
y = e.beta.gamma.v into u.alpha.beta.gamma.v.  The closure iterates the
one-step operator under an explicit word-length bound, which is the
computable stand-in for the generally infinite full closure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import ResourceLimitError
from .words import Alphabet, FiniteLanguage, Word, occurrences, sort_words, word_text


class InertTemplateWarning(UserWarning):
    """A template too short to split under the system's minima; it can never fire."""


@dataclass(frozen=True)
class TGRSystem:
    templates: FiniteLanguage
    alphabet: Alphabet
    n1: int = 1
    n2: int = 1

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"length minima must be positive, got n1={self.n1}, n2={self.n2}")
        if not (self.templates.alphabet <= self.alphabet):
            raise ValueError("template alphabet is not contained in the system alphabet")
        least = 2 * self.n1 + self.n2
        inert = [t for t in self.templates if len(t) < least]
        if inert:
            warnings.warn(
                f"{len(inert)} template(s) shorter than 2*n1+n2={least} can never fire, "
                f"e.g. {word_text(inert[0])!r}",
                InertTemplateWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class RecombinationEvent:
    """One recombination with its split and offsets.

    Invariants: template = alpha+beta+gamma, x[pos_x:] starts with alpha+beta,
    y[pos_y:] starts with beta+gamma, and w = x[:pos_x]+alpha+beta+gamma+v
    where v is what follows beta+gamma in y.
    """

    x: Word
    y: Word
    template: Word
    alpha: Word
    beta: Word
    gamma: Word
    pos_x: int
    pos_y: int
    w: Word


def splits(t: Word, n1: int, n2: int) -> Iterator[tuple[Word, Word, Word]]:
    """All decompositions t = alpha.beta.gamma with |alpha|,|gamma| >= n1, |beta| >= n2."""
    m = len(t)
    for i in range(n1, m - n1 - n2 + 1):
        for j in range(i + n2, m - n1 + 1):
            yield t[:i], t[i:j], t[j:]


def recombine(
    sys: TGRSystem, x: Word, y: Word, t: Word, allow_unlisted: bool = False
) -> frozenset[RecombinationEvent]:
    """All recombination events of x with y guided by template t.

    Every split of t and every pair of match offsets yields one event;
    distinct events may produce equal result words.  Empty set when no
    decomposition exists.
    """
    if not allow_unlisted and t not in sys.templates:
        raise ValueError(f"template {word_text(t)!r} is not in the system's template set")
    events = []
    for alpha, beta, gamma in splits(t, sys.n1, sys.n2):
        left, right = alpha + beta, beta + gamma
        xs = occurrences(left, x)
        if not xs:
            continue
        for oy in occurrences(right, y):
            v = y[oy + len(right) :]
            for ox in xs:
                events.append(
                    RecombinationEvent(
                        x=x,
                        y=y,
                        template=t,
                        alpha=alpha,
                        beta=beta,
                        gamma=gamma,
                        pos_x=ox,
                        pos_y=oy,
                        w=x[: ox + len(left)] + gamma + v,
                    )
                )
    return frozenset(events)


def _step_words(
    sys: TGRSystem,
    words: set[Word],
    record: dict[Word, RecombinationEvent],
) -> set[Word]:
    """Event-recording step over ordered pairs, used by derivation_trace.

    The first discovering event per word is kept, in deterministic shortlex
    processing order.
    """
    produced: set[Word] = set()
    ordered = sort_words(words)
    templates = sort_words(sys.templates.words)
    for x in ordered:
        for y in ordered:
            for t in templates:
                for ev in sorted(
                    recombine(sys, x, y, t),
                    key=lambda e: (e.pos_x, e.pos_y, len(e.beta), len(e.alpha)),
                ):
                    produced.add(ev.w)
                    if ev.w not in record and ev.w not in words:
                        record[ev.w] = ev
    return produced


class _PlainStepIndex:
    """Per-split prefix/suffix sets over a growing word set.

    A recombination result is x[:ox+|alpha beta|] + gamma + y[oy+|beta gamma|:],
    so one step is the cross product of the distinct x-prefixes and distinct
    y-suffixes per template split.  Collapsing duplicates before pairing keeps
    the work proportional to the output, not to |L| squared.
    """

    def __init__(self, sys: TGRSystem):
        self.plan: list[tuple[Word, Word, Word]] = []  # (alpha+beta, beta+gamma, gamma)
        for t in sort_words(sys.templates.words):
            for alpha, beta, gamma in splits(t, sys.n1, sys.n2):
                self.plan.append((alpha + beta, beta + gamma, gamma))
        self.prefixes: list[set[Word]] = [set() for _ in self.plan]
        self.suffixes: list[set[Word]] = [set() for _ in self.plan]

    def add_words(self, new: list[Word]) -> list[tuple[set[Word], set[Word]]]:
        """Index new words; returns the per-split (new prefixes, new suffixes)."""
        deltas = []
        for i, (left, right, _gamma) in enumerate(self.plan):
            dp = {
                w[: ox + len(left)]
                for w in new
                for ox in occurrences(left, w)
            } - self.prefixes[i]
            ds = {
                w[oy + len(right) :]
                for w in new
                for oy in occurrences(right, w)
            } - self.suffixes[i]
            self.prefixes[i] |= dp
            self.suffixes[i] |= ds
            deltas.append((dp, ds))
        return deltas

    def run(
        self, deltas: list[tuple[set[Word], set[Word]]], max_len: int | None
    ) -> tuple[set[Word], bool]:
        produced: set[Word] = set()
        truncated = False
        for i, (_left, _right, gamma) in enumerate(self.plan):
            dp, ds = deltas[i]
            old_p = self.prefixes[i] - dp
            glen = len(gamma)
            for pset, sset in ((dp, self.suffixes[i]), (old_p, ds)):
                for p in pset:
                    budget = None if max_len is None else max_len - len(p) - glen
                    for s in sset:
                        if budget is not None and len(s) > budget:
                            truncated = True
                            continue
                        produced.add(p + gamma + s)
        return produced, truncated


def step(sys: TGRSystem, language: FiniteLanguage) -> FiniteLanguage:
    """One application of the recombination operator: all results over L x L x T."""
    index = _PlainStepIndex(sys)
    deltas = index.add_words(sort_words(language.words))
    produced, _ = index.run(deltas, None)
    return FiniteLanguage(frozenset(produced), sys.alphabet)


@dataclass(frozen=True)
class ClosureResult:
    language: FiniteLanguage
    rounds_used: int
    reached_fixpoint: bool
    truncated_by_length: bool


def _iterate_closure(
    step_fn: Callable[[set[Word], set[Word] | None], tuple[set[Word], bool]],
    initial: set[Word],
    alphabet: Alphabet,
    max_len: int,
    max_rounds: int,
    max_set_size: int,
) -> ClosureResult:
    """Shared closure loop; step_fn returns (words of length <= max_len, truncated)."""
    if any(len(w) > max_len for w in initial):
        raise ValueError("max_len is smaller than the longest initial word")
    if max_rounds < 0:
        raise ValueError(f"max_rounds must be nonnegative, got {max_rounds}")
    words = set(initial)
    frontier: set[Word] | None = None
    truncated = False
    fixpoint = False
    rounds = 0
    for r in range(1, max_rounds + 1):
        produced, trunc = step_fn(words, frontier)
        truncated = truncated or trunc
        rounds = r
        new = produced - words
        if not new:
            fixpoint = True
            break
        if len(words) + len(new) > max_set_size:
            raise ResourceLimitError(
                f"closure would exceed {max_set_size} words "
                f"({len(words)} + {len(new)} new in round {r})"
            )
        words |= new
        frontier = new
    return ClosureResult(
        language=FiniteLanguage(frozenset(words), alphabet),
        rounds_used=rounds,
        reached_fixpoint=fixpoint,
        truncated_by_length=truncated,
    )


def closure(
    sys: TGRSystem,
    initial: FiniteLanguage,
    max_len: int,
    max_rounds: int,
    max_set_size: int = 1_000_000,
) -> ClosureResult:
    """Bounded iterated closure: least fixpoint of L -> L + step(L), cut at max_len.

    `reached_fixpoint` means one further round adds no word within the length
    bound; `truncated_by_length` means some produced word was discarded, so
    the approximation may be incomplete beyond that length.
    """
    index = _PlainStepIndex(sys)
    indexed: set[Word] = set()

    def step_fn(words: set[Word], _frontier: set[Word] | None) -> tuple[set[Word], bool]:
        fresh = sort_words(words - indexed)
        deltas = index.add_words(fresh)
        indexed.update(fresh)
        return index.run(deltas, max_len)

    return _iterate_closure(
        step_fn, set(initial.words), sys.alphabet, max_len, max_rounds, max_set_size
    )


def derivation_trace(
    sys: TGRSystem,
    initial: FiniteLanguage,
    target: Word,
    max_len: int,
    max_rounds: int,
    max_set_size: int = 1_000_000,
) -> tuple[RecombinationEvent, ...] | None:
    """A minimal-round event sequence deriving `target` from `initial`, if any.

    Each event's x and y are initial words or results of earlier events; the
    last event yields `target`.  Words already in `initial` get an empty
    trace; unreachable targets (within the caps) give None.
    """
    if target in initial.words:
        return ()
    discovered: dict[Word, RecombinationEvent] = {}
    rounds_of: dict[Word, int] = {}

    words = set(initial.words)
    for r in range(1, max_rounds + 1):
        produced = _step_words(sys, words, record=discovered)
        kept = {w for w in produced if len(w) <= max_len}
        new = kept - words
        for w in new:
            rounds_of.setdefault(w, r)
        if not new:
            break
        if len(words) + len(new) > max_set_size:
            raise ResourceLimitError(f"closure would exceed {max_set_size} words in round {r}")
        words |= new
        if target in words:
            break
    if target not in words:
        return None

    needed: dict[Word, RecombinationEvent] = {}
    stack = [target]
    while stack:
        w = stack.pop()
        if w in initial.words or w in needed:
            continue
        ev = discovered[w]
        needed[w] = ev
        stack.extend((ev.x, ev.y))
    ordered = sorted(needed.values(), key=lambda e: (rounds_of[e.w], e.w))
    return tuple(ordered)
