"""Compile a Kuroda grammar into a contextual recombination pipeline.

The compiled system encodes a sentential form s as X w Y where the content
w is a circular arrangement of B B1 B2 followed by s; B marks where the
form begins.  Six template groups drive it: group 1 rewrites a rule redex
sitting at the right end, groups 2-5 rotate the last content symbol to the
front (so any redex can be brought to the right end: rotate-and-simulate),
and group 6 strips the markers once the content sits in original order,
leaving (terminal word) Y.  Filtering on (terminals)* Y and erasing Y then
yields the grammar's words.

The terminate group's left deletion context must run one symbol past the
block (X B B1 B2 a, with body a b c): the relation keeps alpha from the
partner word a b Z', so a context stopping at B2 would prepend one free
symbol to every output, producing junk instead of the content.  Consuming
the duplicated symbol from y makes termination emit exactly content Y.
The third body symbol also ranges over Y so that length-2 terminal words
can terminate; length-0/1 terminal words have no valid termination at all,
which the tracer reports explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ctgr import CTGRSystem, PCRecombinationEvent, PCTemplate, closure_pc, recombine_pc, tau
from .errors import FormatError, TraceError
from .grammars import KurodaGrammar, SearchCaps, Verdict, derivation_steps, membership
from .patterns import Pattern, matches, pattern_text, seq, star, symbol_class
from .words import FiniteLanguage, WeakCoding, Word, sort_words, word_text

X = "X"
XP = "X'"
Y = "Y"
Z = "Z"
ZP = "Z'"
B = "B"
B1 = "B1"
B2 = "B2"
BLOCK: Word = (B, B1, B2)
FIXED_MARKERS = frozenset({X, XP, Y, Z, ZP, B, B1, B2})
RESERVED_TOKENS = frozenset({"#", "$", "&"})


def rotating_marker(b: str) -> str:
    """The Y-variant that remembers the symbol currently being rotated."""
    return f"Y_{b}"


@dataclass(frozen=True)
class CompiledRE:
    grammar: KurodaGrammar
    system: CTGRSystem
    base: FiniteLanguage
    filter: Pattern
    coding: WeakCoding
    u_alphabet: frozenset[str]
    base_provenance: dict[Word, tuple[str, ...]]
    template_provenance: dict[Word, tuple[str, ...]]


def compile_kuroda(g: KurodaGrammar) -> CompiledRE:
    """Build the contextual system, base language, filter and coding for g."""
    symbols = g.nonterminals | g.terminals
    u = symbols | {B, B1, B2}
    clashes = symbols & (FIXED_MARKERS | RESERVED_TOKENS | {rotating_marker(b) for b in u})
    if clashes:
        raise FormatError(
            f"grammar symbols clash with reserved marker tokens: {sorted(clashes)}"
        )
    v = u | {X, XP, Y, Z, ZP} | {rotating_marker(b) for b in u}

    u_sorted = sorted(u)
    free: frozenset[Word] = frozenset()
    needs_x = frozenset({(X,)})
    needs_xp = frozenset({(XP,)})
    needs_y = frozenset({(Y,)})

    tmpl_prov: dict[Word, list[str]] = {}
    base_prov: dict[Word, list[str]] = {}

    def add_template(tp: PCTemplate, label: str) -> None:
        tmpl_prov.setdefault(tau(tp), []).append(label)

    def add_base(w: Word, label: str) -> None:
        base_prov.setdefault(w, []).append(label)

    templates: dict[Word, PCTemplate] = {}

    def template(tp: PCTemplate, label: str) -> None:
        templates[tau(tp)] = tp
        add_template(tp, label)

    for r in g.rules:
        for a in u_sorted:
            for c in u_sorted:
                template(
                    PCTemplate((Z,), (c, a) + r.rhs + (Y,), r.lhs + (Y,), needs_x, free),
                    f"simulate {r.text()}",
                )
    for b in u_sorted:
        yb = rotating_marker(b)
        for a in u_sorted:
            for c in u_sorted:
                template(
                    PCTemplate((Z,), (c, a, yb), (b, Y), needs_x, free),
                    f"rotate-1 move {b}",
                )
                template(
                    PCTemplate((Z,), (c, a, Y), (yb,), needs_xp, free),
                    f"rotate-3 restore after {b}",
                )
        for d in u_sorted:
            for e in u_sorted:
                template(
                    PCTemplate((X,), (XP, b, d, e), (Z,), free, frozenset({(yb,)})),
                    f"rotate-2 prepend {b}",
                )
    for a in u_sorted:
        for c in u_sorted:
            template(
                PCTemplate((XP,), (X, a, c), (Z,), free, needs_y),
                "rotate-4 restore left marker",
            )
    for a in u_sorted:
        for b in u_sorted:
            for c in u_sorted + [Y]:
                template(
                    PCTemplate((X, B, B1, B2, a), (a, b, c), (ZP,), free, needs_y),
                    "terminate",
                )

    start_word_ = (X,) + BLOCK + (g.start, Y)
    add_base(start_word_, "L1 start")
    for r in g.rules:
        for a in u_sorted:
            add_base((Z, a) + r.rhs + (Y,), f"L2 {r.text()}")
    for a in u_sorted:
        for b in u_sorted:
            add_base((Z, a, rotating_marker(b)), "L3 rotate-1 partner")
            add_base((XP, b, a, Z), "L4 rotate-2 partner")
            add_base((a, b, ZP), "L7 terminate partner")
        add_base((Z, a, Y), "L5 rotate-3 partner")
        add_base((X, a, Z), "L6 rotate-4 partner")

    system = CTGRSystem(templates=tuple(templates.values()), alphabet=frozenset(v), n1=1, n2=1)
    base = FiniteLanguage(frozenset(base_prov), frozenset(v))
    filter_pattern = seq(star(symbol_class(g.terminals)), symbol_class({Y}))
    coding = WeakCoding({**{a: a for a in g.terminals}, Y: None})
    return CompiledRE(
        grammar=g,
        system=system,
        base=base,
        filter=filter_pattern,
        coding=coding,
        u_alphabet=frozenset(u),
        base_provenance={w: tuple(sorted(set(v_))) for w, v_ in base_prov.items()},
        template_provenance={w: tuple(sorted(set(v_))) for w, v_ in tmpl_prov.items()},
    )


def start_word(cr: CompiledRE) -> Word:
    return (X,) + BLOCK + (cr.grammar.start, Y)


@dataclass(frozen=True)
class TraceEvent:
    phase: str
    event: PCRecombinationEvent


@dataclass(frozen=True)
class SimulationTrace:
    derivation: tuple[Word, ...]
    events: tuple[TraceEvent, ...]
    final_word: Word


def trace_lines(trace: SimulationTrace) -> list[str]:
    """One line per event: `phase | x | y | tau | w`."""
    return [
        f"{te.phase} | {word_text(te.event.x)} | {word_text(te.event.y)}"
        f" | {word_text(tau(te.event.template))} | {word_text(te.event.w)}"
        for te in trace.events
    ]


def _pick_event(
    cr: CompiledRE, x: Word, y: Word, tp: PCTemplate, expected: Word, phase: str
) -> PCRecombinationEvent:
    """Re-derive the intended event through the engine; never fabricate one."""
    if tp not in cr.system.template_set:
        raise TraceError(f"{phase}: required template {word_text(tau(tp))!r} is not in the system")
    hits = [ev for ev in recombine_pc(cr.system, x, y, tp) if ev.w == expected]
    if not hits:
        raise TraceError(
            f"{phase}: engine produced no event ({word_text(x)!r}, {word_text(y)!r}) "
            f"-> {word_text(expected)!r}"
        )
    return min(hits, key=lambda e: (e.pos_x, e.pos_y, len(e.beta), len(e.alpha)))


def rotate_cycle(cr: CompiledRE, w: Word) -> tuple[list[TraceEvent], Word]:
    """One full rotation X w b Y -> X b w Y via the four rotation groups."""
    if len(w) < 2 or w[0] != X or w[-1] != Y:
        raise TraceError(f"not a rotatable word: {word_text(w)!r}")
    content = w[1:-1]
    if len(content) < 3:
        raise TraceError(f"content too short to rotate: {word_text(w)!r}")
    for sym in content:
        if sym not in cr.u_alphabet:
            raise TraceError(f"content symbol {sym!r} is not rotatable")
    b = content[-1]
    rest = content[:-1]
    yb = rotating_marker(b)
    events = []

    tp1 = PCTemplate((Z,), (rest[-2], rest[-1], yb), (b, Y), frozenset({(X,)}), frozenset())
    step1 = (X,) + rest + (yb,)
    events.append(
        TraceEvent("rotate-1", _pick_event(cr, w, (Z, rest[-1], yb), tp1, step1, "rotate-1"))
    )

    tp2 = PCTemplate((X,), (XP, b, rest[0], rest[1]), (Z,), frozenset(), frozenset({(yb,)}))
    step2 = (XP, b) + rest + (yb,)
    events.append(
        TraceEvent("rotate-2", _pick_event(cr, (XP, b, rest[0], Z), step1, tp2, step2, "rotate-2"))
    )

    rotated = (b,) + rest
    tp3 = PCTemplate((Z,), (rotated[-2], rotated[-1], Y), (yb,), frozenset({(XP,)}), frozenset())
    step3 = (XP,) + rotated + (Y,)
    events.append(
        TraceEvent("rotate-3", _pick_event(cr, step2, (Z, rotated[-1], Y), tp3, step3, "rotate-3"))
    )

    tp4 = PCTemplate((XP,), (X, rotated[0], rotated[1]), (Z,), frozenset(), frozenset({(Y,)}))
    step4 = (X,) + rotated + (Y,)
    events.append(
        TraceEvent("rotate-4", _pick_event(cr, (X, rotated[0], Z), step3, tp4, step4, "rotate-4"))
    )

    if step4 != (X, b) + rest + (Y,):
        raise TraceError("rotation cycle did not produce X b w Y")
    return events, step4


def simulate_derivation(
    cr: CompiledRE, derivation: list[Word] | tuple[Word, ...], max_events: int = 10_000
) -> SimulationTrace:
    """Replay a grammar derivation as a validated recombination trace.

    Each grammar step is realized as the rotations that bring its redex to
    the right end followed by one simulate event; after the last step the
    content is rotated into original order and terminated.  Every event is
    re-derived through recombine_pc.  Raises TraceError when the derivation
    is invalid, when the event budget runs out, or when the terminal word is
    too short to terminate (fewer than 2 symbols).
    """
    g = cr.grammar
    derivation = tuple(derivation)
    if not derivation or derivation[0] != (g.start,):
        raise TraceError("derivation must start at the start symbol")
    terminal_word = derivation[-1]
    if any(s not in g.terminals for s in terminal_word):
        raise TraceError("derivation must end in a terminal word")
    try:
        steps = derivation_steps(g, derivation)
    except FormatError as exc:
        raise TraceError(f"invalid derivation: {exc}") from None

    events: list[TraceEvent] = []
    current = start_word(cr)

    def budget() -> None:
        if len(events) > max_events:
            raise TraceError(f"trace exceeded the event budget of {max_events}")

    def rotate_to(target_content: Word) -> None:
        nonlocal current
        content = current[1:-1]
        m = len(content)
        if m != len(target_content):
            raise TraceError("rotation target has a different length")
        for d in range(m):
            if content[m - d :] + content[: m - d] == target_content:
                break
        else:
            raise TraceError(
                f"{word_text(target_content)!r} is not a rotation of {word_text(content)!r}"
            )
        for _ in range(d):
            cycle, current = rotate_cycle(cr, current)
            events.extend(cycle)
            budget()

    for (rule, pos), form in zip(steps, derivation):
        lhs, rhs = rule.lhs, rule.rhs
        target = form[pos + len(lhs) :] + BLOCK + form[:pos] + lhs
        rotate_to(target)
        content = current[1:-1]
        c, a = content[-len(lhs) - 2], content[-len(lhs) - 1]
        tp = PCTemplate((Z,), (c, a) + rhs + (Y,), lhs + (Y,), frozenset({(X,)}), frozenset())
        partner = (Z, a) + rhs + (Y,)
        expected = (X,) + content[: -len(lhs)] + rhs + (Y,)
        events.append(
            TraceEvent("simulate", _pick_event(cr, current, partner, tp, expected, "simulate"))
        )
        current = expected
        budget()

    rotate_to(BLOCK + terminal_word)
    if len(terminal_word) < 2:
        raise TraceError(
            f"cannot terminate {word_text(terminal_word)!r}: the terminate group needs at "
            "least two terminal symbols, so words shorter than 2 are out of its reach"
        )
    t1, t2 = terminal_word[0], terminal_word[1]
    c3 = terminal_word[2] if len(terminal_word) >= 3 else Y
    tp6 = PCTemplate((X, B, B1, B2, t1), (t1, t2, c3), (ZP,), frozenset(), frozenset({(Y,)}))
    final = terminal_word + (Y,)
    events.append(
        TraceEvent("terminate", _pick_event(cr, (t1, t2, ZP), current, tp6, final, "terminate"))
    )
    return SimulationTrace(derivation=derivation, events=tuple(events), final_word=final)


def pipeline_language_pc(
    cr: CompiledRE,
    k: int,
    max_len: int,
    max_rounds: int,
    max_set_size: int = 1_000_000,
) -> tuple[FiniteLanguage, bool]:
    """Evaluate the pipeline: bounded closure, filter, coding, cut to length <= k.

    The boolean reports only whether the bounded closure reached its
    fixpoint; the construction targets arbitrary recursively enumerable
    languages, so no cap ever makes the output complete in general.
    """
    res = closure_pc(cr.system, cr.base, max_len, max_rounds, max_set_size)
    decoded = {
        cr.coding.apply(w) for w in res.language.words if matches(cr.filter, w)
    }
    out = frozenset(w for w in decoded if len(w) <= k)
    return FiniteLanguage(out, cr.grammar.terminals), res.reached_fixpoint


@dataclass(frozen=True)
class SoundnessReport:
    produced: tuple[Word, ...]
    non_members: tuple[Word, ...]
    unknowns: tuple[Word, ...]
    fixpoint_reached: bool

    @property
    def ok(self) -> bool:
        return not self.non_members


def soundness_check(
    cr: CompiledRE,
    g: KurodaGrammar,
    k: int,
    max_len: int,
    max_rounds: int,
    max_set_size: int = 1_000_000,
    caps: SearchCaps | None = None,
) -> SoundnessReport:
    """Check every pipeline word against the grammar membership oracle.

    Non-members expose a construction bug; unknowns are oracle cap limits.
    """
    produced, fixpoint = pipeline_language_pc(cr, k, max_len, max_rounds, max_set_size)
    caps = caps or SearchCaps()
    non_members = []
    unknowns = []
    for w in produced:
        verdict = membership(g, w, caps)
        if verdict.verdict is Verdict.NON_MEMBER:
            non_members.append(w)
        elif verdict.verdict is Verdict.UNKNOWN:
            unknowns.append(w)
    return SoundnessReport(
        produced=tuple(produced),
        non_members=tuple(sort_words(non_members)),
        unknowns=tuple(sort_words(unknowns)),
        fixpoint_reached=fixpoint,
    )


DUMP_KIND_CTGR = "ctgr"


def dump_compiled_re(cr: CompiledRE) -> str:
    lines = [
        f"tgrkit-dump {DUMP_KIND_CTGR}",
        f"n1 {cr.system.n1}",
        f"n2 {cr.system.n2}",
        "alphabet " + " ".join(sorted(cr.system.alphabet)),
        "BASE",
    ]
    lines.extend(word_text(w) for w in cr.base)
    lines.append("TEMPLATES")
    lines.extend(word_text(tau(tp)) for tp in cr.system.templates)
    lines.append("FILTER")
    lines.append(pattern_text(cr.filter))
    lines.append("CODING")
    for sym in sorted(cr.coding.mapping):
        image = cr.coding.mapping[sym]
        lines.append(f"{sym} -> {image if image is not None else '@'}")
    lines.append("PROVENANCE")
    for w in sort_words(cr.base_provenance):
        lines.append(f"base | {word_text(w)} | " + " ; ".join(cr.base_provenance[w]))
    for w in sort_words(cr.template_provenance):
        lines.append(f"template | {word_text(w)} | " + " ; ".join(cr.template_provenance[w]))
    lines.append("END")
    return "\n".join(lines) + "\n"
