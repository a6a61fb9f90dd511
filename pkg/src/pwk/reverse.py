"""Backward steps, bounded reversibility certification, reverse-table derivation.

A backward step first moves the heads (upper left or stay, lower right or
stay) and then reads.  Because the direction is only known after the lookup,
all admissible retreat pairs are tried and exactly one must be consistent.
Reverse broadcasts are evaluated on the current state and the symbol under
the head after the move.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .model import (
    Configuration,
    MachineSpec,
    Rule,
    StepRecord,
    Trace,
    Verdict,
    initial_configuration,
    make_tape,
    run,
    words_upto,
)

PREV = "prev"
NO_PREDECESSOR = "no-predecessor"
AMBIGUOUS = "ambiguous"

SCOPE_NOTE = "checked on configurations reachable from initial configurations only"


class MissingReverseTables(ValueError):
    pass


@dataclass(frozen=True)
class BackResult:
    status: str
    candidates: tuple = ()

    @property
    def prev(self) -> Optional[StepRecord]:
        return self.candidates[0] if self.status == PREV else None


def backward_step(spec: MachineSpec, word, c: Configuration, tape=None) -> BackResult:
    if not spec.has_reverse:
        raise MissingReverseTables(f"machine {spec.name!r} has no reverse tables")
    if tape is None:
        tape = make_tape(spec, word)
    last = len(tape) - 1
    up, lo = spec.upper, spec.lower
    found = []
    for d1 in (0, 1):
        i = c.upper_pos - d1
        if i < 0:
            continue
        x = tape[i]
        m1 = up.reverse_broadcast(c.upper_state, x)
        for d2 in (0, 1):
            j = c.lower_pos + d2
            if j > last:
                continue
            y = tape[j]
            m2 = lo.reverse_broadcast(c.lower_state, y)
            r1 = up.reverse_transition(c.upper_state, x, m2)
            r2 = lo.reverse_transition(c.lower_state, y, m1)
            if r1 is None or r2 is None or r1[1] != d1 or r2[1] != d2:
                continue
            found.append(StepRecord(c, Configuration(r1[0], i, r2[0], j), m1, m2, (d1, d2)))
    if not found:
        return BackResult(NO_PREDECESSOR)
    if len(found) == 1:
        return BackResult(PREV, tuple(found))
    return BackResult(AMBIGUOUS, tuple(found))


def replay_backward(spec: MachineSpec, word, start: Configuration, max_steps: Optional[int] = None):
    """Step backward from ``start`` until no unique predecessor exists.

    Returns the backward trace (records run from later to earlier
    configurations) and the final ``BackResult``.
    """
    word = "".join(word)
    tape = make_tape(spec, word)
    if max_steps is None:
        max_steps = spec.config_space(len(word)) + 1
    steps = []
    c = start
    res = backward_step(spec, word, c, tape)
    while res.status == PREV and len(steps) < max_steps:
        steps.append(res.prev)
        c = res.prev.post
        res = backward_step(spec, word, c, tape)
    return Trace(word, steps, None, c, direction="backward"), res


@dataclass(frozen=True)
class Witness:
    word: str
    kind: str  # "ambiguous" | "mismatch" | "no-predecessor" | "initial-has-predecessor"
    config: Configuration
    expected: Optional[Configuration] = None
    found: tuple = ()

    def as_dict(self):
        return {
            "word": self.word,
            "kind": self.kind,
            "config": self.config.node_id(),
            "expected": None if self.expected is None else self.expected.node_id(),
            "found": [r.post.node_id() for r in self.found],
        }


def inversion_witness(spec: MachineSpec, word, trace: Optional[Trace] = None) -> Optional[Witness]:
    """First configuration whose backward step does not undo the forward run."""
    word = "".join(word)
    tape = make_tape(spec, word)
    if trace is None:
        trace = run(spec, word)
    for rec in trace.steps:
        res = backward_step(spec, word, rec.post, tape)
        if res.status == AMBIGUOUS:
            return Witness(word, AMBIGUOUS, rec.post, rec.pre, res.candidates)
        if res.status == NO_PREDECESSOR:
            return Witness(word, NO_PREDECESSOR, rec.post, rec.pre)
        if res.prev.post != rec.pre:
            return Witness(word, "mismatch", rec.post, rec.pre, res.candidates)
    if trace.verdict is not Verdict.LOOP:
        start = initial_configuration(spec, word)
        res = backward_step(spec, word, start, tape)
        if res.status != NO_PREDECESSOR:
            return Witness(word, "initial-has-predecessor", start, None, res.candidates)
    return None


def verify_inversion(spec: MachineSpec, word) -> bool:
    return inversion_witness(spec, word) is None


@dataclass
class ReversibilityReport:
    machine: str
    max_len: int
    certified: bool
    witness: Optional[Witness] = None
    words_checked: int = 0
    configs_checked: int = 0
    extra_words: tuple = ()
    scope: str = SCOPE_NOTE

    @property
    def verdict(self) -> str:
        return f"certified-up-to-{self.max_len}" if self.certified else "fails"

    def as_dict(self):
        return {
            "machine": self.machine,
            "verdict": self.verdict,
            "max_len": self.max_len,
            "extra_words": list(self.extra_words),
            "words_checked": self.words_checked,
            "configs_checked": self.configs_checked,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "scope": self.scope,
        }


def certify_bounded(spec: MachineSpec, max_len: int, words: Iterable[str] = ()) -> ReversibilityReport:
    """Check backward determinism and exact inversion on every word up to ``max_len``.

    ``words`` adds longer words (e.g. specific members) to the check.
    """
    if not spec.has_reverse:
        raise MissingReverseTables(f"machine {spec.name!r} has no reverse tables")
    extra = tuple(words)
    report = ReversibilityReport(spec.name, max_len, True, extra_words=extra)
    for w in list(words_upto(spec.input_alphabet, max_len)) + list(extra):
        trace = run(spec, w)
        report.words_checked += 1
        report.configs_checked += len(trace.steps) + 1
        witness = inversion_witness(spec, w, trace)
        if witness is not None:
            report.certified = False
            report.witness = witness
            break
    return report


@dataclass(frozen=True)
class Conflict:
    side: str
    key: tuple
    first: tuple  # (source forward rule, derived value)
    second: tuple

    def describe(self) -> str:
        (r1, v1), (r2, v2) = self.first, self.second
        return (f"{self.side}: back key {self.key} derived from {tuple(r1)} gives {v1}, "
                f"but from {tuple(r2)} gives {v2}")


@dataclass
class DeriveResult:
    spec: Optional[MachineSpec]
    conflicts: list = field(default_factory=list)
    words_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.conflicts


def derive_reverse(spec: MachineSpec, max_len: int = 8, words: Iterable[str] = ()) -> DeriveResult:
    """Build reverse tables by inverting every forward step that actually fires.

    Rule pairs are collected from the runs on all words up to ``max_len``
    (plus ``words``); the received reverse message of each derived entry is
    the partner's reverse broadcast at the successor state over the same
    symbol.  Existing reverse broadcast overrides are honoured.
    """
    up, lo = spec.upper, spec.lower
    derived = {"upper": {}, "lower": {}}
    conflicts = []
    reported = set()
    count = 0
    all_words = list(words_upto(spec.input_alphabet, max_len)) + list(words)
    for w in all_words:
        count += 1
        tape = make_tape(spec, w)
        for rec in run(spec, w).steps:
            p, i, q, j = rec.pre
            p1, _, q1, _ = rec.post
            x, y = tape[i], tape[j]
            d1, d2 = rec.moves
            src1 = Rule(p, x, rec.sent_lower, p1, d1)
            src2 = Rule(q, y, rec.sent_upper, q1, d2)
            entries = (
                ("upper", (p1, x, lo.reverse_broadcast(q1, y)), (p, d1), src1),
                ("lower", (q1, y, up.reverse_broadcast(p1, x)), (q, d2), src2),
            )
            for side, key, value, src in entries:
                table = derived[side]
                if key not in table:
                    table[key] = (value, src)
                elif table[key][0] != value and (side, key, value) not in reported:
                    reported.add((side, key, value))
                    conflicts.append(Conflict(side, key, (table[key][1], table[key][0]), (src, value)))
    if conflicts:
        return DeriveResult(None, conflicts, count)

    def rules(side, comp):
        order = {s: k for k, s in enumerate(comp.states)}
        out = [Rule(k[0], k[1], k[2], v[0], v[1]) for k, (v, _) in derived[side].items()]
        out.sort(key=lambda r: (order[r.state], r.symbol, "" if r.message is None else r.message))
        return tuple(out)

    new = replace(
        spec,
        upper=replace(up, reverse_delta=rules("upper", up)),
        lower=replace(lo, reverse_delta=rules("lower", lo)),
    )
    return DeriveResult(new, [], count)
