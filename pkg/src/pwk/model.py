"""Core types and forward semantics of deterministic two-party Watson-Crick systems.

A system has two components running on the same read-only tape ``▷ w ◁``.
The upper component starts on ``▷`` and moves right, the lower one starts on
``◁`` and moves left.  In every step both components first broadcast a message
computed from their (state, scanned symbol) pair, then both transitions are
applied at once, each using the message just received from the other side.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Tuple

LEND = "▷"
REND = "◁"
ENDMARKERS = (LEND, REND)

STAY = 0
MOVE = 1  # forward: advance; backward: retreat

NORMAL = "normal"
COMPLEMENTED = "complemented"

Message = Optional[str]  # None stands for "no message"


class AlphabetError(ValueError):
    """A word contains a symbol outside the input alphabet."""


class Rule(NamedTuple):
    state: str
    symbol: str
    message: Message
    target: str
    move: int

    @property
    def key(self) -> Tuple[str, str, Message]:
        return (self.state, self.symbol, self.message)


@dataclass(frozen=True)
class ComponentSpec:
    """One automaton of the system.

    ``send`` entries override ``send_default`` ("none" or "echo").  The reverse
    broadcast is the forward broadcast overlaid with ``rsend`` entries.
    ``reverse_delta`` is ``None`` for forward-only components.
    """

    states: Tuple[str, ...]
    initial: str
    accepting: frozenset
    delta: Tuple[Rule, ...] = ()
    send_default: str = "none"
    send: Mapping[Tuple[str, str], Message] = field(default_factory=dict)
    reverse_delta: Optional[Tuple[Rule, ...]] = None
    rsend: Mapping[Tuple[str, str], Message] = field(default_factory=dict)

    @cached_property
    def _forward(self):
        table = {}
        for rule in self.delta:
            table.setdefault(rule.key, (rule.target, rule.move))
        return table

    @cached_property
    def _backward(self):
        table = {}
        for rule in self.reverse_delta or ():
            table.setdefault(rule.key, (rule.target, rule.move))
        return table

    def broadcast(self, state: str, symbol: str) -> Message:
        key = (state, symbol)
        if key in self.send:
            return self.send[key]
        return symbol if self.send_default == "echo" else None

    def reverse_broadcast(self, state: str, symbol: str) -> Message:
        key = (state, symbol)
        if key in self.rsend:
            return self.rsend[key]
        return self.broadcast(state, symbol)

    def transition(self, state, symbol, message):
        return self._forward.get((state, symbol, message))

    def reverse_transition(self, state, symbol, message):
        return self._backward.get((state, symbol, message))


@dataclass(frozen=True)
class MachineSpec:
    name: str
    input_alphabet: Tuple[str, ...]
    message_alphabet: Tuple[str, ...]
    upper: ComponentSpec
    lower: ComponentSpec
    acceptance_mode: str = NORMAL

    @property
    def tape_symbols(self) -> Tuple[str, ...]:
        return (LEND, REND) + tuple(self.input_alphabet)

    @property
    def has_reverse(self) -> bool:
        return self.upper.reverse_delta is not None and self.lower.reverse_delta is not None

    @property
    def loop_bound(self) -> int:
        """Configurations per tape cell pair; multiply by ``(n+2)**2``."""
        return len(self.upper.states) * len(self.lower.states)

    def config_space(self, n: int) -> int:
        return self.loop_bound * (n + 2) ** 2


class Configuration(NamedTuple):
    upper_state: str
    upper_pos: int
    lower_state: str
    lower_pos: int

    def node_id(self) -> str:
        return f"{self.upper_state},{self.upper_pos}|{self.lower_state},{self.lower_pos}"


@dataclass(frozen=True)
class StepRecord:
    pre: Configuration
    post: Configuration
    sent_upper: Message
    sent_lower: Message
    moves: Tuple[int, int]


class Verdict(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    LOOP = "loop"
    STEP_LIMIT = "step-limit"


@dataclass
class Trace:
    word: str
    steps: list
    verdict: Optional[Verdict]
    halt_config: Configuration
    direction: str = "forward"

    @property
    def configurations(self) -> list:
        if not self.steps:
            return [self.halt_config]
        return [self.steps[0].pre] + [s.post for s in self.steps]


class Violation(NamedTuple):
    where: str
    message: str

    def __str__(self):
        return f"{self.where}: {self.message}"


def _check_component(spec: MachineSpec, comp: ComponentSpec, side: str) -> list:
    out = []
    states = set(comp.states)
    if len(states) != len(comp.states):
        out.append(Violation(f"{side}.states", "duplicate state name"))
    if not comp.states:
        out.append(Violation(f"{side}.states", "component has no states"))
    if comp.initial not in states:
        out.append(Violation(f"{side}.initial", f"initial state {comp.initial!r} not declared"))
    for s in sorted(set(comp.accepting) - states):
        out.append(Violation(f"{side}.accepting", f"accepting state {s!r} not declared"))
    if comp.send_default not in ("none", "echo"):
        out.append(Violation(f"{side}.send-default", f"unknown default {comp.send_default!r}"))

    symbols = set(spec.tape_symbols)
    messages = set(spec.message_alphabet)

    for table_name, table in (("send", comp.send), ("rsend", comp.rsend)):
        for (state, sym), msg in table.items():
            where = f"{side}.{table_name}[{state} {sym}]"
            if state not in states:
                out.append(Violation(where, f"unknown state {state!r}"))
            if sym not in symbols:
                out.append(Violation(where, f"unknown symbol {sym!r}"))
            if msg is not None and msg not in messages:
                out.append(Violation(where, f"undeclared message {msg!r}"))
    if comp.send_default == "echo":
        for state in comp.states:
            for sym in spec.tape_symbols:
                if (state, sym) not in comp.send and sym not in messages:
                    out.append(Violation(f"{side}.send-default",
                                         f"echo of {sym!r} in state {state!r} is not a declared message"))
                    break

    tables = [("step", comp.delta, "forward")]
    if comp.reverse_delta is not None:
        tables.append(("back", comp.reverse_delta, "reverse"))
    for table_name, rules, kind in tables:
        seen = {}
        for k, rule in enumerate(rules):
            where = f"{side}.{table_name}[{k}]"
            if rule.state not in states:
                out.append(Violation(where, f"unknown state {rule.state!r}"))
            if rule.target not in states:
                out.append(Violation(where, f"unknown target state {rule.target!r}"))
            if rule.symbol not in symbols:
                out.append(Violation(where, f"unknown symbol {rule.symbol!r}"))
            if rule.message is not None and rule.message not in messages:
                out.append(Violation(where, f"undeclared message {rule.message!r}"))
            if rule.move not in (STAY, MOVE):
                out.append(Violation(where, f"bad move {rule.move!r}"))
            if kind == "forward" and rule.move == MOVE:
                if side == "upper" and rule.symbol == REND:
                    out.append(Violation(where, "upper moves past right endmarker"))
                if side == "lower" and rule.symbol == LEND:
                    out.append(Violation(where, "lower moves past left endmarker"))
            if rule.key in seen:
                out.append(Violation(where, f"{kind} nondeterminism: same key as {side}.{table_name}[{seen[rule.key]}]"))
            else:
                seen[rule.key] = k
    return out


def validate(spec: MachineSpec) -> list:
    """Return every well-formedness violation; an empty list means valid."""
    out = []
    if spec.acceptance_mode not in (NORMAL, COMPLEMENTED):
        out.append(Violation("acceptance", f"unknown mode {spec.acceptance_mode!r}"))
    if len(set(spec.input_alphabet)) != len(spec.input_alphabet):
        out.append(Violation("alphabet", "duplicate input symbol"))
    for sym in spec.input_alphabet:
        if sym in ENDMARKERS:
            out.append(Violation("alphabet", f"endmarker {sym!r} in input alphabet"))
        elif len(sym) != 1 or sym.isspace() or sym == "#":
            out.append(Violation("alphabet", f"input symbol {sym!r} must be one printable character"))
    if len(set(spec.message_alphabet)) != len(spec.message_alphabet):
        out.append(Violation("messages", "duplicate message"))
    for msg in spec.message_alphabet:
        if msg is None or not isinstance(msg, str) or not msg or any(ch.isspace() for ch in msg):
            out.append(Violation("messages", f"bad message name {msg!r}"))
    out.extend(_check_component(spec, spec.upper, "upper"))
    out.extend(_check_component(spec, spec.lower, "lower"))
    return out


def make_tape(spec: MachineSpec, word: Sequence[str]) -> Tuple[str, ...]:
    alphabet = set(spec.input_alphabet)
    for k, sym in enumerate(word):
        if sym not in alphabet:
            raise AlphabetError(f"symbol {sym!r} at position {k} is not in the input alphabet")
    return (LEND,) + tuple(word) + (REND,)


def initial_configuration(spec: MachineSpec, word: Sequence[str]) -> Configuration:
    make_tape(spec, word)
    return Configuration(spec.upper.initial, 0, spec.lower.initial, len(word) + 1)


def forward_step(spec: MachineSpec, word, c: Configuration, tape=None) -> Optional[StepRecord]:
    """Successor step of ``c``, or ``None`` when the system halts there."""
    if tape is None:
        tape = make_tape(spec, word)
    x = tape[c.upper_pos]
    y = tape[c.lower_pos]
    m1 = spec.upper.broadcast(c.upper_state, x)
    m2 = spec.lower.broadcast(c.lower_state, y)
    r1 = spec.upper.transition(c.upper_state, x, m2)
    r2 = spec.lower.transition(c.lower_state, y, m1)
    if r1 is None or r2 is None:
        return None
    post = Configuration(r1[0], c.upper_pos + r1[1], r2[0], c.lower_pos - r2[1])
    last = len(tape) - 1
    assert 0 <= post.upper_pos <= last and 0 <= post.lower_pos <= last, (
        f"head left the tape at {post}; validate() the machine first")
    return StepRecord(c, post, m1, m2, (r1[1], r2[1]))


def halting_accepts(spec: MachineSpec, c: Configuration) -> bool:
    hit = c.upper_state in spec.upper.accepting or c.lower_state in spec.lower.accepting
    return hit if spec.acceptance_mode == NORMAL else not hit


def run(spec: MachineSpec, word, step_limit: Optional[int] = None) -> Trace:
    """Run from the initial configuration until halt, loop, or ``step_limit`` steps."""
    word = "".join(word)
    tape = make_tape(spec, word)
    c = Configuration(spec.upper.initial, 0, spec.lower.initial, len(word) + 1)
    bound = spec.config_space(len(word))
    limit = bound + 1 if step_limit is None else step_limit
    seen = {c}
    steps = []
    while True:
        rec = forward_step(spec, word, c, tape)
        if rec is None:
            verdict = Verdict.ACCEPTED if halting_accepts(spec, c) else Verdict.REJECTED
            return Trace(word, steps, verdict, c)
        if len(steps) >= limit:
            return Trace(word, steps, Verdict.STEP_LIMIT, c)
        steps.append(rec)
        c = rec.post
        if c in seen:
            return Trace(word, steps, Verdict.LOOP, c)
        seen.add(c)


def accepts(spec: MachineSpec, word) -> bool:
    return run(spec, word).verdict is Verdict.ACCEPTED


def words_upto(alphabet: Iterable[str], max_len: int):
    """All words of length <= max_len, by length then declared alphabet order."""
    from itertools import product

    alphabet = tuple(alphabet)
    for n in range(max_len + 1):
        for letters in product(alphabet, repeat=n):
            yield "".join(letters)
