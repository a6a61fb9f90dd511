"""Line-oriented text format (``.pwk``) for machine specs.

Example::

    machine tiny
    alphabet: a
    messages: x
    upper:
      states: s t
      initial: s
      accepting: t
      send: s LEND -> x
      step: s LEND / NONE -> t fwd
    lower:
      states: q
      initial: q
      step: q REND / x -> q stay

``LEND``/``REND`` name the endmarkers and ``NONE`` the empty message.  A
machine has reverse tables exactly when some ``back:`` or ``rsend:`` line is
present.  :func:`serialize` writes a canonical form: fixed line order, states
in declaration order, rules sorted by their (state, symbol, message) tokens.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Optional, Union

from .model import (
    COMPLEMENTED,
    LEND,
    MOVE,
    NORMAL,
    REND,
    STAY,
    ComponentSpec,
    MachineSpec,
    Rule,
    validate,
)

RESERVED = {"LEND": LEND, "REND": REND}
NONE_TOKEN = "NONE"
KEYWORDS = {"LEND", "REND", "NONE", "->", "/"}
_FWD_MOVES = {"stay": STAY, "fwd": MOVE}
_BACK_MOVES = {"stay": STAY, "rev": MOVE}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1


class ParseError(ValueError):
    def __init__(self, span: SourceSpan, message: str, expected: Optional[str] = None):
        self.span = span
        self.message = message
        self.expected = expected
        text = f"line {span.line}, column {span.column}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


@dataclass(frozen=True)
class _Tok:
    text: str
    span: SourceSpan


def _tokens(lineno: int, line: str):
    out = []
    for m in re.finditer(r"\S+", line):
        if m.group().startswith("#"):
            break
        out.append(_Tok(m.group(), SourceSpan(lineno, m.start() + 1, len(m.group()))))
    return out


def _symbol(tok: _Tok) -> str:
    return RESERVED.get(tok.text, tok.text)


def _message(tok: _Tok):
    return None if tok.text == NONE_TOKEN else RESERVED.get(tok.text, tok.text)


class _Block:
    def __init__(self, side, span):
        self.side = side
        self.span = span
        self.fields = {}
        self.send = {}
        self.rsend = {}
        self.steps = []
        self.backs = []


class _Parser:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        self.name = None
        self.header = {}
        self.blocks = {}
        self.current = None
        self.spans = {}  # validation location -> span
        self.last_span = SourceSpan(1, 1, 1)

    def fail(self, tok_or_span, message, expected=None):
        span = tok_or_span.span if isinstance(tok_or_span, _Tok) else tok_or_span
        raise ParseError(span, message, expected)

    def run(self) -> MachineSpec:
        for lineno, line in enumerate(self.lines, 1):
            toks = _tokens(lineno, line)
            if not toks:
                continue
            self.last_span = toks[-1].span
            self.line(toks)
        return self.finish()

    def expect_count(self, key, args, n, what):
        if len(args) != n:
            where = args[n] if len(args) > n else key
            self.fail(where, f"{key.text} takes {what}", what)

    def name_token(self, tok, kind):
        if tok.text in KEYWORDS or tok.text.endswith(":"):
            self.fail(tok, f"reserved token {tok.text!r} cannot be a {kind}", f"a {kind} name")
        return tok.text

    def line(self, toks):
        key, args = toks[0], toks[1:]
        if self.name is None:
            if key.text != "machine":
                self.fail(key, f"unexpected {key.text!r} before machine header", "'machine <name>'")
            self.expect_count(key, args, 1, "one name")
            self.name = self.name_token(args[0], "machine")
            return
        if key.text == "machine":
            self.fail(key, "duplicate machine header")
        if key.text in ("upper:", "lower:"):
            side = key.text[:-1]
            if side in self.blocks:
                self.fail(key, f"duplicate {side} block")
            if args:
                self.fail(args[0], f"unexpected {args[0].text!r} after {key.text}", "end of line")
            self.current = self.blocks[side] = _Block(side, key.span)
            return
        if key.text in ("alphabet:", "messages:", "acceptance:"):
            if self.current is not None:
                self.fail(key, f"{key.text} must come before the component blocks")
            if key.text in self.header:
                self.fail(key, f"duplicate {key.text}")
            self.header[key.text] = (key, args)
            return
        if self.current is None:
            self.fail(key, f"unexpected {key.text!r}", "alphabet:, messages:, upper: or lower:")
        self.block_line(self.current, key, args)

    def block_line(self, b, key, args):
        k = key.text
        if k in ("states:", "initial:", "accepting:", "send-default:"):
            if k in b.fields:
                self.fail(key, f"duplicate {k} in {b.side} block")
            b.fields[k] = (key, args)
        elif k in ("send:", "rsend:"):
            self.expect_count(key, args, 4, "'<state> <symbol> -> <message>'")
            if args[2].text != "->":
                self.fail(args[2], f"unexpected {args[2].text!r}", "'->'")
            table = b.send if k == "send:" else b.rsend
            entry = (args[0].text, _symbol(args[1]))
            if entry in table:
                self.fail(key, f"duplicate {k} entry for {args[0].text} {args[1].text}")
            table[entry] = (_message(args[3]), args)
        elif k in ("step:", "back:"):
            moves = _FWD_MOVES if k == "step:" else _BACK_MOVES
            self.expect_count(key, args, 7, "'<state> <symbol> / <message> -> <state> " + "|".join(moves) + "'")
            if args[2].text != "/":
                self.fail(args[2], f"unexpected {args[2].text!r}", "'/'")
            if args[4].text != "->":
                self.fail(args[4], f"unexpected {args[4].text!r}", "'->'")
            if args[6].text not in moves:
                self.fail(args[6], f"unknown move {args[6].text!r}", " or ".join(moves))
            rule = Rule(args[0].text, _symbol(args[1]), _message(args[3]), args[5].text, moves[args[6].text])
            (b.steps if k == "step:" else b.backs).append((rule, key, args))
        else:
            self.fail(key, f"unknown {b.side} block entry {k!r}",
                      "states:, initial:, accepting:, send-default:, send:, rsend:, step: or back:")

    def header_list(self, key):
        if key not in self.header:
            self.fail(self.last_span, f"missing {key} line")
        return self.header[key][1]

    def finish(self) -> MachineSpec:
        if self.name is None:
            self.fail(self.last_span, "empty document", "'machine <name>'")
        alphabet = []
        for tok in self.header_list("alphabet:"):
            if tok.text in RESERVED or tok.text == NONE_TOKEN:
                self.fail(tok, f"reserved symbol {tok.text!r} in alphabet", "an input symbol")
            if len(tok.text) != 1 or tok.text in ("/",):
                self.fail(tok, f"input symbol {tok.text!r} must be a single character")
            if tok.text in alphabet:
                self.fail(tok, f"duplicate input symbol {tok.text!r}")
            alphabet.append(tok.text)
        messages = []
        for tok in self.header_list("messages:"):
            if tok.text == NONE_TOKEN or tok.text in ("->", "/"):
                self.fail(tok, f"reserved token {tok.text!r} in messages", "a message name")
            msg = _symbol(tok)
            if msg in messages:
                self.fail(tok, f"duplicate message {tok.text!r}")
            messages.append(msg)
        mode = NORMAL
        if "acceptance:" in self.header:
            key, args = self.header["acceptance:"]
            self.expect_count(key, args, 1, "normal or complemented")
            if args[0].text not in (NORMAL, COMPLEMENTED):
                self.fail(args[0], f"unknown acceptance mode {args[0].text!r}", "normal or complemented")
            mode = args[0].text
        for side in ("upper", "lower"):
            if side not in self.blocks:
                self.fail(self.last_span, f"missing {side}: block")
        with_reverse = any(b.backs or b.rsend for b in self.blocks.values())
        symbols = set(alphabet) | {LEND, REND}
        upper = self.component(self.blocks["upper"], symbols, set(messages), with_reverse)
        lower = self.component(self.blocks["lower"], symbols, set(messages), with_reverse)
        spec = MachineSpec(self.name, tuple(alphabet), tuple(messages), upper, lower, mode)
        problems = validate(spec)
        if problems:
            v = problems[0]
            self.fail(self.spans.get(v.where, self.blocks.get(v.where.split(".")[0], _Block("", self.last_span)).span),
                      v.message)
        return canonical(spec)

    def component(self, b, symbols, messages, with_reverse) -> ComponentSpec:
        for k in ("states:", "initial:"):
            if k not in b.fields:
                self.fail(b.span, f"{b.side} block has no {k} line")
        key, args = b.fields["states:"]
        if not args:
            self.fail(key, "states: needs at least one state", "state names")
        states = []
        for tok in args:
            name = self.name_token(tok, "state")
            if name in states:
                self.fail(tok, f"duplicate state {name!r}")
            states.append(name)
        known = set(states)

        def state(tok):
            if tok.text not in known:
                self.fail(tok, f"unknown {b.side} state {tok.text!r}", "a declared state")
            return tok.text

        def symbol(tok):
            sym = _symbol(tok)
            if sym not in symbols:
                self.fail(tok, f"unknown symbol {tok.text!r}", "an input symbol, LEND or REND")
            return sym

        def message(tok):
            msg = _message(tok)
            if msg is not None and msg not in messages:
                self.fail(tok, f"undeclared message {tok.text!r}", "a declared message or NONE")
            return msg

        key, args = b.fields["initial:"]
        self.expect_count(key, args, 1, "one state")
        initial = state(args[0])
        accepting = []
        if "accepting:" in b.fields:
            accepting = [state(t) for t in b.fields["accepting:"][1]]
        default = "none"
        if "send-default:" in b.fields:
            key, args = b.fields["send-default:"]
            self.expect_count(key, args, 1, "echo or none")
            if args[0].text not in ("echo", "none"):
                self.fail(args[0], f"unknown send default {args[0].text!r}", "echo or none")
            default = args[0].text
            self.spans[f"{b.side}.send-default"] = key.span
        tables = {}
        for table_name, entries in (("send", b.send), ("rsend", b.rsend)):
            out = {}
            for (s, x), (m, args) in entries.items():
                state(args[0]), symbol(args[1]), message(args[3])
                out[(s, x)] = m
                self.spans[f"{b.side}.{table_name}[{s} {x}]"] = args[0].span
            tables[table_name] = out
        rules = {}
        for table_name, entries in (("step", b.steps), ("back", b.backs)):
            out = []
            for k, (rule, key, args) in enumerate(entries):
                state(args[0]), symbol(args[1]), message(args[3]), state(args[5])
                out.append(rule)
                self.spans[f"{b.side}.{table_name}[{k}]"] = key.span
            rules[table_name] = tuple(out)
        return ComponentSpec(
            states=tuple(states),
            initial=initial,
            accepting=frozenset(accepting),
            delta=rules["step"],
            send_default=default,
            send=tables["send"],
            reverse_delta=rules["back"] if with_reverse else None,
            rsend=tables["rsend"],
        )


def parse(text: Union[str, bytes]) -> MachineSpec:
    """Parse a ``.pwk`` document; raises :class:`ParseError` on the first problem."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = text[: exc.start].count(b"\n") + 1
            raise ParseError(SourceSpan(line, 1, 1), "input is not valid UTF-8") from None
    if "\x00" in text:
        line = text[: text.index("\x00")].count("\n") + 1
        raise ParseError(SourceSpan(line, 1, 1), "NUL character in input")
    return _Parser(text.replace("\r\n", "\n")).run()


# ---------------------------------------------------------------- serialization

def _tok_symbol(sym) -> str:
    return {LEND: "LEND", REND: "REND"}.get(sym, sym)


def _tok_message(msg) -> str:
    return NONE_TOKEN if msg is None else _tok_symbol(msg)


def _rule_key(rule: Rule):
    return (rule.state, _tok_symbol(rule.symbol), _tok_message(rule.message))


def canonical(spec: MachineSpec) -> MachineSpec:
    """The machine as :func:`parse` would return it after a serialize round-trip."""
    parts = (spec.upper, spec.lower)
    has_rev = any(c.reverse_delta is not None for c in parts) and any(c.reverse_delta or c.rsend for c in parts)

    def comp(c: ComponentSpec) -> ComponentSpec:
        return replace(
            c,
            accepting=frozenset(c.accepting),
            delta=tuple(sorted(c.delta, key=_rule_key)),
            send=dict(c.send),
            reverse_delta=tuple(sorted(c.reverse_delta or (), key=_rule_key)) if has_rev else None,
            rsend=dict(c.rsend) if has_rev else {},
        )

    return replace(spec, input_alphabet=tuple(spec.input_alphabet),
                   message_alphabet=tuple(spec.message_alphabet),
                   upper=comp(spec.upper), lower=comp(spec.lower))


def _component_lines(side: str, c: ComponentSpec, with_reverse: bool):
    order = {s: k for k, s in enumerate(c.states)}
    out = [f"{side}:", "  states: " + " ".join(c.states), f"  initial: {c.initial}"]
    out.append(("  accepting: " + " ".join(sorted(c.accepting, key=order.get))).rstrip())
    out.append(f"  send-default: {c.send_default}")
    sends = sorted(c.send.items(), key=lambda kv: (kv[0][0], _tok_symbol(kv[0][1])))
    out += [f"  send: {s} {_tok_symbol(x)} -> {_tok_message(m)}" for (s, x), m in sends]
    for r in sorted(c.delta, key=_rule_key):
        move = "fwd" if r.move == MOVE else "stay"
        out.append(f"  step: {r.state} {_tok_symbol(r.symbol)} / {_tok_message(r.message)} -> {r.target} {move}")
    if with_reverse:
        rsends = sorted(c.rsend.items(), key=lambda kv: (kv[0][0], _tok_symbol(kv[0][1])))
        out += [f"  rsend: {s} {_tok_symbol(x)} -> {_tok_message(m)}" for (s, x), m in rsends]
        for r in sorted(c.reverse_delta or (), key=_rule_key):
            move = "rev" if r.move == MOVE else "stay"
            out.append(f"  back: {r.state} {_tok_symbol(r.symbol)} / {_tok_message(r.message)} -> {r.target} {move}")
    return out


def serialize(spec: MachineSpec) -> str:
    spec = canonical(spec)
    with_reverse = spec.upper.reverse_delta is not None
    lines = [f"machine {spec.name}",
             ("alphabet: " + " ".join(spec.input_alphabet)).rstrip(),
             ("messages: " + " ".join(_tok_symbol(m) for m in spec.message_alphabet)).rstrip()]
    if spec.acceptance_mode != NORMAL:
        lines.append(f"acceptance: {spec.acceptance_mode}")
    lines += _component_lines("upper", spec.upper, with_reverse)
    lines += _component_lines("lower", spec.lower, with_reverse)
    return "\n".join(lines) + "\n"
