"""Command-line interface: ``pwk <command> ...``.

Exit codes: ``run`` returns 0 accepted, 1 rejected, 2 loop, 3 step limit;
checking commands return 0 on success and 1 on a reported failure; usage
and parse errors return 64.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dsl, zoo
from .model import LEND, REND, AlphabetError, Trace, Verdict, run

EXIT_USAGE = 64
RUN_EXIT = {Verdict.ACCEPTED: 0, Verdict.REJECTED: 1, Verdict.LOOP: 2, Verdict.STEP_LIMIT: 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _name(sym):
    return {LEND: "LEND", REND: "REND"}.get(sym, sym)


def export_trace(trace: Trace, backward: Trace = None) -> dict:
    """JSON-ready document for a forward trace, optionally with its backward replay."""
    from .comm import count_messages

    tape = (LEND,) + tuple(trace.word) + (REND,)
    steps = []
    for k, rec in enumerate(trace.steps):
        p, i, q, j = rec.pre
        steps.append({
            "index": k,
            "upper": {"state": p, "pos": i, "symbol": _name(tape[i]), "sent": _name(rec.sent_upper) if rec.sent_upper else None},
            "lower": {"state": q, "pos": j, "symbol": _name(tape[j]), "sent": _name(rec.sent_lower) if rec.sent_lower else None},
        })
    c = trace.halt_config
    stats = count_messages(trace, backward)
    return {
        "word": trace.word,
        "steps": steps,
        "halt": {"upper": {"state": c.upper_state, "pos": c.upper_pos, "symbol": _name(tape[c.upper_pos])},
                 "lower": {"state": c.lower_state, "pos": c.lower_pos, "symbol": _name(tape[c.lower_pos])}},
        "verdict": trace.verdict.value,
        "comm": {"forward": stats.forward_total, "backward": stats.backward_total if backward else None},
    }


def _load(path):
    try:
        text = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    try:
        return dsl.parse(text)
    except dsl.ParseError as exc:
        raise UsageError(f"{path}: {exc}")


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def cmd_run(args):
    spec = _load(args.machine)
    try:
        trace = run(spec, args.word, step_limit=args.max_steps)
    except AlphabetError as exc:
        raise UsageError(str(exc))
    if args.trace:
        backward = None
        if spec.has_reverse and trace.verdict in (Verdict.ACCEPTED, Verdict.REJECTED):
            from .reverse import replay_backward
            backward, _ = replay_backward(spec, trace.word, trace.halt_config, max_steps=len(trace.steps))
        _write(args.trace, json.dumps(export_trace(trace, backward), indent=2, ensure_ascii=False) + "\n")
    print(trace.verdict.value)
    return RUN_EXIT[trace.verdict]


def cmd_verify_rev(args):
    from .reverse import MissingReverseTables, certify_bounded

    spec = _load(args.machine)
    try:
        report = certify_bounded(spec, args.max_len, args.word or ())
    except MissingReverseTables as exc:
        print(exc, file=sys.stderr)
        return 1
    print(json.dumps(report.as_dict(), indent=2, ensure_ascii=False))
    return 0 if report.certified else 1


def cmd_derive_rev(args):
    from .reverse import derive_reverse

    spec = _load(args.machine)
    result = derive_reverse(spec, args.max_len, args.word or ())
    if not result.ok:
        for c in result.conflicts:
            print(c.describe())
        return 1
    _write(args.output, dsl.serialize(result.spec))
    print(f"derived reverse tables from {result.words_checked} words", file=sys.stderr)
    return 0


def cmd_comm(args):
    from .comm import measure
    from .oracle import enumerate_accepted

    spec = _load(args.machine)
    if args.words:
        lines = Path(args.words).read_text(encoding="utf-8").splitlines()
        words = [w.strip() for w in lines if w.strip()]
    else:
        words = enumerate_accepted(spec, args.enumerate)
    try:
        m = measure(spec, words)
    except AlphabetError as exc:
        raise UsageError(str(exc))
    sys.stdout.write(m.to_csv())
    if m.rejected:
        print(f"{len(m.rejected)} words not accepted and left out", file=sys.stderr)
    return 0


def cmd_classify(args):
    from .comm import classify, read_csv

    try:
        points = read_csv(Path(args.csv).read_text(encoding="utf-8"), args.column)
        result = classify(points)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"{args.csv}: {exc}")
    print(result.kind.value)
    if args.verbose:
        for kind, a, b, r in result.fits:
            print(f"  {kind.value:8s} a={a:.4f} b={b:.4f} residual={r:.4f}", file=sys.stderr)
    return 0


def cmd_equiv(args):
    from .oracle import equiv_bounded

    spec = _load(args.machine)
    try:
        entry = zoo.get(args.oracle)
    except zoo.UnknownMachine:
        raise UsageError(f"unknown oracle {args.oracle!r}; see 'pwk zoo list'")
    res = equiv_bounded(spec, entry.predicate, args.max_len)
    if res.equivalent:
        print(f"pass: {res.words_checked} words up to length {args.max_len}")
        return 0
    ce = res.counterexample
    print(json.dumps({"word": ce.word, "machine": ce.machine_verdict.value, "predicate": ce.predicate}))
    return 1


def cmd_graph(args):
    from .oracle import config_graph

    spec = _load(args.machine)
    _write(args.output, config_graph(spec, args.word).to_dot())
    return 0


def cmd_zoo(args):
    if args.zoo_command == "list":
        for e in zoo.list_entries():
            kind = e.claimed_comm_class.value if e.claimed_comm_class else "-"
            machine = "machine" if e.spec is not None else "predicate"
            print(f"{e.name:14s} {machine:9s} {'reversible' if e.reversible else '-':10s} {kind:8s} {e.provenance}")
        return 0
    try:
        entry = zoo.get(args.name)
    except zoo.UnknownMachine:
        raise UsageError(f"unknown zoo entry {args.name!r}")
    if entry.spec is None:
        print(f"{args.name} is a predicate-only entry with no machine", file=sys.stderr)
        return 1
    _write(args.output, dsl.serialize(entry.spec))
    return 0


def cmd_hierarchy(args):
    """Measure each zoo machine on its member words and compare with the claimed class."""
    from .comm import classify, measure

    ok = True
    for e in zoo.list_entries():
        if e.spec is None or e.claimed_comm_class is None or len(e.member_params) < 3:
            continue
        m = measure(e.spec, e.member_words())
        points = [(n, max(s.forward_total, s.backward_total)) for n, s in m.series]
        found = classify(points).kind
        ok &= found == e.claimed_comm_class
        print(f"{e.name:12s} claimed={e.claimed_comm_class.value:8s} measured={found.value:8s} points={points}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pwk", description="Simulate and check two-party Watson-Crick systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a machine on one word")
    r.add_argument("machine")
    r.add_argument("word")
    r.add_argument("--trace", metavar="OUT.json", help="write a JSON trace document ('-' for stdout)")
    r.add_argument("--max-steps", type=int, default=None, help="step limit (default: loop-detection bound)")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify-rev", help="certify reversibility on all words up to a length")
    v.add_argument("machine")
    v.add_argument("--max-len", type=int, required=True)
    v.add_argument("--word", action="append", help="additional word to check (repeatable)")
    v.set_defaults(func=cmd_verify_rev)

    d = sub.add_parser("derive-rev", help="derive reverse tables from forward runs")
    d.add_argument("machine")
    d.add_argument("-o", "--output", required=True)
    d.add_argument("--max-len", type=int, default=8)
    d.add_argument("--word", action="append", help="additional word to run (repeatable)")
    d.set_defaults(func=cmd_derive_rev)

    c = sub.add_parser("comm", help="message counts of accepted words as CSV")
    c.add_argument("machine")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--words", metavar="FILE", help="one word per line")
    src.add_argument("--enumerate", type=int, metavar="L", help="all accepted words up to length L")
    c.set_defaults(func=cmd_comm)

    k = sub.add_parser("classify", help="growth class of a comm CSV")
    k.add_argument("csv")
    k.add_argument("--column", choices=("forward", "backward", "max"), default="max")
    k.add_argument("-v", "--verbose", action="store_true")
    k.set_defaults(func=cmd_classify)

    e = sub.add_parser("equiv", help="bounded comparison against a zoo predicate")
    e.add_argument("machine")
    e.add_argument("--oracle", required=True, metavar="ZOO_NAME")
    e.add_argument("--max-len", type=int, required=True)
    e.set_defaults(func=cmd_equiv)

    g = sub.add_parser("graph", help="configuration graph of one word in DOT format")
    g.add_argument("machine")
    g.add_argument("word")
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=cmd_graph)

    z = sub.add_parser("zoo", help="catalog of built-in machines")
    zs = z.add_subparsers(dest="zoo_command", required=True, parser_class=_Parser)
    zs.add_parser("list")
    ze = zs.add_parser("export")
    ze.add_argument("name")
    ze.add_argument("-o", "--output", default="-")
    z.set_defaults(func=cmd_zoo)

    h = sub.add_parser("hierarchy", help="measured vs claimed communication class of zoo machines")
    h.set_defaults(func=cmd_hierarchy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pwk: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
