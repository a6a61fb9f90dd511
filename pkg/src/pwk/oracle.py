"""Independent checks: bounded language equivalence and configuration graphs."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .model import Configuration, MachineSpec, Verdict, forward_step, initial_configuration, make_tape, run


def enumerate_accepted(spec: MachineSpec, max_len: int, alphabet=None, backend: str = None) -> list:
    """Accepted words up to ``max_len`` in length-then-lexicographic order."""
    from .accel import decode_index, encode, length_batches

    if alphabet is not None and tuple(alphabet) != tuple(spec.input_alphabet):
        from dataclasses import replace
        spec = replace(spec, input_alphabet=tuple(alphabet))
    enc = encode(spec)
    out = []
    for n, start, res in length_batches(spec, max_len, backend=backend, enc=enc):
        out.extend(decode_index(enc, n, start + int(k)) for k in np.flatnonzero(res.accepted))
    return out


@dataclass(frozen=True)
class Counterexample:
    word: str
    machine_verdict: Verdict
    predicate: bool


@dataclass
class EquivalenceResult:
    machine: str
    max_len: int
    words_checked: int = 0
    extra_checked: int = 0
    counterexample: Optional[Counterexample] = None

    @property
    def equivalent(self) -> bool:
        return self.counterexample is None


def equiv_bounded(spec: MachineSpec, predicate: Callable[[str], bool], max_len: int,
                  words: Iterable[str] = (), backend: str = None) -> EquivalenceResult:
    """Compare acceptance with ``predicate`` on all words up to ``max_len`` plus ``words``.

    Exhaustive words run through the batch kernels; verdicts come from the
    reference stepper for any reported counterexample.
    """
    from itertools import product

    from .accel import encode, length_batches, run_words

    res = EquivalenceResult(spec.name, max_len)
    enc = encode(spec)
    extra = list(words)
    letters, current = None, -1
    for n, _, batch in length_batches(spec, max_len, backend=backend, enc=enc):
        if n != current:  # batches of one length arrive in word order
            letters, current = product(spec.input_alphabet, repeat=n), n
        for k, ok in enumerate(batch.accepted.tolist()):
            w = "".join(next(letters))
            if ok != predicate(w):
                res.counterexample = Counterexample(w, run(spec, w).verdict, predicate(w))
                res.words_checked += k + 1
                return res
        res.words_checked += batch.verdict.size
    if extra:
        acc = run_words(spec, extra, backend).accepted
        for k, w in enumerate(extra):
            res.extra_checked += 1
            if bool(acc[k]) != predicate(w):
                res.counterexample = Counterexample(w, run(spec, w).verdict, predicate(w))
                return res
    return res


@dataclass
class ConfigGraph:
    """Configurations reachable from the initial one, with forward-step edges."""

    word: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def in_degree(self) -> dict:
        deg = {n: 0 for n in self.nodes}
        for _, b in self.edges:
            deg[b] += 1
        return deg

    def out_degree(self) -> dict:
        deg = {n: 0 for n in self.nodes}
        for a, _ in self.edges:
            deg[a] += 1
        return deg

    def merge_nodes(self) -> list:
        """Configurations with two or more distinct predecessors."""
        return [n for n, d in self.in_degree().items() if d >= 2]

    def to_dot(self) -> str:
        lines = ["digraph configs {"]
        merges = set(self.merge_nodes())
        for n in self.nodes:
            style = ', style=filled, fillcolor="#f4cccc"' if n in merges else ""
            lines.append(f'  "{n.node_id()}"[label="{n.node_id()}"{style}];')
        for a, b in self.edges:
            lines.append(f'  "{a.node_id()}" -> "{b.node_id()}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def config_graph(spec: MachineSpec, word: str, starts: Iterable = ()) -> ConfigGraph:
    """Forward configuration graph of ``word`` explored from the initial configuration.

    ``starts`` adds further source configurations, e.g. unreachable ones whose
    successors may merge into the reachable run.
    """
    tape = make_tape(spec, word)
    g = ConfigGraph(word)
    seen = {}
    todo = [initial_configuration(spec, word), *starts]
    edges = set()
    while todo:
        c = todo.pop()
        if c in seen:
            continue
        seen[c] = len(seen)
        rec = forward_step(spec, word, c, tape)
        if rec is not None:
            edges.add((c, rec.post))
            todo.append(rec.post)
    g.nodes = sorted(seen, key=seen.get)
    g.edges = sorted(edges, key=lambda e: (seen[e[0]], seen[e[1]]))
    return g


def all_configurations(spec: MachineSpec, word: str):
    n = len(word)
    for p in spec.upper.states:
        for i in range(n + 2):
            for q in spec.lower.states:
                for j in range(n + 2):
                    yield Configuration(p, i, q, j)


def full_config_graph(spec: MachineSpec, word: str) -> ConfigGraph:
    """Forward graph over every configuration of ``word``, reachable or not."""
    return config_graph(spec, word, all_configurations(spec, word))


def reversal_mismatch(spec: MachineSpec, reversed_spec: MachineSpec, max_len: int, backend: str = None):
    """First word w (up to ``max_len``) with accepts(reversed_spec, w) != accepts(spec, w^R)."""
    from .accel import decode_index, encode, run_batch, word_chunks

    enc, renc = encode(spec), encode(reversed_spec)
    if enc.symbols != renc.symbols:
        raise ValueError("machines have different input alphabets")
    for n in range(max_len + 1):
        for start, tapes in word_chunks(enc, n):
            lengths = np.full(tapes.shape[0], n, np.int64)
            flipped = tapes.copy()
            flipped[:, 1:n + 1] = tapes[:, n:0:-1]
            a = run_batch(renc, tapes, lengths, backend).accepted
            b = run_batch(enc, flipped, lengths, backend).accepted
            bad = np.flatnonzero(a != b)
            if bad.size:
                return decode_index(enc, n, start + int(bad[0]))
    return None


def complement_mismatch(spec: MachineSpec, complemented: MachineSpec, max_len: int, backend: str = None):
    """First word up to ``max_len`` accepted by both or by neither machine."""
    from .accel import decode_index, encode, run_batch, word_chunks

    enc, cenc = encode(spec), encode(complemented)
    for n in range(max_len + 1):
        for start, tapes in word_chunks(enc, n):
            lengths = np.full(tapes.shape[0], n, np.int64)
            a = run_batch(enc, tapes, lengths, backend).accepted
            b = run_batch(cenc, tapes, lengths, backend).accepted
            bad = np.flatnonzero(a == b)
            if bad.size:
                return decode_index(enc, n, start + int(bad[0]))
    return None
