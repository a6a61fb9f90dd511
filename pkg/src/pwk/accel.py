"""Batch forward simulation on integer-encoded tables.

Two interchangeable backends compute the same verdicts and message counts:
a per-word loop compiled with numba, and a lockstep numpy version that
advances every word of a batch at once.  Set ``PWK_DISABLE_NUMBA=1`` (or
uninstall numba) to force the numpy path.

Loops are found with Brent's cycle detection, backed by the pigeonhole bound
``|Q1|·|Q2|·(n+2)²`` on the number of distinct configurations.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .model import COMPLEMENTED, LEND, REND, MachineSpec, Verdict

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_ENABLED = numba is not None and os.environ.get("PWK_DISABLE_NUMBA", "").lower() not in ("1", "true", "yes")
DEFAULT_BACKEND = "numba" if NUMBA_ENABLED else "numpy"

ACCEPTED, REJECTED, LOOP = 0, 1, 2
CODE_TO_VERDICT = {ACCEPTED: Verdict.ACCEPTED, REJECTED: Verdict.REJECTED, LOOP: Verdict.LOOP}

CHUNK = 1 << 17


@dataclass(frozen=True)
class Encoded:
    spec: MachineSpec
    symbols: tuple
    sym_index: dict
    messages: tuple
    mu1: np.ndarray  # (Q1, S) message index, 0 = no message
    nx1: np.ndarray  # (Q1, S, M+1) next state, -1 = undefined
    mv1: np.ndarray
    mu2: np.ndarray
    nx2: np.ndarray
    mv2: np.ndarray
    init1: int
    init2: int
    acc1: np.ndarray
    acc2: np.ndarray
    complemented: bool

    @property
    def qq(self) -> int:
        return self.mu1.shape[0] * self.mu2.shape[0]


def _encode_component(comp, symbols, sym_index, msg_index):
    states = {s: k for k, s in enumerate(comp.states)}
    nq, ns, nm = len(states), len(symbols), len(msg_index) + 1
    mu = np.zeros((nq, ns), np.int32)
    for s, k in states.items():
        for x, xi in sym_index.items():
            m = comp.broadcast(s, x)
            mu[k, xi] = 0 if m is None else msg_index[m]
    nx = np.full((nq, ns, nm), -1, np.int32)
    mv = np.zeros((nq, ns, nm), np.int32)
    for r in comp.delta:
        key = (states[r.state], sym_index[r.symbol], 0 if r.message is None else msg_index[r.message])
        if nx[key] < 0:
            nx[key] = states[r.target]
            mv[key] = r.move
    acc = np.array([s in comp.accepting for s in comp.states], np.bool_)
    return mu, nx, mv, states[comp.initial], acc


def encode(spec: MachineSpec) -> Encoded:
    symbols = (LEND, REND) + tuple(spec.input_alphabet)
    sym_index = {x: k for k, x in enumerate(symbols)}
    msg_index = {m: k + 1 for k, m in enumerate(spec.message_alphabet)}
    mu1, nx1, mv1, i1, a1 = _encode_component(spec.upper, symbols, sym_index, msg_index)
    mu2, nx2, mv2, i2, a2 = _encode_component(spec.lower, symbols, sym_index, msg_index)
    return Encoded(spec, symbols, sym_index, tuple(spec.message_alphabet),
                   mu1, nx1, mv1, mu2, nx2, mv2, i1, i2, a1, a2,
                   spec.acceptance_mode == COMPLEMENTED)


def encode_words(enc: Encoded, words: Sequence[str]):
    """Tapes padded to a common width plus the word lengths."""
    lengths = np.array([len(w) for w in words], np.int64)
    width = int(lengths.max()) + 2 if len(words) else 2
    tapes = np.ones((len(words), width), np.int32)  # pad with the right endmarker code
    tapes[:, 0] = 0
    for k, w in enumerate(words):
        tapes[k, 1:len(w) + 1] = [enc.sym_index[x] for x in w]
    return tapes, lengths


def word_chunks(enc: Encoded, n: int, chunk: int = CHUNK) -> Iterator:
    """Tapes of every word of length ``n`` in lexicographic order, in chunks.

    Yields ``(first_index, tapes)``; word index ``k`` encodes the word's
    letters as base-|Σ| digits, most significant first.
    """
    k = len(enc.symbols) - 2
    total = k ** n
    weights = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, max(total, 1), chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        tapes = np.empty((stop - start, n + 2), np.int32)
        tapes[:, 0] = 0
        tapes[:, -1] = 1
        if n:
            tapes[:, 1:-1] = (idx[:, None] // weights[None, :]) % k + 2
        yield start, tapes


def decode_index(enc: Encoded, n: int, index: int) -> str:
    alphabet = enc.symbols[2:]
    k = len(alphabet)
    out = []
    for _ in range(n):
        index, d = divmod(index, k)
        out.append(alphabet[d])
    return "".join(reversed(out))


def _batch_loops(tapes, lengths, mu1, nx1, mv1, mu2, nx2, mv2, init1, init2, acc1, acc2,
                 complemented, qq, verdict, steps, sent1, sent2, final):
    for w in range(tapes.shape[0]):
        n = lengths[w]
        p = init1
        i = 0
        q = init2
        j = n + 1
        tp, ti, tq, tj = p, i, q, j
        power = 1
        lam = 0
        k = 0
        c1 = 0
        c2 = 0
        bound = qq * (n + 2) * (n + 2)
        v = -1
        while v < 0:
            x = tapes[w, i]
            y = tapes[w, j]
            m1 = mu1[p, x]
            m2 = mu2[q, y]
            p1 = nx1[p, x, m2]
            q1 = nx2[q, y, m1]
            if p1 < 0 or q1 < 0:
                hit = acc1[p] or acc2[q]
                v = ACCEPTED if hit != complemented else REJECTED
                break
            i += mv1[p, x, m2]
            j -= mv2[q, y, m1]
            p = p1
            q = q1
            k += 1
            if m1 != 0:
                c1 += 1
            if m2 != 0:
                c2 += 1
            lam += 1
            if (p == tp and i == ti and q == tq and j == tj) or k > bound:
                v = LOOP
                break
            if lam == power:
                tp, ti, tq, tj = p, i, q, j
                power *= 2
                lam = 0
        verdict[w] = v
        steps[w] = k
        sent1[w] = c1
        sent2[w] = c2
        final[w, 0] = p
        final[w, 1] = i
        final[w, 2] = q
        final[w, 3] = j


if NUMBA_ENABLED:
    _batch_loops_jit = numba.njit(cache=True, nogil=True)(_batch_loops)
else:  # pragma: no cover
    _batch_loops_jit = _batch_loops


def _batch_numpy(tapes, lengths, mu1, nx1, mv1, mu2, nx2, mv2, init1, init2, acc1, acc2,
                 complemented, qq, verdict, steps, sent1, sent2, final):
    nw = tapes.shape[0]
    p = np.full(nw, init1, np.int64)
    q = np.full(nw, init2, np.int64)
    i = np.zeros(nw, np.int64)
    j = lengths.astype(np.int64) + 1
    tp, ti, tq, tj = p.copy(), i.copy(), q.copy(), j.copy()
    power = np.ones(nw, np.int64)
    lam = np.zeros(nw, np.int64)
    bound = qq * (lengths.astype(np.int64) + 2) ** 2
    idx = np.arange(nw)
    while idx.size:
        pw, qw = p[idx], q[idx]
        x = tapes[idx, i[idx]]
        y = tapes[idx, j[idx]]
        m1 = mu1[pw, x]
        m2 = mu2[qw, y]
        p1 = nx1[pw, x, m2]
        q1 = nx2[qw, y, m1]
        halt = (p1 < 0) | (q1 < 0)
        h = idx[halt]
        hit = acc1[p[h]] | acc2[q[h]]
        verdict[h] = np.where(hit != complemented, ACCEPTED, REJECTED)
        go = ~halt
        s = idx[go]
        i[s] += mv1[pw[go], x[go], m2[go]]
        j[s] -= mv2[qw[go], y[go], m1[go]]
        p[s] = p1[go]
        q[s] = q1[go]
        steps[s] += 1
        sent1[s] += m1[go] != 0
        sent2[s] += m2[go] != 0
        lam[s] += 1
        loop = ((p[s] == tp[s]) & (i[s] == ti[s]) & (q[s] == tq[s]) & (j[s] == tj[s])) | (steps[s] > bound[s])
        verdict[s[loop]] = LOOP
        s = s[~loop]
        move = s[lam[s] == power[s]]
        tp[move], ti[move], tq[move], tj[move] = p[move], i[move], q[move], j[move]
        power[move] *= 2
        lam[move] = 0
        idx = s
    final[:, 0], final[:, 1], final[:, 2], final[:, 3] = p, i, q, j


@dataclass
class BatchResult:
    verdict: np.ndarray
    steps: np.ndarray
    sent_upper: np.ndarray
    sent_lower: np.ndarray
    final: np.ndarray  # (W, 4): upper state index, upper pos, lower state index, lower pos

    @property
    def accepted(self) -> np.ndarray:
        return self.verdict == ACCEPTED


def run_batch(enc: Encoded, tapes: np.ndarray, lengths: np.ndarray, backend: str = None) -> BatchResult:
    backend = backend or DEFAULT_BACKEND
    nw = tapes.shape[0]
    out = BatchResult(np.full(nw, -1, np.int8), np.zeros(nw, np.int64), np.zeros(nw, np.int64),
                      np.zeros(nw, np.int64), np.zeros((nw, 4), np.int64))
    args = (np.ascontiguousarray(tapes, np.int32), np.asarray(lengths, np.int64),
            enc.mu1, enc.nx1, enc.mv1, enc.mu2, enc.nx2, enc.mv2,
            enc.init1, enc.init2, enc.acc1, enc.acc2, enc.complemented, enc.qq,
            out.verdict, out.steps, out.sent_upper, out.sent_lower, out.final)
    if backend == "numba":
        _batch_loops_jit(*args)
    elif backend == "numpy":
        _batch_numpy(*args)
    elif backend == "python":
        _batch_loops(*args)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return out


def run_words(spec: MachineSpec, words: Sequence[str], backend: str = None) -> BatchResult:
    enc = encode(spec)
    tapes, lengths = encode_words(enc, list(words))
    return run_batch(enc, tapes, lengths, backend)


def accepts_many(spec: MachineSpec, words: Iterable[str], backend: str = None) -> np.ndarray:
    words = list(words)
    if not words:
        return np.zeros(0, np.bool_)
    return run_words(spec, words, backend).accepted


def length_batches(spec: MachineSpec, max_len: int, backend: str = None, enc: Encoded = None) -> Iterator:
    """Yield ``(n, first_index, BatchResult)`` for every word up to ``max_len``."""
    enc = enc or encode(spec)
    for n in range(max_len + 1):
        for start, tapes in word_chunks(enc, n):
            lengths = np.full(tapes.shape[0], n, np.int64)
            yield n, start, run_batch(enc, tapes, lengths, backend)
