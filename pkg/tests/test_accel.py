import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings

from pwk import accel, zoo
from pwk.model import Verdict, run, words_upto
from strategies import machines

BACKENDS = ["numpy", "python"] + (["numba"] if accel.NUMBA_ENABLED else [])
CODE = {Verdict.ACCEPTED: accel.ACCEPTED, Verdict.REJECTED: accel.REJECTED, Verdict.LOOP: accel.LOOP}


def reference(spec, words):
    traces = [run(spec, w) for w in words]
    verdicts = np.array([CODE[t.verdict] for t in traces])
    sent = np.array([sum((s.sent_upper is not None) + (s.sent_lower is not None) for s in t.steps) for t in traces])
    steps = np.array([len(t.steps) for t in traces])
    return verdicts, sent, steps, traces


def check(spec, words, backends=BACKENDS, loops_exact=False):
    verdicts, sent, steps, traces = reference(spec, words)
    for backend in backends:
        r = accel.run_words(spec, words, backend)
        assert np.array_equal(r.verdict, verdicts), backend
        halted = verdicts != accel.LOOP
        assert np.array_equal(r.steps[halted], steps[halted]), backend
        assert np.array_equal((r.sent_upper + r.sent_lower)[halted], sent[halted]), backend
        for k in np.flatnonzero(halted):
            c = traces[k].halt_config
            enc = accel.encode(spec)
            assert enc.spec.upper.states[r.final[k, 0]] == c.upper_state
            assert tuple(r.final[k, [1, 3]]) == (c.upper_pos, c.lower_pos)


@pytest.mark.parametrize("name", zoo.machine_names())
def test_zoo_backends_agree(name):
    spec = zoo.get(name).spec
    words = list(words_upto(spec.input_alphabet, 5 if len(spec.input_alphabet) > 3 else 6))
    words += zoo.get(name).member_words()
    check(spec, words)


def test_loop_detection(looping_machine):
    for backend in BACKENDS:
        r = accel.run_words(looping_machine, ["", "a", "abab"], backend)
        assert (r.verdict == accel.LOOP).all()


@settings(max_examples=150, deadline=None)
@given(machines())
def test_random_machines_agree(spec):
    check(spec, list(words_upto(spec.input_alphabet, 3)))


def test_length_batches_order():
    spec = zoo.get("an_bn").spec
    acc = [w for n, start, r in accel.length_batches(spec, 6)
           for w in [accel.decode_index(accel.encode(spec), n, start + int(k)) for k in np.flatnonzero(r.accepted)]]
    assert acc == ["ab", "aabb", "aaabbb"]


def test_chunking_matches_single_batch():
    enc = accel.encode(zoo.get("l_lin").spec)
    whole = np.concatenate([t for _, t in accel.word_chunks(enc, 6)])
    parts = np.concatenate([t for _, t in accel.word_chunks(enc, 6, chunk=100)])
    assert np.array_equal(whole, parts)
    assert accel.decode_index(enc, 3, 5) == "".join(enc.symbols[2:][d] for d in (0, 1, 2))


def test_env_flag_selects_numpy():
    code = "from pwk import accel; print(accel.NUMBA_ENABLED, accel.DEFAULT_BACKEND)"
    env = dict(os.environ, PWK_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "numpy"]


def test_unknown_backend():
    with pytest.raises(ValueError):
        accel.run_words(zoo.get("an_bn").spec, ["ab"], "fortran")
