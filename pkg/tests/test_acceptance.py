"""Acceptance criteria 1-10, one test each.

Run ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``);
the terminal summary prints one PASS/FAIL line per criterion.  Criterion 10
measures the wall-clock time of the whole pytest session up to its own run,
which is scheduled last.
"""
import random
import sys
import time
from dataclasses import replace

import conftest
from pwk import zoo
from pwk.combinators import complement, halting_certificate, reverse_language
from pwk.comm import BoundKind, classify, measure
from pwk.dsl import ParseError, parse, serialize
from pwk.model import LEND, REND, Configuration, Rule, Verdict, accepts, run, words_upto
from pwk.oracle import complement_mismatch, config_graph, reversal_mismatch
from pwk.reverse import certify_bounded, derive_reverse, replay_backward

CERTIFIED = ["an_bn", "l_lin", "w_dollar", "l_expo", "prefix_abb"]


def test_criterion_1_table_fidelity():
    spec = zoo.get("an_bn").spec
    t0 = time.perf_counter()
    words = [w for w in words_upto("ab", 14) if w]
    accepted = {w for w in words if accepts(spec, w)}
    elapsed = time.perf_counter() - t0
    assert len(words) == 32766
    assert accepted == {"a" * n + "b" * n for n in range(1, 8)}
    assert elapsed < 10, elapsed


def test_criterion_2_golden_trace():
    t = run(zoo.get("an_bn").spec, "aabb")
    assert t.configurations == [Configuration(*c) for c in [
        ("p0", 0, "q0", 5), ("p1", 0, "q1", 4), ("p2", 1, "q2", 3), ("p2", 2, "q2", 2),
        ("p3", 3, "q3", 1), ("p3", 4, "q3", 0), ("p4", 5, "q4", 0), ("p5", 5, "q5", 0)]]
    assert t.verdict is Verdict.ACCEPTED


def test_criterion_3_reversibility_certification():
    extra = {"l_expo": [zoo.l_expo_member(1), zoo.l_expo_member(2)]}
    assert [len(w) for w in extra["l_expo"]] == [18, 68]
    for name in CERTIFIED:
        spec = zoo.get(name).spec
        report = certify_bounded(spec, 6, extra.get(name, ()))
        assert report.certified, (name, report.witness)
        for w in list(words_upto(spec.input_alphabet, 6)) + extra.get(name, []):
            t = run(spec, w)
            if t.verdict is Verdict.LOOP:
                continue
            back, _ = replay_backward(spec, w, t.halt_config)
            assert back.configurations == t.configurations[::-1], (name, w)


def test_criterion_4_derivation_consistency():
    spec = zoo.get("an_bn").spec
    fwd = replace(spec, upper=replace(spec.upper, reverse_delta=None), lower=replace(spec.lower, reverse_delta=None))
    result = derive_reverse(fwd, max_len=8)
    assert result.ok, [c.describe() for c in result.conflicts]
    assert certify_bounded(result.spec, 6).certified
    tabulated = [Rule(*r) for r in zoo.AN_BN_UPPER_BACKWARD_TABULATED] + [Rule(*r) for r in zoo.AN_BN_LOWER_BACKWARD]
    derived = set(result.spec.upper.reverse_delta) | set(result.spec.lower.reverse_delta)
    assert len(tabulated) == 14 and len(derived) == 14
    matching = [r for r in tabulated if r in derived]
    assert len(matching) == 13
    (odd,) = [r for r in tabulated if r not in derived]
    assert (odd.state, odd.symbol, odd.message) == ("p4", "b", REND)
    assert odd._replace(message=LEND) in derived


def test_criterion_5_communication_budget():
    spec = zoo.get("l_expo").spec
    for m in (1, 2, 3):
        w = zoo.l_expo_member(m)
        assert len(w) == 2 ** (2 * m + 2) + 2 * m
        (n, stats), = measure(spec, [w]).series
        assert stats.forward_total <= 2 * m + 3, (m, stats)
        assert stats.backward_total <= 2 * m + 3, (m, stats)


def _series(name, params):
    e = zoo.get(name)
    m = measure(e.spec, [e.members(p) for p in params])
    assert not m.rejected
    return m


def test_criterion_6_hierarchy():
    cases = [
        ("prefix_abb", (0, 1, 2, 3), BoundKind.CONSTANT),
        ("l_expo", (1, 2, 3), BoundKind.LOGARITHMIC),
        ("l_poly_hat", (1, 2, 3, 4), BoundKind.SQUARE_ROOT),
        ("l_lin", (1, 2, 3, 4, 5), BoundKind.LINEAR),
    ]
    for name, params, kind in cases:
        m = _series(name, params)
        if name == "l_lin":
            assert [n for n, _, _ in m.rows()] == [3, 5, 7, 9, 11]
        # forward counts: the budget series the classes are defined on
        points = [(n, f) for n, f, _ in m.rows()]
        assert classify(points).kind is kind, (name, points)


def test_criterion_7_closure_combinators():
    for name in zoo.machine_names():
        spec = zoo.get(name).spec
        assert reversal_mismatch(spec, reverse_language(spec), 10) is None, name
    for name in ("an_bn", "l_lin"):
        spec = zoo.get(name).spec
        cert = halting_certificate(spec, 10)
        assert cert.all_halt
        assert complement_mismatch(spec, complement(spec, cert), 10) is None, name


def test_criterion_8_in_degree(merge_machine):
    for name in zoo.machine_names():
        spec = zoo.get(name).spec
        for w in words_upto(spec.input_alphabet, 6):
            g = config_graph(spec, w)
            assert max(g.in_degree().values()) <= 1, (name, w, g.merge_nodes())
    g = config_graph(merge_machine, "ab")
    assert max(g.in_degree().values()) == 2


def test_criterion_9_dsl_round_trip():
    texts = [serialize(e.spec) for e in zoo.list_entries() if e.spec is not None]
    for text in texts:
        spec = parse(text)
        assert serialize(spec) == text
        assert serialize(parse(serialize(spec))) == serialize(spec)
    rng = random.Random(9)
    crashes = 0
    for k in range(10_000):
        if k % 2:
            data = bytes(rng.randrange(256) for _ in range(rng.randrange(100)))
        else:
            chars = list(rng.choice(texts))
            for _ in range(rng.randrange(1, 6)):
                chars.insert(rng.randrange(len(chars) + 1), rng.choice(" \n:/->#aLENDNONE\x00"))
                del chars[rng.randrange(len(chars))]
            data = "".join(chars)
        try:
            parse(data)
        except ParseError:
            pass
        except Exception:  # noqa: BLE001 - any other exception is a crash
            crashes += 1
    assert crashes == 0


def test_criterion_10_suite_runtime():
    elapsed = time.perf_counter() - conftest.SESSION_START
    print(f"session time so far: {elapsed:.1f} s")
    assert elapsed <= 300


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-v"]))
