from dataclasses import replace

import pytest

from conftest import component, machine
from pwk import zoo
from pwk.combinators import CertificateError, complement, halting_certificate, reverse_language
from pwk.model import LEND, REND, accepts, run
from pwk.oracle import complement_mismatch, reversal_mismatch
from pwk.reverse import certify_bounded


@pytest.mark.parametrize("name", zoo.machine_names())
def test_reversal_law(name):
    spec = zoo.get(name).spec
    assert reversal_mismatch(spec, reverse_language(spec), 8) is None


def test_reversal_swaps_traces():
    spec = zoo.get("an_bn").spec
    rev = reverse_language(spec)
    assert rev.name == "an_bn_reversed"
    assert reverse_language(rev) == spec
    t, tr = run(spec, "aabb"), run(rev, "bbaa")
    n = 4
    mirrored = [(q, n + 1 - j, p, n + 1 - i) for p, i, q, j in t.configurations]
    assert [tuple(c) for c in tr.configurations] == mirrored


def test_reversal_keeps_reversibility():
    rev = reverse_language(zoo.get("w_dollar").spec)
    assert certify_bounded(rev, 5).certified


def test_prefix_reverses_to_suffix():
    spec = reverse_language(zoo.get("prefix_abb").spec)
    for w in ["bb", "abba", "bbaa", "bab", "abb"]:
        assert accepts(spec, w) == zoo.is_suffix_bba(w)


@pytest.mark.parametrize("name", ["an_bn", "l_lin"])
def test_complement_law(name):
    spec = zoo.get(name).spec
    cert = halting_certificate(spec, 8)
    assert cert.all_halt
    neg = complement(spec, cert)
    assert complement_mismatch(spec, neg, 8) is None
    assert complement(neg, cert) == spec


def test_complement_requires_certificate(looping_machine):
    cert = halting_certificate(looping_machine, 3)
    assert not cert.all_halt and cert.looping_word == ""
    with pytest.raises(CertificateError):
        complement(looping_machine, cert)
    with pytest.raises(CertificateError):
        complement(looping_machine, None)
    other = halting_certificate(zoo.get("an_bn").spec, 3)
    with pytest.raises(CertificateError):
        complement(zoo.get("l_lin").spec, other)


def test_looping_word_found_late():
    # loops only on inputs starting with b
    upper = component("s r", "s", [("s", LEND, None, "r", 1), ("r", "b", None, "r", 0)])
    lower = component("t", "t", [("t", REND, None, "t", 0)])
    cert = halting_certificate(machine("b_loop", upper, lower), 4)
    assert cert.looping_word == "b"
