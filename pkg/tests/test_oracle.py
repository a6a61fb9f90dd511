import re

import pytest

from conftest import component, machine
from pwk import zoo
from pwk.model import accepts
from pwk.oracle import config_graph, enumerate_accepted, equiv_bounded, full_config_graph


@pytest.fixture(scope="module")
def an_bn():
    return zoo.get("an_bn").spec


def test_enumerate_accepted(an_bn):
    assert enumerate_accepted(an_bn, 8) == ["ab", "aabb", "aaabbb", "aaaabbbb"]


def test_enumerate_accepted_matches_stepper():
    spec = zoo.get("l_lin").spec
    from pwk.model import words_upto
    assert enumerate_accepted(spec, 7) == [w for w in words_upto(spec.input_alphabet, 7) if accepts(spec, w)]


def test_empty_tables_accept_nothing():
    m = machine("empty", component("s", "s", []), component("t", "t", []), alphabet=("a",))
    assert enumerate_accepted(m, 3) == []


def test_equiv_pass_count(an_bn):
    r = equiv_bounded(an_bn, zoo.is_an_bn, 10)
    assert r.equivalent and r.words_checked == 2047


def test_equiv_counterexample(an_bn):
    r = equiv_bounded(an_bn, lambda w: re.fullmatch("a*b*", w) is not None, 4)
    ce = r.counterexample
    # the empty word is in a*b* and is the first word enumerated
    assert (ce.word, ce.machine_verdict.value, ce.predicate) == ("", "rejected", True)
    r = equiv_bounded(an_bn, lambda w: re.fullmatch("a+b*", w) is not None, 4)
    assert r.counterexample.word == "a"


def test_equiv_self(an_bn):
    spec = zoo.get("w_dollar").spec
    assert equiv_bounded(spec, lambda w: accepts(spec, w), 6).equivalent


def test_equiv_extra_words(an_bn):
    r = equiv_bounded(an_bn, zoo.is_an_bn, 2, ["a" * 20 + "b" * 20, "a" * 20 + "b" * 19])
    assert r.equivalent and r.extra_checked == 2
    r = equiv_bounded(an_bn, lambda w: zoo.is_an_bn(w) and len(w) < 30, 2, ["a" * 20 + "b" * 20])
    assert r.counterexample.word == "a" * 20 + "b" * 20


def test_config_graph_is_a_path(an_bn):
    g = config_graph(an_bn, "aabb")
    assert len(g.nodes) == 8 and len(g.edges) == 7
    assert max(g.in_degree().values()) == 1
    assert max(g.out_degree().values()) == 1
    assert g.merge_nodes() == []


def test_merge_node(merge_machine):
    g = config_graph(merge_machine, "ab")
    assert [n.node_id() for n in g.merge_nodes()] == ["r,0|t,3"]


def test_full_graph_sees_unreachable_merges(ambiguous_machine):
    assert config_graph(ambiguous_machine, "a").merge_nodes() == []
    assert [n.node_id() for n in full_config_graph(ambiguous_machine, "a").merge_nodes()] == ["r,1|t,2"]


def test_dot_export(an_bn):
    dot = config_graph(an_bn, "ab").to_dot()
    assert dot.startswith("digraph configs {")
    assert '"p0,0|q0,3" -> "p1,0|q1,2";' in dot
    assert dot.rstrip().endswith("}")
