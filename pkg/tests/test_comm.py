import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwk import zoo
from pwk.comm import BoundKind, classify, count_messages, measure, read_csv
from pwk.model import run


def test_an_bn_counts():
    spec = zoo.get("an_bn").spec
    m = measure(spec, ["a" * n + "b" * n for n in range(1, 5)])
    assert [f for _, f, _ in m.rows()] == [10, 14, 18, 22]
    # exact inversion with echo broadcasts: same count backwards
    assert [b for _, _, b in m.rows()] == [10, 14, 18, 22]


def test_l_lin_backward_equals_forward():
    e = zoo.get("l_lin")
    m = measure(e.spec, e.member_words())
    assert all(f == b for _, f, b in m.rows())
    assert [f for _, f, _ in m.rows()] == [2 * n + 4 for n, _, _ in m.rows()]


def test_rejected_words_set_aside():
    m = measure(zoo.get("an_bn").spec, ["ab", "ba", ""])
    assert m.rejected == ["ba", ""]
    assert [n for n, _ in m.series] == [2]


def test_count_additivity():
    spec = zoo.get("l_expo").spec
    t = run(spec, zoo.l_expo_member(1))
    s = count_messages(t)
    assert s.forward_upper == sum(r.sent_upper is not None for r in t.steps)
    assert s.forward_lower == sum(r.sent_lower is not None for r in t.steps)
    assert s.forward_total == 5


def test_count_messages_word_mismatch():
    spec = zoo.get("an_bn").spec
    with pytest.raises(ValueError):
        count_messages(run(spec, "ab"), run(spec, "aabb"))


@pytest.mark.parametrize("points,kind", [
    ([(2, 10), (4, 14), (8, 22), (16, 38)], BoundKind.LINEAR),
    ([(10, 4), (100, 4), (1000, 4)], BoundKind.CONSTANT),
    ([(18, 5), (70, 7), (268, 9)], BoundKind.LOGARITHMIC),
    ([(18, 5), (68, 7), (262, 9)], BoundKind.LOGARITHMIC),
    ([(19, 5), (41, 7), (71, 9), (109, 11)], BoundKind.SQUARE_ROOT),
    ([(3, 10), (5, 14), (7, 18), (9, 22), (11, 26)], BoundKind.LINEAR),
    ([(1, 0), (2, 0), (3, 0)], BoundKind.CONSTANT),
    ([(1, 1), (2, 4), (3, 9), (4, 16), (5, 25), (6, 36)], BoundKind.OTHER),
])
def test_classify(points, kind):
    assert classify(points).kind is kind


def test_classify_needs_three_distinct_lengths():
    with pytest.raises(ValueError):
        classify([(1, 2), (1, 3), (2, 4)])


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.01, max_value=1000))
def test_classify_scale_invariant(scale):
    for pts in ([(18, 5), (68, 7), (262, 9)], [(19, 5), (41, 7), (71, 9), (109, 11)], [(3, 10), (5, 14), (7, 18)]):
        scaled = [(n, c * scale) for n, c in pts]
        assert classify(scaled).kind is classify(pts).kind


def test_csv_round_trip():
    m = measure(zoo.get("an_bn").spec, ["ab", "aabb", "aaabbb"])
    text = m.to_csv()
    assert text.splitlines()[0] == "n,forward,backward"
    assert read_csv(text) == [(2, 10), (4, 14), (6, 18)]
    assert read_csv(text, "max") == [(2, 10), (4, 14), (6, 18)]
    with pytest.raises(ValueError):
        read_csv("x,y\n1,2\n")
