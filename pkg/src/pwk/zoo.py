"""Catalog of concrete machines and reference membership predicates.

``an_bn`` and ``prefix_abb`` carry hand-written forward and reverse tables.
The other machines are block-matching constructions whose reverse tables are
derived mechanically with :func:`pwk.reverse.derive_reverse`; every machine is
checked against its predicate by the test suite.

Notes on the constructions:

``l_expo`` / ``l_expo_hat``
    Phase one: the upper component crosses its a-blocks at half speed (two
    steps per square), the lower one at full speed, so the upper block of
    length ``k`` is matched against a lower block of length ``2k``.  The lower
    component announces every separator and the centre ``c``; the upper
    component halts unless it is on the matching separator at that moment.
    Phase two: the lower component waits on ``c`` while the upper crosses the
    block right of ``c``; the upper announces the next separator, then the
    roles of the speeds repeat towards the ends.  The upper component
    announces the right endmarker, after which the lower one checks the
    single leading ``a``.  Messages are sent only on separators, ``c`` and
    ``◁``: ``2m+3`` in forward direction.
``l_poly_hat``
    Same skeleton with both components at full speed; the upper one waits two
    steps at ``▷`` and after every separator, matching blocks whose lengths
    differ by two.
``w_dollar``
    The upper component waits on ``▷`` while the lower one crosses the
    a-block; on the second ``$`` both compare ``w`` with ``w^R`` symbol by
    symbol; the lower waits on the first ``$`` while the upper skips to the
    second one; finally both run to the endmarkers, which they must reach
    together.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

from .comm import BoundKind
from .model import LEND, MOVE, REND, STAY, ComponentSpec, MachineSpec, Rule

FWD, ST = MOVE, STAY
BITS = ("0", "1")


class UnknownMachine(KeyError):
    pass


@dataclass(frozen=True)
class ZooEntry:
    name: str
    spec: Optional[MachineSpec]
    predicate: Callable[[str], bool]
    claimed_comm_class: Optional[BoundKind]
    reversible: bool
    provenance: str
    note: str = ""
    equiv_max_len: int = 0
    certify_max_len: int = 0
    members: Optional[Callable[[int], str]] = None  # parameter -> member word
    member_params: tuple = ()
    alphabet: tuple = ()

    def member_words(self):
        return [self.members(m) for m in self.member_params] if self.members else []

    @property
    def certify_words(self) -> tuple:
        """Longer words certified in addition to all words up to certify_max_len."""
        return tuple(w for w in self.member_words() if len(w) > self.certify_max_len)


def _component(states, initial, accepting, steps, send=(), rsend=(), send_default="none", back=None):
    return ComponentSpec(
        states=tuple(states.split()),
        initial=initial,
        accepting=frozenset(accepting.split()),
        delta=tuple(Rule(*r) for r in steps),
        send_default=send_default,
        send={(s, x): m for s, x, m in send},
        reverse_delta=None if back is None else tuple(Rule(*r) for r in back),
        rsend={(s, x): m for s, x, m in rsend},
    )


# ---------------------------------------------------------------- a^n b^n

AN_BN_UPPER_FORWARD = (
    ("p0", LEND, REND, "p1", ST),
    ("p1", LEND, "b", "p2", FWD),
    ("p2", "a", "b", "p2", FWD),
    ("p2", "a", "a", "p3", FWD),
    ("p3", "b", "a", "p3", FWD),
    ("p3", "b", LEND, "p4", FWD),
    ("p4", REND, LEND, "p5", ST),
)
AN_BN_LOWER_FORWARD = (
    ("q0", REND, LEND, "q1", FWD),
    ("q1", "b", LEND, "q2", FWD),
    ("q2", "b", "a", "q2", FWD),
    ("q2", "a", "a", "q3", FWD),
    ("q3", "a", "b", "q3", FWD),
    ("q3", LEND, "b", "q4", ST),
    ("q4", LEND, REND, "q5", ST),
)
# Backward tables as originally tabulated.  The p4/b row carries REND as message.
AN_BN_UPPER_BACKWARD_TABULATED = (
    ("p1", LEND, REND, "p0", ST),
    ("p2", LEND, "b", "p1", MOVE),
    ("p2", "a", "b", "p2", MOVE),
    ("p3", "a", "a", "p2", MOVE),
    ("p3", "b", "a", "p3", MOVE),
    ("p4", "b", REND, "p3", MOVE),
    ("p5", REND, LEND, "p4", ST),
)
AN_BN_LOWER_BACKWARD = (
    ("q1", REND, LEND, "q0", MOVE),
    ("q2", "b", LEND, "q1", MOVE),
    ("q2", "b", "a", "q2", MOVE),
    ("q3", "a", "a", "q2", MOVE),
    ("q3", "a", "b", "q3", MOVE),
    ("q4", LEND, "b", "q3", ST),
    ("q5", LEND, REND, "q4", ST),
)
# At the inverted step the lower head sits on ▷ and echoes it.
AN_BN_UPPER_BACKWARD = tuple(
    (s, x, LEND, t, d) if (s, x) == ("p4", "b") else (s, x, m, t, d)
    for s, x, m, t, d in AN_BN_UPPER_BACKWARD_TABULATED
)


def build_an_bn(upper_back=AN_BN_UPPER_BACKWARD) -> MachineSpec:
    return MachineSpec(
        name="an_bn",
        input_alphabet=("a", "b"),
        message_alphabet=("a", "b", LEND, REND),
        upper=_component("p0 p1 p2 p3 p4 p5", "p0", "p5", AN_BN_UPPER_FORWARD,
                         send_default="echo", back=upper_back),
        lower=_component("q0 q1 q2 q3 q4 q5", "q0", "", AN_BN_LOWER_FORWARD,
                         send_default="echo", back=AN_BN_LOWER_BACKWARD),
    )


def is_an_bn(w: str) -> bool:
    n = len(w) // 2
    return n >= 1 and w == "a" * n + "b" * n


# ---------------------------------------------------------------- w $ w^R $ a^|w|

def build_w_dollar() -> MachineSpec:
    ab = ("a", "b")
    upper = _component(
        "wait cmp skip len done", "wait", "done",
        [("wait", LEND, None, "wait", ST), ("wait", LEND, "$", "cmp", FWD)]
        + [("cmp", x, x, "cmp", FWD) for x in ab]
        + [("cmp", "$", "$", "skip", FWD)]
        + [("skip", x, None, "skip", FWD) for x in ab]
        + [("skip", "$", None, "len", FWD), ("len", "a", None, "len", FWD), ("len", REND, LEND, "done", ST)],
        send=[("cmp", x, x) for x in ("a", "b", "$")] + [("skip", "$", "$")],
    )
    lower = _component(
        "start block cmp hold len done", "start", "",
        [("start", REND, None, "block", FWD), ("block", "a", None, "block", FWD),
         ("block", "$", None, "cmp", FWD)]
        + [("cmp", x, x, "cmp", FWD) for x in ab]
        + [("cmp", "$", "$", "hold", ST), ("hold", "$", None, "hold", ST), ("hold", "$", "$", "len", FWD)]
        + [("len", x, None, "len", FWD) for x in ab]
        + [("len", LEND, None, "done", ST)],
        send=[("block", "$", "$")] + [("cmp", x, x) for x in ("a", "b", "$")] + [("len", LEND, LEND)],
    )
    return MachineSpec("w_dollar", ("a", "b", "$"), ("a", "b", "$", LEND), upper, lower)


def is_w_dollar(w: str) -> bool:
    parts = w.split("$")
    if len(parts) != 3:
        return False
    left, mid, tail = parts
    return set(left) <= {"a", "b"} and mid == left[::-1] and tail == "a" * len(left)


# ---------------------------------------------------------------- L1 = a^m bb {a,b}*, L2 = L1^R

def build_prefix_abb() -> MachineSpec:
    upper = _component(
        "s0 s1 s2 s3", "s0", "s3",
        [("s0", LEND, None, "s1", FWD), ("s1", "a", None, "s1", FWD),
         ("s1", "b", None, "s2", FWD), ("s2", "b", None, "s3", FWD)],
        back=[("s1", LEND, None, "s0", MOVE), ("s1", "a", None, "s1", MOVE),
              ("s2", "b", None, "s1", MOVE), ("s3", "b", None, "s2", MOVE)],
    )
    lower = _component("t0", "t0", "", [("t0", REND, None, "t0", ST)],
                       back=[("t0", REND, None, "t0", ST)])
    return MachineSpec("prefix_abb", ("a", "b"), (), upper, lower)


_PREFIX_ABB = re.compile(r"a*bb[ab]*")
_SUFFIX_BBA = re.compile(r"[ab]*bba*")


def is_prefix_abb(w: str) -> bool:
    return _PREFIX_ABB.fullmatch(w) is not None


def is_suffix_bba(w: str) -> bool:
    return _SUFFIX_BBA.fullmatch(w) is not None


# ---------------------------------------------------------------- w c w^R

def build_l_lin() -> MachineSpec:
    upper = _component(
        "start cmp wait", "start", "",
        [("start", LEND, REND, "cmp", FWD)]
        + [("cmp", x, x, "cmp", FWD) for x in BITS]
        + [("cmp", "c", "c", "wait", ST)]
        + [("wait", "c", m, "wait", ST) for m in BITS + (LEND,)],
        send_default="echo",
    )
    lower = _component(
        "start cmp rest acc", "start", "acc",
        [("start", REND, LEND, "cmp", FWD)]
        + [("cmp", x, x, "cmp", FWD) for x in BITS]
        + [("cmp", "c", "c", "rest", FWD)]
        + [("rest", x, "c", "rest", FWD) for x in BITS]
        + [("rest", LEND, "c", "acc", ST)],
        send_default="echo",
    )
    return MachineSpec("l_lin", ("0", "1", "c"), ("0", "1", "c", LEND, REND), upper, lower)


def is_l_lin(w: str) -> bool:
    if w.count("c") != 1:
        return False
    left, right = w.split("c")
    return set(left) <= set(BITS) and right == left[::-1]


# ---------------------------------------------------------------- L_expo and its bit-separated variant

def l_expo_member(m: int) -> str:
    upper = "b".join("a" * 2 ** (2 * k) for k in range(m + 1))
    lower = "b".join("a" * 2 ** (2 * k + 1) for k in range(m, -1, -1))
    return upper + "c" + lower


def l_expo_hat_member(m: int, bits: str = None) -> str:
    bits = bits if bits is not None else ("01" * m)[:m]
    left = "a"
    for k in range(1, m + 1):
        left += bits[k - 1] + "a" * 4 ** k
    right = "a" * 2 ** (2 * m + 1)
    for k in range(m, 0, -1):
        right += bits[k - 1] + "a" * 2 ** (2 * k - 1)
    return left + "c" + right


def l_poly_hat_member(m: int, bits: str = None) -> str:
    bits = bits if bits is not None else ("10" * m)[:m]
    left = "a"
    for k in range(1, m + 1):
        left += bits[k - 1] + "a" * (4 * k + 1)
    right = "a" * (4 * m + 3)
    for k in range(m, 0, -1):
        right += bits[k - 1] + "a" * (4 * k - 1)
    return left + "c" + right


def _split_blocks(part: str, seps: str):
    """Block lengths and separators of ``a^k0 s1 a^k1 ...``; None if malformed."""
    pieces = re.split(f"([{seps}])", part)
    blocks, separators = pieces[0::2], pieces[1::2]
    if any(set(b) - {"a"} for b in blocks):
        return None
    return [len(b) for b in blocks], separators


def _blocked(w: str, seps: str, upper_len, lower_len, min_m: int):
    if w.count("c") != 1:
        return False
    left, right = w.split("c")
    lp, rp = _split_blocks(left, seps), _split_blocks(right, seps)
    if lp is None or rp is None:
        return False
    (lb, ls), (rb, rs) = lp, rp
    m = len(ls)
    if m < min_m or len(rs) != m:
        return False
    if lb != [upper_len(k) for k in range(m + 1)] or rb != [lower_len(k) for k in range(m, -1, -1)]:
        return False
    return ls == rs[::-1]


def is_l_expo(w: str) -> bool:
    return _blocked(w, "b", lambda k: 4 ** k, lambda k: 2 * 4 ** k, 1)


def is_l_expo_hat(w: str) -> bool:
    return _blocked(w, "01", lambda k: 4 ** k, lambda k: 2 * 4 ** k, 1)


def is_l_poly_hat(w: str) -> bool:
    return _blocked(w, "01", lambda k: 4 * k + 1, lambda k: 4 * k + 3, 0)


def _expo_like(name, alphabet, seps):
    """Doubling-block machine; separators are ``seps`` (a tuple of symbols)."""
    sync1 = [("h0", x, x, "h0", FWD) for x in seps]
    upper = _component(
        "u0 h0 h1 p2 k0 k1 e", "u0", "",
        [("u0", LEND, None, "h0", FWD), ("h0", "a", None, "h1", ST), ("h1", "a", None, "h0", FWD)]
        + sync1
        + [("h0", "c", "c", "p2", FWD), ("p2", "a", None, "p2", FWD)]
        + [("p2", x, None, "k0", FWD) for x in seps]
        + [("k0", "a", None, "k1", ST), ("k1", "a", None, "k0", FWD)]
        + [("k0", x, y, "k0", FWD) for x in seps for y in seps]
        + [("k0", REND, y, "e", ST) for y in seps]
        + [("e", REND, None, "e", ST)],
        send=[("p2", x, x) for x in seps] + [("k0", REND, REND)],
        rsend=[("p2", "c", "c")],
    )
    lower = _component(
        "l0 f w f2 g1 g2 acc", "l0", "acc",
        [("l0", REND, None, "f", FWD), ("f", "a", None, "f", FWD)]
        + [("f", x, None, "f", FWD) for x in seps]
        + [("f", "c", None, "w", ST), ("w", "c", None, "w", ST)]
        + [("w", "c", x, "f2", FWD) for x in seps]
        + [("f2", "a", None, "f2", FWD)]
        + [("f2", x, None, "f2", FWD) for x in seps]
        + [("f2", x, REND, "g1", FWD) for x in seps]
        + [("g1", "a", None, "g2", FWD), ("g2", LEND, None, "acc", ST)],
        send=[("f", x, x) for x in seps] + [("f", "c", "c")] + [("f2", x, x) for x in seps],
        rsend=[("g1", x, x) for x in seps],
    )
    messages = tuple(seps) + ("c", REND)
    return MachineSpec(name, alphabet, messages, upper, lower)


def build_l_expo_forward() -> MachineSpec:
    return _expo_like("l_expo", ("a", "b", "c"), ("b",))


def build_l_expo_hat_forward() -> MachineSpec:
    return _expo_like("l_expo_hat", ("a", "0", "1", "c"), BITS)


def build_l_poly_hat_forward() -> MachineSpec:
    upper = _component(
        "i0 i1 i2 u d1 d2 p2 t1 t2 k e", "i0", "",
        [("i0", LEND, None, "i1", ST), ("i1", LEND, None, "i2", ST), ("i2", LEND, None, "u", FWD),
         ("u", "a", None, "u", FWD)]
        + [("u", x, x, "d1", ST) for x in BITS]
        + [("d1", x, None, "d2", ST) for x in BITS]
        + [("d2", x, None, "u", FWD) for x in BITS]
        + [("u", "c", "c", "p2", FWD), ("p2", "a", None, "p2", FWD)]
        + [("p2", x, None, "t1", ST) for x in BITS]
        + [("p2", REND, None, "e", ST)]
        + [("t1", x, None, "t2", ST) for x in BITS]
        + [("t2", x, None, "k", FWD) for x in BITS]
        + [("k", "a", None, "k", FWD)]
        + [("k", x, y, "t1", ST) for x in BITS for y in BITS]
        + [("k", REND, y, "e", ST) for y in BITS]
        + [("e", REND, None, "e", ST)],
        send=[("p2", x, x) for x in BITS] + [("p2", REND, REND), ("k", REND, REND)],
        rsend=[("p2", "c", "c")],
    )
    lower = _component(
        "l0 f w f2 g1 g2 acc", "l0", "acc",
        [("l0", REND, None, "f", FWD), ("f", "a", None, "f", FWD)]
        + [("f", x, None, "f", FWD) for x in BITS]
        + [("f", "c", None, "w", ST), ("w", "c", None, "w", ST)]
        + [("w", "c", x, "f2", FWD) for x in BITS]
        + [("w", "c", REND, "g1", FWD)]
        + [("f2", "a", None, "f2", FWD)]
        + [("f2", x, None, "f2", FWD) for x in BITS]
        + [("f2", x, REND, "g1", FWD) for x in BITS]
        + [("g1", "a", None, "g2", FWD), ("g2", LEND, None, "acc", ST)],
        send=[("f", x, x) for x in BITS] + [("f", "c", "c")] + [("f2", x, x) for x in BITS],
        rsend=[("g1", x, x) for x in BITS] + [("g1", "c", "c")],
    )
    return MachineSpec("l_poly_hat", ("a", "0", "1", "c"), BITS + ("c", REND), upper, lower)


# ---------------------------------------------------------------- witnesses with no machine

_L_EMPTY = re.compile(r"a*bb+a*")


def is_l_empty_I(w: str) -> bool:
    """a^m1 b b^m3 b a^m2 with I empty."""
    return _L_EMPTY.fullmatch(w) is not None


def _in_default_I(v: str) -> bool:
    return len(v) >= 2 and v[0] == "b" and v[-1] == "b" and set(v) <= {"a", "b"}


def l_I(w: str, in_I: Callable[[str], bool] = _in_default_I) -> bool:
    """a^m1 b v b a^m2 with v in b* or v in I (I closed under reversal)."""
    lead = len(w) - len(w.lstrip("a"))
    trail = len(w) - len(w.rstrip("a"))
    for m1 in range(lead + 1):
        for m2 in range(trail + 1):
            core = w[m1:len(w) - m2]
            if len(core) < 2 or core[0] != "b" or core[-1] != "b":
                continue
            v = core[1:-1]
            if set(v) <= {"b"} or in_I(v):
                return True
    return False


# ---------------------------------------------------------------- catalog

def _neighbours(word: str, alphabet) -> list:
    """Every word at edit distance one from ``word``."""
    out = set()
    for k in range(len(word)):
        out.add(word[:k] + word[k + 1:])
        for x in alphabet:
            out.add(word[:k] + x + word[k + 1:])
    for k in range(len(word) + 1):
        for x in alphabet:
            out.add(word[:k] + x + word[k:])
    out.discard(word)
    return sorted(out, key=lambda v: (len(v), v))


def _with_derived_reverse(spec: MachineSpec, max_len: int, words) -> MachineSpec:
    from .reverse import derive_reverse

    result = derive_reverse(spec, max_len=max_len, words=words)
    if not result.ok:
        raise RuntimeError("; ".join(c.describe() for c in result.conflicts))
    return result.spec


def _build(name: str) -> ZooEntry:
    from .combinators import reverse_language

    if name == "an_bn":
        return ZooEntry(name, build_an_bn(), is_an_bn, BoundKind.LINEAR, True,
                        "hand-written tables: a^n b^n, n >= 1",
                        note="upper back row for p4 on b receives LEND; the tabulated REND never fires",
                        equiv_max_len=14, certify_max_len=6,
                        members=lambda n: "a" * n + "b" * n, member_params=(1, 2, 3, 4),
                        alphabet=("a", "b"))
    if name == "w_dollar":
        fwd = build_w_dollar()
        members = [w + "$" + w[::-1] + "$" + "a" * len(w) for w in ("", "a", "ab", "bba")]
        spec = _with_derived_reverse(fwd, 6, members)
        return ZooEntry(name, spec, is_w_dollar, BoundKind.LINEAR, True,
                        "constructed: w $ w^R $ a^|w|, reverse tables derived",
                        equiv_max_len=12, certify_max_len=6,
                        members=lambda k: ("ab" * k)[:k] + "$" + ("ab" * k)[:k][::-1] + "$" + "a" * k,
                        member_params=(0, 1, 2, 3), alphabet=("a", "b", "$"))
    if name == "prefix_abb":
        return ZooEntry(name, build_prefix_abb(), is_prefix_abb, BoundKind.CONSTANT, True,
                        "hand-written: a^m bb {a,b}*, upper component only",
                        equiv_max_len=10, certify_max_len=6,
                        members=lambda k: "a" * k + "bb", member_params=(0, 1, 2, 3), alphabet=("a", "b"))
    if name == "suffix_bba":
        spec = replace(reverse_language(build_prefix_abb()), name="suffix_bba")
        return ZooEntry(name, spec, is_suffix_bba, BoundKind.CONSTANT, True,
                        "reversal of prefix_abb by component swap",
                        equiv_max_len=10, certify_max_len=6,
                        members=lambda k: "bb" + "a" * k, member_params=(0, 1, 2, 3), alphabet=("a", "b"))
    if name == "l_lin":
        fwd = build_l_lin()
        spec = _with_derived_reverse(fwd, 7, [])
        return ZooEntry(name, spec, is_l_lin, BoundKind.LINEAR, True,
                        "constructed: w c w^R, w in {0,1}*, reverse tables derived",
                        equiv_max_len=11, certify_max_len=6,
                        members=lambda k: ("01" * k)[:k] + "c" + ("01" * k)[:k][::-1],
                        member_params=(1, 2, 3, 4, 5), alphabet=("0", "1", "c"))
    if name == "l_expo":
        fwd = build_l_expo_forward()
        extra = [l_expo_member(m) for m in (1, 2, 3)]
        extra += _neighbours(l_expo_member(1), fwd.input_alphabet)
        spec = _with_derived_reverse(fwd, 6, extra)
        return ZooEntry(name, spec, is_l_expo, BoundKind.LOGARITHMIC, True,
                        "constructed: doubling blocks, 2m+3 forward messages",
                        equiv_max_len=10, certify_max_len=6,
                        members=l_expo_member, member_params=(1, 2, 3), alphabet=fwd.input_alphabet)
    if name == "l_expo_hat":
        fwd = build_l_expo_hat_forward()
        extra = [l_expo_hat_member(m, b) for m in (1, 2) for b in ("0", "1", "00", "01", "10", "11") if len(b) == m]
        extra += [l_expo_hat_member(3)]
        extra += _neighbours(l_expo_hat_member(1, "0"), fwd.input_alphabet)
        spec = _with_derived_reverse(fwd, 5, extra)
        return ZooEntry(name, spec, is_l_expo_hat, BoundKind.LOGARITHMIC, True,
                        "constructed: doubling blocks with bit separators",
                        equiv_max_len=8, certify_max_len=6,
                        members=l_expo_hat_member, member_params=(1, 2, 3), alphabet=fwd.input_alphabet)
    if name == "l_poly_hat":
        fwd = build_l_poly_hat_forward()
        extra = [l_poly_hat_member(m, b) for m in (0, 1, 2)
                 for b in ("", "0", "1", "00", "01", "10", "11") if len(b) == m]
        extra += [l_poly_hat_member(m) for m in (3, 4)]
        extra += _neighbours(l_poly_hat_member(1, "1"), fwd.input_alphabet)
        spec = _with_derived_reverse(fwd, 5, extra)
        return ZooEntry(name, spec, is_l_poly_hat, BoundKind.SQUARE_ROOT, True,
                        "constructed: a x1 a^5 ... a^(4m+1) c a^(4m+3) ... a^7 x1 a^3",
                        equiv_max_len=8, certify_max_len=6,
                        members=l_poly_hat_member, member_params=(0, 1, 2, 3, 4), alphabet=fwd.input_alphabet)
    if name == "l_empty_I":
        return ZooEntry(name, None, is_l_empty_I, None, False,
                        "predicate only: a^m1 b b^m3 b a^m2",
                        note="not accepted by any reversible machine; predicate only",
                        alphabet=("a", "b"))
    if name == "l_I_template":
        return ZooEntry(name, None, l_I, None, False,
                        "predicate only: L_I with I = b{a,b}*b, equal to prefix_abb ∩ suffix_bba",
                        note="not accepted by any reversible machine; predicate only",
                        alphabet=("a", "b"))
    raise UnknownMachine(name)


CATALOG = ("an_bn", "w_dollar", "prefix_abb", "suffix_bba", "l_lin", "l_expo",
           "l_expo_hat", "l_poly_hat", "l_empty_I", "l_I_template")


@lru_cache(maxsize=None)
def get(name: str) -> ZooEntry:
    from .dsl import canonical

    if name not in CATALOG:
        raise UnknownMachine(name)
    entry = _build(name)
    return entry if entry.spec is None else replace(entry, spec=canonical(entry.spec))


def membership(name: str, word: str) -> bool:
    return get(name).predicate(word)


def list_entries() -> list:
    return [get(n) for n in CATALOG]


def machine_names() -> list:
    return [e.name for e in list_entries() if e.spec is not None]
