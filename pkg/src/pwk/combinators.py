"""Closure constructions: reversal by component swap, complement by acceptance mode."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .model import COMPLEMENTED, LEND, NORMAL, REND, ComponentSpec, MachineSpec, Rule

_SWAP = {LEND: REND, REND: LEND}


def _sw(sym):
    return _SWAP.get(sym, sym)


def _swap_rules(rules):
    if rules is None:
        return None
    return tuple(Rule(r.state, _sw(r.symbol), _sw(r.message), r.target, r.move) for r in rules)


def _swap_sends(table):
    return {(s, _sw(x)): _sw(m) for (s, x), m in table.items()}


def _swap_component(comp: ComponentSpec) -> ComponentSpec:
    return replace(
        comp,
        delta=_swap_rules(comp.delta),
        send=_swap_sends(comp.send),
        reverse_delta=_swap_rules(comp.reverse_delta),
        rsend=_swap_sends(comp.rsend),
    )


def reverse_language(spec: MachineSpec) -> MachineSpec:
    """Machine accepting the reversal of ``L(spec)``.

    The old lower component becomes the upper one and vice versa.  Endmarkers
    are exchanged in every rule, broadcast key and message, so the reversed
    machine performs the mirror image of the original computation.
    """
    name = spec.name[: -len("_reversed")] if spec.name.endswith("_reversed") else spec.name + "_reversed"
    return replace(
        spec,
        name=name,
        message_alphabet=tuple(_sw(m) for m in spec.message_alphabet),
        upper=_swap_component(spec.lower),
        lower=_swap_component(spec.upper),
    )


@dataclass(frozen=True)
class HaltingCertificate:
    machine: str
    max_len: int
    all_halt: bool
    looping_word: Optional[str] = None


def halting_certificate(spec: MachineSpec, max_len: int) -> HaltingCertificate:
    """Certify that no word up to ``max_len`` makes ``spec`` loop."""
    import numpy as np

    from .accel import LOOP, decode_index, encode, length_batches

    enc = encode(spec)
    for n, start, res in length_batches(spec, max_len, enc=enc):
        looping = np.flatnonzero(res.verdict == LOOP)
        if looping.size:
            word = decode_index(enc, n, start + int(looping[0]))
            return HaltingCertificate(spec.name, max_len, False, word)
    return HaltingCertificate(spec.name, max_len, True)


class CertificateError(ValueError):
    pass


def complement(spec: MachineSpec, cert: HaltingCertificate) -> MachineSpec:
    """Accept exactly the halting words that ``spec`` rejects.

    Sound on words up to ``cert.max_len`` only; looping words are rejected by
    both machines, which is why a halting certificate is required.
    """
    if cert is None or not cert.all_halt:
        raise CertificateError("complement needs a passing halting certificate")
    if cert.machine != spec.name:
        raise CertificateError(f"certificate is for {cert.machine!r}, not {spec.name!r}")
    mode = COMPLEMENTED if spec.acceptance_mode == NORMAL else NORMAL
    return replace(spec, acceptance_mode=mode)
