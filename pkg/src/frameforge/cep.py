"""Deciding the congruence extension property.

Three independent routes are provided. :func:`cep_direct` searches the ambient
congruences for an extension of every congruence of every subalgebra.
:func:`cep_two_generated` and :func:`pcep` only test principal congruences,
and only against the canonical candidate: the ambient principal congruence of
the same pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .congruence import _principal, congruence_generators, is_congruential
from .core import BooleanFrame
from .errors import NotClosed, NotCongruential
from .structure import Subalgebra, all_subalgebras, generated_subalgebra, is_closed, relative_frame

METHODS = ("direct", "two_generated", "pcep")


@dataclass(frozen=True)
class CepVerdict:
    holds: bool
    method: str
    witness: Optional[tuple] = None  # (subalgebra elements, generator)

    def __bool__(self):
        return self.holds


def restrict_congruence(frame: BooleanFrame, a, sub: Subalgebra) -> int:
    """Generator, inside ``sub``, of the ambient congruence ``a`` cut down to ``sub``."""
    a = int(a)
    if not is_congruential(frame, a):
        raise NotCongruential(f"{a} does not generate a congruence")
    if not is_closed(sub):
        raise NotClosed("not a subalgebra")
    return _restrict(a, sub)


def _restrict(a: int, sub: Subalgebra) -> int:
    r = 0
    for x in sub.elements:
        if x & a == x:
            r |= x
    return r


def _relative_generators(frame: BooleanFrame, sub: Subalgebra) -> list:
    """Congruence generators of the subalgebra, in ambient coordinates."""
    rel, emb = relative_frame(frame, sub)
    return sorted(emb[b] for b in congruence_generators(rel))


def _relative_principal(frame: BooleanFrame, sub: Subalgebra) -> dict:
    """Map each member ``b`` of ``sub`` to its principal generator within ``sub``."""
    rel, emb = relative_frame(frame, sub)
    return {emb[q]: emb[_principal(rel, q)] for q in range(rel.size)}


def cep_direct(frame: BooleanFrame) -> CepVerdict:
    ambient = congruence_generators(frame)
    for sub in all_subalgebras(frame):
        reachable = {_restrict(a, sub) for a in ambient}
        for b in _relative_generators(frame, sub):
            if b not in reachable:
                return CepVerdict(False, "direct", (sub.elements, b))
    return CepVerdict(True, "direct")


def _principal_failures(frame: BooleanFrame, subs) -> Optional[tuple]:
    """First (subalgebra, generator) whose canonical principal extension fails."""
    for sub in sorted(subs, key=Subalgebra.sort_key):
        inside = _relative_principal(frame, sub)
        bad = [inside[b] for b in sub.elements if _restrict(_principal(frame, b), sub) != inside[b]]
        if bad:
            return (sub.elements, min(bad))
    return None


def cep_two_generated(frame: BooleanFrame) -> CepVerdict:
    seen = {}
    for x in range(frame.size):
        for y in range(x, frame.size):
            sub = generated_subalgebra(frame, (x, y))
            seen.setdefault(sub.elements, sub)
    witness = _principal_failures(frame, seen.values())
    return CepVerdict(witness is None, "two_generated", witness)


def pcep(frame: BooleanFrame) -> CepVerdict:
    witness = _principal_failures(frame, all_subalgebras(frame))
    return CepVerdict(witness is None, "pcep", witness)


def decide_cep(frame: BooleanFrame, method: str = "direct") -> CepVerdict:
    return {"direct": cep_direct, "two_generated": cep_two_generated, "pcep": pcep}[method](frame)


def verify_witness(frame: BooleanFrame, witness: tuple) -> bool:
    """True when no ambient congruence restricts to the witness congruence."""
    elements, b = witness
    sub = Subalgebra(tuple(elements), frame)
    if b not in _relative_generators(frame, sub):
        return False
    return all(_restrict(a, sub) != b for a in congruence_generators(frame))
