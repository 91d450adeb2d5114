"""Unary term clones, additive members, switching terms and discriminators.

The unary operations of a frame on ``k`` atoms form a Boolean algebra under
pointwise operations, isomorphic to the subsets of the ``2**k * k`` positions
``(input, bit)``. The clone is the Boolean subalgebra generated by ``x`` that is
also closed under post-composition with ``f``. It is tracked through its atoms:
positions are grouped by their bit pattern across the generators found so far,
and members are the unions of groups. Whenever ``f`` applied to a member leaves
the current algebra, that image becomes a new generator with derivation
``f(<member term>)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .config import limits
from .core import BooleanFrame
from .errors import NotSwitching, TrivialFrame
from .terms import App, Bin, Const, Not, Term, Var, eval_term, format_term, is_additive_table
from .structure import hs_classes, two_element_frames


@dataclass(frozen=True)
class UnaryTable:
    table: tuple
    derivation: Term = field(compare=False)

    def __str__(self):
        return f"{format_term(self.derivation)} = {list(self.table)}"


def _positions(table: np.ndarray, k: int) -> int:
    """Bitset over positions ``x * k + i`` for the bits of a table."""
    out = 0
    for x, v in enumerate(table.tolist()):
        out |= int(v) << (x * k)
    return out


class CloneResult:
    """Outcome of a clone computation: the generators and the grouping they induce."""

    def __init__(self, frame: BooleanFrame, generators: list, complete: bool, cap: int):
        self.frame = frame
        self.generators = generators  # list of (table array, term)
        self.complete = complete
        self.cap = cap
        k = frame.atoms
        self._npos = frame.size * k
        self._all = (1 << self._npos) - 1
        self._gen_bits = [_positions(t, k) for t, _ in generators]
        groups: dict = {}
        for p in range(self._npos):
            sig = tuple((g >> p) & 1 for g in self._gen_bits)
            groups.setdefault(sig, []).append(p)
        self._groups = [sum(1 << p for p in ps) for ps in groups.values()]
        self._atom_terms: dict = {}

    @property
    def size(self) -> int:
        """Members of the generated algebra (a lower bound when incomplete)."""
        if self.frame.atoms == 0:
            return 1
        return 1 << len(self._groups)

    def _table_of_bits(self, pos: int) -> tuple:
        k = self.frame.atoms
        mask = (1 << k) - 1
        return tuple((pos >> (x * k)) & mask for x in range(self.frame.size))

    def _atom_term(self, j: int) -> Term:
        if j not in self._atom_terms:
            target = self._groups[j]
            lits = []
            for g, (_, term) in zip(self._gen_bits, self.generators):
                lits.append((g, term) if g & target else (self._all & ~g, Not(term)))

            def meet_bits(ls):
                acc = self._all
                for b, _ in ls:
                    acc &= b
                return acc

            i = 0
            while i < len(lits):
                trial = lits[:i] + lits[i + 1:]
                if trial and meet_bits(trial) == target:
                    lits = trial
                else:
                    i += 1
            term = lits[0][1]
            for _, t in lits[1:]:
                term = Bin("&", term, t)
            self._atom_terms[j] = term
        return self._atom_terms[j]

    def derive(self, table: Sequence[int]) -> Optional[Term]:
        """Derivation of ``table`` when it lies in the computed algebra, else ``None``."""
        k = self.frame.atoms
        pos = _positions(np.asarray(table, dtype=np.int64), k)
        if k == 0:
            return Var("x")
        for g, (_, term) in zip(self._gen_bits, self.generators):
            if pos == g:
                return term
            if pos == self._all & ~g:
                return Not(term)
        if pos == 0:
            return Const(0)
        if pos == self._all:
            return Const(1)
        # a short derivation from two generator literals beats the atom expansion
        lits = []
        for g, (_, term) in zip(self._gen_bits, self.generators):
            lits += [(g, term), (self._all & ~g, Not(term))]
        for i, (a, ta) in enumerate(lits):
            for b, tb in lits[i + 1:]:
                if a | b == pos:
                    return Bin("|", ta, tb)
                if a & b == pos:
                    return Bin("&", ta, tb)
        chosen = []
        for j, grp in enumerate(self._groups):
            inside = pos & grp
            if inside == grp:
                chosen.append(j)
            elif inside:
                return None
        term = self._atom_term(chosen[0])
        for j in chosen[1:]:
            term = Bin("|", term, self._atom_term(j))
        return term

    def __contains__(self, table) -> bool:
        return self.derive(table) is not None

    @cached_property
    def members(self) -> tuple:
        """Every member as a :class:`UnaryTable`, truncated to the cap when incomplete."""
        if self.frame.atoms == 0:
            return (UnaryTable((0,), Var("x")),)
        out = []
        n = len(self._groups)
        for mask in range(min(1 << n, self.cap)):
            pos = 0
            for j in range(n):
                if mask >> j & 1:
                    pos |= self._groups[j]
            table = self._table_of_bits(pos)
            out.append(UnaryTable(table, self.derive(table)))
        return tuple(sorted(out, key=lambda u: u.table))

    def tables(self) -> set:
        return {m.table for m in self.members}


def _block_index(groups: list, size: int, k: int) -> np.ndarray:
    idx = np.zeros((size, k), dtype=np.int64)
    for j, grp in enumerate(groups):
        p = 0
        while grp:
            if grp & 1:
                idx[p // k, p % k] = j
            grp >>= 1
            p += 1
    return idx


_BATCH_CELLS = 1 << 22


def _closure(frame: BooleanFrame, cap: int, stop=None) -> CloneResult:
    k = frame.atoms
    size = frame.size
    ident = np.arange(size, dtype=np.int64)
    generators = [(ident, Var("x"))]
    if k == 0:
        return CloneResult(frame, generators, True, cap)
    ftab = frame.table
    shifts = np.arange(k, dtype=np.int64)
    while True:
        result = CloneResult(frame, generators, False, cap)
        if stop is not None and stop(result):
            return result
        n = len(result._groups)
        if (1 << n) > cap:
            return result
        block = _block_index(result._groups, size, k)  # (size, k)
        rep = np.zeros(n, dtype=np.int64)
        for j in range(n - 1, -1, -1):
            rep[j] = int(np.flatnonzero(block.ravel() == j)[0])
        rep_of_pos = rep[block.ravel()]
        found = None
        batch = max(1, _BATCH_CELLS // (size * k))
        for start in range(0, 1 << n, batch):
            masks = np.arange(start, min(1 << n, start + batch), dtype=np.int64)
            bitsel = (masks[:, None, None] >> block[None, :, :]) & 1
            h = (bitsel << shifts).sum(axis=2)  # (m, size)
            fh = ftab[h]
            fbits = ((fh[:, :, None] >> shifts) & 1).reshape(len(masks), -1)
            bad = np.any(fbits != fbits[:, rep_of_pos], axis=1)
            if bad.any():
                m = int(np.flatnonzero(bad)[0])
                found = (fh[m], h[m])
                break
        if found is None:
            return CloneResult(frame, generators, True, cap)
        image, member = found
        generators = generators + [(image, App("f", result.derive(member)))]


def unary_clone(frame: BooleanFrame, cap: Optional[int] = None) -> CloneResult:
    """Unary term operations of ``frame``; ``complete`` is False if ``cap`` stopped the closure."""
    cap = limits().clone_cap if cap is None else cap
    if cap < 3:
        raise ValueError("clone cap must be at least 3")
    result = _closure(frame, cap)
    if result.complete:
        _check_derivations(result)
    return result


def _check_derivations(result: CloneResult, limit: int = 4096) -> None:
    if result.size > limit:
        return
    for m in result.members:
        got = tuple(eval_term(result.frame, m.derivation, {"x": x}) for x in range(result.frame.size))
        if got != m.table:
            raise AssertionError(f"derivation {format_term(m.derivation)} does not reproduce its table")


def additive_members(result: CloneResult) -> set:
    size = result.frame.size
    return {m for m in result.members if is_additive_table(m.table, size)}


@dataclass(frozen=True)
class Equivalence:
    status: str  # "equivalent", "not_equivalent", "inconclusive"
    g: Optional[tuple] = None
    f_from_g: Optional[Term] = None
    g_from_f: Optional[Term] = None


def _rename(term: Term, old: str, new: str) -> Term:
    if isinstance(term, App):
        return App(new if term.fn == old else term.fn, _rename(term.arg, old, new))
    if isinstance(term, Not):
        return Not(_rename(term.arg, old, new))
    if isinstance(term, Bin):
        return Bin(term.op, _rename(term.left, old, new), _rename(term.right, old, new))
    return term


def additive_equivalence(frame: BooleanFrame, cap: Optional[int] = None) -> Equivalence:
    """Look for an additive ``g`` sharing the unary clone with ``f`` on this algebra.

    ``g_from_f`` is written with ``f``; ``f_from_g`` with ``g``.
    """
    cap = limits().clone_cap if cap is None else cap
    if is_additive_table(frame.f, frame.size):
        return Equivalence("equivalent", frame.f, App("g", Var("x")), App("f", Var("x")))
    clone_f = unary_clone(frame, cap)
    inconclusive = not clone_f.complete
    for g in sorted(additive_members(clone_f), key=lambda m: m.table):
        clone_g = unary_clone(BooleanFrame(frame.atoms, g.table), cap)
        back = clone_g.derive(frame.f)
        if back is not None:
            return Equivalence("equivalent", g.table, _rename(back, "f", "g"), g.derivation)
        inconclusive |= not clone_g.complete
    return Equivalence("inconclusive" if inconclusive else "not_equivalent")


def hs_two_element_check(frame: BooleanFrame) -> set:
    """Names of the two-element frames that occur in HS of ``frame``."""
    classes = hs_classes(frame)
    return {name for name, two in two_element_frames().items() if two in classes}


def switching_table(frame: BooleanFrame) -> tuple:
    return tuple(0 if x == 0 else frame.top for x in range(frame.size))


@dataclass(frozen=True)
class SwitchingResult:
    status: str  # "found", "absent", "inconclusive"
    term: Optional[UnaryTable] = None


def find_switching_term(frame: BooleanFrame, cap: Optional[int] = None) -> SwitchingResult:
    if frame.atoms == 0:
        raise TrivialFrame("switching terms need a nontrivial frame")
    cap = limits().clone_cap if cap is None else cap
    target = switching_table(frame)
    result = _closure(frame, cap, stop=lambda r: target in r)
    derivation = result.derive(target)
    if derivation is not None:
        return SwitchingResult("found", UnaryTable(target, derivation))
    return SwitchingResult("absent" if result.complete else "inconclusive")


def verify_discriminator(frame: BooleanFrame, d) -> bool:
    """Check that ``t(x,y,z) = (d(x^y) & x) | (-d(x^y) & z)`` discriminates on every triple."""
    table = d.table if isinstance(d, UnaryTable) else tuple(d)
    if table != switching_table(frame):
        raise NotSwitching("table is not the switching function of this frame")
    top = frame.top
    dt = np.asarray(table, dtype=np.int64)
    y = np.arange(frame.size, dtype=np.int64)[:, None]
    z = np.arange(frame.size, dtype=np.int64)[None, :]
    for a in range(frame.size):
        sw = dt[a ^ y]
        t = (sw & a) | ((sw ^ top) & z)
        want = np.where(y != a, a, z)
        if not np.array_equal(t, want):
            return False
    return True


def discriminator_term(d: Term) -> Term:
    """The ternary term built from a switching term in ``x``."""

    def subst(t):
        if isinstance(t, Var):
            return Bin("^", Var("x"), Var("y")) if t.name == "x" else t
        if isinstance(t, Not):
            return Not(subst(t.arg))
        if isinstance(t, App):
            return App(t.fn, subst(t.arg))
        if isinstance(t, Bin):
            return Bin(t.op, subst(t.left), subst(t.right))
        return t

    dxy = subst(d)
    return Bin("|", Bin("&", dxy, Var("x")), Bin("&", Not(dxy), Var("z")))
