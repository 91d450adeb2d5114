"""Subalgebras, isomorphism classes, and the HS / SH comparison."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Optional

import numpy as np

from .config import limits
from .congruence import congruence_generators, quotient, set_partitions
from .core import BooleanFrame, bits, pair, product
from .errors import NotClosed, TooLarge, ValueOutOfRange
from .terms import Verdict


@dataclass(frozen=True)
class Subalgebra:
    elements: tuple
    frame: BooleanFrame

    def __contains__(self, x):
        return x in self._members

    @property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def top(self) -> int:
        return self.frame.top

    def relative_atoms(self) -> list:
        """Minimal nonzero members, ordered by their lowest ambient atom."""
        nonzero = [x for x in self.elements if x]
        minimal = [x for x in nonzero if not any(y != x and y & x == y for y in nonzero)]
        return sorted(minimal, key=lambda x: x & -x)

    def sort_key(self) -> tuple:
        return (len(self.elements), self.elements)

    def __len__(self):
        return len(self.elements)


def _close(frame: BooleanFrame, seed: Iterable[int]) -> frozenset:
    """Least set containing ``seed`` closed under the Boolean operations and ``f``."""
    top = frame.top
    # track the atoms of the Boolean subalgebra generated so far
    blocks = [top] if frame.atoms else []
    pending = list(seed) + [frame.f[0]]
    members = None
    while True:
        changed = False
        for g in pending:
            refined = []
            for b in blocks:
                inside, outside = b & g, b & ~g
                refined.extend(p for p in (inside, outside) if p)
            if len(refined) != len(blocks):
                blocks = refined
                changed = True
        if members is not None and not changed:
            return members
        members = frozenset(_unions(blocks))
        pending = [frame.f[x] for x in members]


def _unions(blocks) -> list:
    out = [0]
    for b in blocks:
        out += [x | b for x in out]
    return out


def generated_subalgebra(frame: BooleanFrame, generators: Iterable[int] = ()) -> Subalgebra:
    gens = list(generators)
    for g in gens:
        if not 0 <= g < frame.size:
            raise ValueOutOfRange(f"{g} is not an element of the frame")
    return Subalgebra(tuple(sorted(_close(frame, gens))), frame)


@lru_cache(maxsize=1024)
def _all_subalgebras(frame: BooleanFrame) -> tuple:
    found = []
    for blocks in set_partitions(range(frame.atoms)):
        masks = [sum(1 << i for i in block) for block in blocks]
        elements = _unions(masks)
        members = set(elements)
        if all(frame.f[x] in members for x in elements):
            found.append(Subalgebra(tuple(sorted(elements)), frame))
    if frame.atoms == 0:
        found = [Subalgebra((0,), frame)]
    return tuple(sorted(found, key=Subalgebra.sort_key))


def all_subalgebras(frame: BooleanFrame) -> list:
    """Every subalgebra, smallest first."""
    if frame.atoms > limits().bell_max_atoms:
        raise TooLarge(f"subalgebra enumeration is limited to {limits().bell_max_atoms} atoms")
    return list(_all_subalgebras(frame))


def is_closed(sub: Subalgebra) -> bool:
    frame = sub.frame
    members = set(sub.elements)
    if 0 not in members or frame.top not in members:
        return False
    for x in members:
        if x ^ frame.top not in members or frame.f[x] not in members:
            return False
        for y in members:
            if x & y not in members:
                return False
    return True


def relative_frame(frame: BooleanFrame, sub: Subalgebra) -> tuple:
    """Standalone frame of a subalgebra plus the embedding into ``frame``.

    ``embedding[q]`` is the ambient element for relative element ``q``.
    """
    if not is_closed(sub):
        raise NotClosed("not a subalgebra")
    atoms = sub.relative_atoms()
    k = len(atoms)
    embedding = tuple(sum(atoms[j] for j in bits(q)) for q in range(1 << k))
    back = {x: q for q, x in enumerate(embedding)}
    table = tuple(back[frame.f[embedding[q]]] for q in range(1 << k))
    return BooleanFrame(k, table, None), embedding


# canonical forms


@lru_cache(maxsize=None)
def _perm_maps(k: int) -> np.ndarray:
    """Row p maps each element to its image under the p-th atom permutation."""
    perms = np.array(list(permutations(range(k))), dtype=np.int64).reshape(-1, k)
    x = np.arange(1 << k, dtype=np.int64)
    maps = np.zeros((perms.shape[0], 1 << k), dtype=np.int64)
    for i in range(k):
        maps |= ((x >> i) & 1)[None, :] << perms[:, i : i + 1]
    return maps


@lru_cache(maxsize=65536)
def canonical_form(frame: BooleanFrame) -> BooleanFrame:
    """Representative of the isomorphism class: least f-table over atom permutations."""
    k = frame.atoms
    if k > limits().canon_max_atoms:
        raise TooLarge(f"canonical forms are limited to {limits().canon_max_atoms} atoms")
    if k == 0:
        return BooleanFrame(0, frame.f, None)
    maps = _perm_maps(k)
    t = frame.table
    rows = np.arange(maps.shape[0])[:, None]
    tables = np.empty_like(maps)
    tables[rows, maps] = maps[:, t]
    alive = np.arange(maps.shape[0])
    for col in range(tables.shape[1]):
        column = tables[alive, col]
        alive = alive[column == column.min()]
        if alive.size == 1:
            break
    return BooleanFrame(k, tuple(int(v) for v in tables[alive[0]]), None)


class IsoClassSet:
    """Set of frames up to isomorphism, keyed by canonical form."""

    def __init__(self, frames: Iterable[BooleanFrame] = ()):
        self._classes: dict = {}
        for f in frames:
            self.add(f)

    def add(self, frame: BooleanFrame) -> None:
        canon = canonical_form(frame)
        if canon not in self._classes:
            self._classes[canon] = frame

    def __contains__(self, frame: BooleanFrame) -> bool:
        return canonical_form(frame) in self._classes

    def __len__(self):
        return len(self._classes)

    def __iter__(self):
        return iter(self.canonical())

    def canonical(self) -> list:
        return sorted(self._classes, key=lambda c: (c.atoms, c.f))

    def keys(self) -> frozenset:
        return frozenset(self._classes)

    def __eq__(self, other):
        if not isinstance(other, IsoClassSet):
            return NotImplemented
        return self.keys() == other.keys()

    def __repr__(self):
        return f"IsoClassSet({[list(c.f) for c in self.canonical()]})"


def hs_classes(frame: BooleanFrame) -> IsoClassSet:
    """Homomorphic images of subalgebras."""
    out = IsoClassSet()
    for sub in all_subalgebras(frame):
        rel, _ = relative_frame(frame, sub)
        for a in congruence_generators(rel):
            out.add(quotient(rel, a)[0])
    return out


def sh_classes(frame: BooleanFrame) -> IsoClassSet:
    """Subalgebras of homomorphic images."""
    out = IsoClassSet()
    for a in congruence_generators(frame):
        image, _ = quotient(frame, a)
        for sub in all_subalgebras(image):
            out.add(relative_frame(image, sub)[0])
    return out


def hs_equals_sh(frame: BooleanFrame) -> Verdict:
    hs, sh = hs_classes(frame), sh_classes(frame)
    if hs == sh:
        return Verdict(True)
    extra = sorted(hs.keys() ^ sh.keys(), key=lambda c: (c.atoms, c.f))[0]
    side = "hs" if extra in hs.keys() else "sh"
    return Verdict(False, {"only_in": side, "atoms": extra.atoms, "f": list(extra.f)})


def fraser_horn_check(a: BooleanFrame, b: BooleanFrame) -> Verdict:
    """Compare the product's congruences with the products of factor congruences."""
    prod = product(a, b)
    actual = set(congruence_generators(prod))
    expected = {pair(u, v, a.atoms) for u in congruence_generators(a)
                for v in congruence_generators(b)}
    if actual == expected:
        return Verdict(True, None, "exhaustive", len(actual))
    extra = min(actual ^ expected)
    return Verdict(False, {"generator": extra, "in_product": extra in actual}, "exhaustive")


def two_element_frames() -> dict:
    from .core import builtin_frame

    return {name: builtin_frame(name) for name in ("two:id", "two:zero", "two:one", "two:swap")}


def find_class(classes: IsoClassSet, frame: BooleanFrame) -> Optional[BooleanFrame]:
    canon = canonical_form(frame)
    return canon if canon in classes.keys() else None
