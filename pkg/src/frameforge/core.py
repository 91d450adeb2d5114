"""Finite Boolean frames and their constructions.

An element of a frame on ``k`` atoms is an ``int`` bitmask below ``2**k``;
bit ``i`` set means atom ``i`` is in the subset. Meet, join, complement and
symmetric difference are bitwise ``&``, ``|``, ``^ top`` and ``^``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import limits
from .errors import (
    LengthMismatch,
    RetryExhausted,
    TooLarge,
    UnknownSpec,
    ValueOutOfRange,
)


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> list[int]:
    """Indices of the set bits of ``x``, ascending."""
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def submasks(a: int):
    """Yield every ``d`` with ``d & a == d``, starting at ``a`` and ending at 0."""
    d = a
    while True:
        yield d
        if d == 0:
            return
        d = (d - 1) & a


def leq(x: int, y: int) -> bool:
    return x & y == x


@dataclass(frozen=True, eq=False)
class BooleanFrame:
    """A finite Boolean algebra with one arbitrary unary operation ``f``.

    ``f[x]`` is the image of element ``x``. Instances are immutable; build them
    through :func:`make_frame` or the other constructors so the table is checked.
    """

    atoms: int
    f: tuple
    name: Optional[str] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(v) for v in self.f))

    @property
    def size(self) -> int:
        return 1 << self.atoms

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1

    @cached_property
    def table(self) -> np.ndarray:
        arr = np.asarray(self.f, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def complement(self, x: int) -> int:
        return x ^ self.top

    def __call__(self, x: int) -> int:
        return self.f[x]

    def __eq__(self, other):
        if not isinstance(other, BooleanFrame):
            return NotImplemented
        return self.atoms == other.atoms and self.f == other.f

    def __hash__(self):
        return hash((self.atoms, self.f))

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"BooleanFrame({label}atoms={self.atoms}, f={list(self.f)})"

    def renamed(self, name: Optional[str]) -> "BooleanFrame":
        return BooleanFrame(self.atoms, self.f, name)


@dataclass(frozen=True)
class KripkeFrame:
    worlds: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.worlds and 0 <= v < self.worlds):
                raise ValueOutOfRange(f"edge ({u}, {v}) outside {self.worlds} worlds")
        object.__setattr__(self, "edges", edges)

    def successors(self, w: int) -> int:
        """Successors of ``w`` as a bitmask."""
        mask = 0
        for u, v in self.edges:
            if u == w:
                mask |= 1 << v
        return mask


@dataclass(frozen=True)
class AtomPermutation:
    """Bijection on atom indices; calling it permutes the bits of an element."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    def __call__(self, x: int) -> int:
        out = 0
        for i in bits(x):
            out |= 1 << self.images[i]
        return out

    def inverse(self) -> "AtomPermutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return AtomPermutation(tuple(inv))

    @classmethod
    def identity(cls, k: int) -> "AtomPermutation":
        return cls(tuple(range(k)))


def _check_atoms(atoms: int, max_atoms: Optional[int] = None) -> None:
    cap = limits().max_atoms if max_atoms is None else max_atoms
    if atoms < 0:
        raise ValueOutOfRange(f"negative atom count {atoms}")
    if atoms > cap:
        raise TooLarge(f"{atoms} atoms exceeds the cap of {cap}")


def make_frame(atoms: int, f_table: Sequence[int], name: Optional[str] = None,
               max_atoms: Optional[int] = None) -> BooleanFrame:
    _check_atoms(atoms, max_atoms)
    size = 1 << atoms
    table = [int(v) for v in f_table]
    if len(table) != size:
        raise LengthMismatch(f"table has {len(table)} entries, expected {size} for {atoms} atoms")
    for i, v in enumerate(table):
        if not 0 <= v < size:
            raise ValueOutOfRange(f"f[{i}] = {v} is not below {size}")
    return BooleanFrame(atoms, tuple(table), name)


def trivial_frame() -> BooleanFrame:
    return BooleanFrame(0, (0,), "trivial")


def additive_extension(atoms: int, atom_images: Sequence[int],
                       name: Optional[str] = None) -> BooleanFrame:
    """Frame whose operation is the join-preserving map fixed by ``atom_images``."""
    _check_atoms(atoms)
    images = [int(v) for v in atom_images]
    if len(images) != atoms:
        raise LengthMismatch(f"{len(images)} atom images for {atoms} atoms")
    size = 1 << atoms
    for i, v in enumerate(images):
        if not 0 <= v < size:
            raise ValueOutOfRange(f"image of atom {i} is {v}, not below {size}")
    table = [0] * size
    for x in range(1, size):
        low = x & -x
        table[x] = table[x ^ low] | images[low.bit_length() - 1]
    return BooleanFrame(atoms, tuple(table), name)


def complex_algebra(kripke: KripkeFrame, modality: str = "diamond",
                    name: Optional[str] = None) -> BooleanFrame:
    if modality not in ("diamond", "box"):
        raise ValueError(f"unknown modality {modality!r}")
    n = kripke.worlds
    _check_atoms(n)
    succ = [kripke.successors(w) for w in range(n)]
    table = []
    for x in range(1 << n):
        img = 0
        for w in range(n):
            if modality == "diamond":
                hit = succ[w] & x != 0
            else:
                hit = succ[w] & ~x == 0
            if hit:
                img |= 1 << w
        table.append(img)
    return BooleanFrame(n, tuple(table), name)


def wheel(n: int) -> KripkeFrame:
    """Wheel frame: rim worlds ``0..n-1`` within distance 1 mod n, hub ``n`` seeing and seen by all."""
    hub = n
    edges = set()
    for x in range(n):
        for y in range(n):
            if (x - y) % n in (0, 1, n - 1):
                edges.add((x, y))
        edges.add((hub, x))
        edges.add((x, hub))
    edges.add((hub, hub))
    return KripkeFrame(n + 1, frozenset(edges))


def cycle_frame(n: int, name: Optional[str] = None) -> BooleanFrame:
    """Powerset of n with f: empty -> top -> {n-1} -> ... -> {0} -> empty, identity elsewhere."""
    if n < 2:
        raise UnknownSpec(f"cycle needs n >= 2, got {n}")
    _check_atoms(n)
    size = 1 << n
    top = size - 1
    table = list(range(size))
    table[0] = top
    table[top] = 1 << (n - 1)
    for i in range(n - 1, 0, -1):
        table[1 << i] = 1 << (i - 1)
    table[1] = 0
    return BooleanFrame(n, tuple(table), name)


TWO_ELEMENT = {
    "id": (0, 1),
    "zero": (0, 0),
    "one": (1, 1),
    "swap": (1, 0),
}


def builtin_frame(spec: str) -> BooleanFrame:
    spec = spec.strip()
    if spec == "example1":
        table = list(range(8))
        table[0b101] = 0b111
        return BooleanFrame(3, tuple(table), "example1")
    if spec == "example-sh":
        # atoms a, b, c are bits 0, 1, 2
        table = list(range(8))
        table[0b010] = 0b111
        table[0b111] = 0
        table[0b100] = 0
        return BooleanFrame(3, tuple(table), "example-sh")
    kind, _, arg = spec.partition(":")
    if kind == "two" and arg in TWO_ELEMENT:
        return BooleanFrame(1, TWO_ELEMENT[arg], spec)
    if kind in ("cycle", "wheel") and arg.isdigit():
        n = int(arg)
        if kind == "cycle" and n >= 2:
            return cycle_frame(n, spec)
        if kind == "wheel" and n >= 5:
            return complex_algebra(wheel(n), "diamond", spec)
    raise UnknownSpec(f"unknown builtin frame {spec!r}")


BUILTIN_NAMES = ("example1", "example-sh", "cycle:N", "wheel:N", "two:id", "two:zero",
                 "two:one", "two:swap")


def pair(u: int, v: int, left_atoms: int) -> int:
    """Element of a product frame from its two coordinates."""
    return u | (v << left_atoms)


def unpair(x: int, left_atoms: int) -> tuple[int, int]:
    return x & ((1 << left_atoms) - 1), x >> left_atoms


def product(a: BooleanFrame, b: BooleanFrame, name: Optional[str] = None) -> BooleanFrame:
    """Direct product; ``a``'s atoms occupy the low bits."""
    k = a.atoms + b.atoms
    _check_atoms(k)
    low = a.top
    table = []
    for x in range(1 << k):
        table.append(a.f[x & low] | (b.f[x >> a.atoms] << a.atoms))
    if name is None and a.name and b.name:
        name = f"{a.name}*{b.name}"
    return BooleanFrame(k, tuple(table), name)


CONSTRAINTS = ("none", "normal", "additive", "star")


def random_frame(atoms: int, seed: int, constraint: str = "none") -> BooleanFrame:
    """Seeded random frame; identical arguments give identical frames."""
    if constraint not in CONSTRAINTS:
        raise ValueError(f"unknown constraint {constraint!r}")
    _check_atoms(atoms)
    rng = random.Random(f"{atoms}/{seed}/{constraint}")
    size = 1 << atoms
    name = f"random:{atoms}:{seed}:{constraint}"
    if constraint == "additive":
        images = [rng.randrange(size) for _ in range(atoms)]
        return additive_extension(atoms, images, name)
    if constraint == "star":
        from .terms import satisfies_star

        for _ in range(limits().star_retries):
            frame = BooleanFrame(atoms, tuple(rng.randrange(size) for _ in range(size)), name)
            if satisfies_star(frame):
                return frame
        raise RetryExhausted(
            f"no frame satisfying the star condition in {limits().star_retries} draws"
        )
    table = [rng.randrange(size) for _ in range(size)]
    if constraint == "normal":
        table[0] = 0
    return BooleanFrame(atoms, tuple(table), name)


def all_frames(atoms: int) -> Iterable[BooleanFrame]:
    """Every frame on ``atoms`` atoms, in lexicographic table order."""
    size = 1 << atoms
    for code in range(size**size):
        table = []
        for _ in range(size):
            code, r = divmod(code, size)
            table.append(r)
        yield BooleanFrame(atoms, tuple(table), None)


# isomorphism


def _atom_signature(frame: BooleanFrame, i: int) -> tuple:
    atom = 1 << i
    coatom = frame.top ^ atom
    fa, fc = frame.f[atom], frame.f[coatom]
    return (popcount(fa), popcount(fc), bool(fa & atom), bool(fc & atom),
            bool(frame.f[0] & atom), bool(frame.f[frame.top] & atom))


def is_isomorphic(a: BooleanFrame, b: BooleanFrame) -> Optional[AtomPermutation]:
    """Return an atom permutation carrying ``a``'s operation onto ``b``'s, or ``None``."""
    if a.atoms != b.atoms:
        return None
    k = a.atoms
    if sorted((popcount(x), popcount(a.f[x])) for x in range(a.size)) != sorted(
        (popcount(x), popcount(b.f[x])) for x in range(b.size)
    ):
        return None
    sig_b = [_atom_signature(b, j) for j in range(k)]
    candidates = [[j for j in range(k) if sig_b[j] == _atom_signature(a, i)] for i in range(k)]
    images = [-1] * k
    used = [False] * k

    def consistent(depth: int) -> bool:
        # every x supported on atoms 0..depth-1 must agree on the assigned part
        assigned = (1 << depth) - 1
        phi = [0] * (1 << depth)
        for x in range(1, 1 << depth):
            low = x & -x
            phi[x] = phi[x ^ low] | (1 << images[low.bit_length() - 1])
        image_mask = phi[assigned]
        for x in range(1 << depth):
            fx = a.f[x]
            if phi[fx & assigned] != b.f[phi[x]] & image_mask:
                return False
        return True

    def search(depth: int) -> bool:
        if depth == k:
            return True
        for j in candidates[depth]:
            if used[j]:
                continue
            images[depth] = j
            used[j] = True
            if consistent(depth + 1) and search(depth + 1):
                return True
            used[j] = False
        images[depth] = -1
        return False

    if not search(0):
        return None
    perm = AtomPermutation(tuple(images))
    for x in range(a.size):
        if perm(a.f[x]) != b.f[perm(x)]:
            raise AssertionError("isomorphism witness failed re-verification")
    return perm


def permute_frame(frame: BooleanFrame, perm: AtomPermutation) -> BooleanFrame:
    """The frame transported along ``perm``; always isomorphic to ``frame``."""
    table = [0] * frame.size
    for x in range(frame.size):
        table[perm(x)] = perm(frame.f[x])
    return BooleanFrame(frame.atoms, tuple(table), frame.name)


# JSON I/O


def frame_to_dict(frame: BooleanFrame) -> dict:
    return {"name": frame.name, "atoms": frame.atoms, "f": list(frame.f)}


def frame_from_dict(data: dict) -> BooleanFrame:
    """Accept either the frame schema or the Kripke schema."""
    if "worlds" in data:
        kripke = KripkeFrame(int(data["worlds"]), frozenset(tuple(e) for e in data.get("edges", [])))
        return complex_algebra(kripke, data.get("modality", "diamond"), data.get("name"))
    if "atoms" not in data or "f" not in data:
        raise ValueError("frame JSON needs 'atoms' and 'f' (or 'worlds' for a Kripke frame)")
    return make_frame(int(data["atoms"]), data["f"], data.get("name"))


def load_frame(path) -> BooleanFrame:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    frame = frame_from_dict(data)
    if frame.name is None:
        frame = frame.renamed(str(path))
    return frame


def dump_frame(frame: BooleanFrame) -> str:
    return json.dumps(frame_to_dict(frame), sort_keys=True)
