"""Congruences of finite Boolean frames.

A congruence is stored as the top element ``a`` of its ideal of differences:
``x`` and ``y`` are congruent exactly when ``x ^ y <= a``. The element ``a`` is
a valid generator when ``x ^ y <= a`` forces ``f(x) ^ f(y) <= a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import limits
from .core import BooleanFrame, bits, submasks
from .errors import NotCongruential, TooLarge, TrivialFrame, ValueOutOfRange


@dataclass(frozen=True)
class CongruenceGenerator:
    generator: int
    frame: BooleanFrame

    def blocks(self) -> list:
        return generator_blocks(self.frame, self.generator)

    def __int__(self):
        return self.generator


def _check_element(frame: BooleanFrame, x: int) -> None:
    if not 0 <= x < frame.size:
        raise ValueOutOfRange(f"{x} is not an element of a frame with {frame.atoms} atoms")


def _difference_spread(frame: BooleanFrame, a: int) -> int:
    """Join of ``f(u) ^ f(v)`` over all pairs with ``u ^ v <= a``."""
    t = frame.table
    x = np.arange(frame.size, dtype=np.int64)
    acc = 0
    for d in submasks(a):
        if d:
            acc |= int(np.bitwise_or.reduce(t ^ t[x ^ d]))
    return acc


def is_congruential(frame: BooleanFrame, a: int) -> bool:
    _check_element(frame, a)
    return _difference_spread(frame, a) & ~a == 0


@lru_cache(maxsize=4096)
def _generators(frame: BooleanFrame) -> tuple:
    return tuple(a for a in range(frame.size) if _difference_spread(frame, a) & ~a == 0)


def congruence_generators(frame: BooleanFrame) -> tuple:
    """All congruence generators of ``frame`` in ascending order."""
    return _generators(frame)


def principal_congruence(frame: BooleanFrame, x: int, y: int = 0) -> CongruenceGenerator:
    """Least congruence identifying ``x`` and ``y``."""
    _check_element(frame, x)
    _check_element(frame, y)
    return CongruenceGenerator(_principal(frame, x ^ y), frame)


def principal_iterates(frame: BooleanFrame, start: int) -> list:
    """The closure chain ``a0 <= a1 <= ...`` ending at the principal generator."""
    chain = [start]
    while True:
        a = chain[-1]
        nxt = a | _difference_spread(frame, a)
        if nxt == a:
            return chain
        chain.append(nxt)


@lru_cache(maxsize=65536)
def _principal(frame: BooleanFrame, d: int) -> int:
    return principal_iterates(frame, d)[-1]


def join_generators(frame: BooleanFrame, a: int, b: int) -> int:
    """Join of two congruences in the congruence lattice."""
    return _principal(frame, a | b)


def quotient(frame: BooleanFrame, a) -> tuple:
    """Quotient frame and the element map ``x -> [x]``.

    The class of ``x`` is represented by ``x & ~a``; quotient atom ``j`` is the
    ``j``-th atom outside ``a``.
    """
    a = int(a)
    _check_element(frame, a)
    if not is_congruential(frame, a):
        raise NotCongruential(f"{a} does not generate a congruence")
    keep = bits(frame.top & ~a)
    index = {atom: j for j, atom in enumerate(keep)}

    def project(x: int) -> int:
        out = 0
        for i in bits(x & ~a):
            out |= 1 << index[i]
        return out

    def lift(q: int) -> int:
        out = 0
        for j in bits(q):
            out |= 1 << keep[j]
        return out

    k = len(keep)
    table = tuple(project(frame.f[lift(q)]) for q in range(1 << k))
    element_map = tuple(project(x) for x in range(frame.size))
    name = f"{frame.name}/{a}" if frame.name else None
    return BooleanFrame(k, table, name), element_map


def is_simple(frame: BooleanFrame) -> bool:
    if frame.atoms == 0:
        raise TrivialFrame("the one-element frame has no simplicity verdict")
    return congruence_generators(frame) == (0, frame.top)


def minimal_nontrivial(frame: BooleanFrame) -> list:
    """Minimal non-identity congruence generators; one entry means a monolith exists."""
    gens = [a for a in congruence_generators(frame) if a]
    return [a for a in gens if not any(b != a and b & a == b for b in gens)]


def generator_blocks(frame: BooleanFrame, a: int) -> list:
    """Partition of the elements induced by generator ``a``."""
    seen = {}
    for x in range(frame.size):
        seen.setdefault(x & ~a, []).append(x)
    return sorted(tuple(block) for block in seen.values())


# brute-force oracle over partitions of the element set


def set_partitions(items):
    """All partitions of ``items`` as lists of blocks, via restricted growth strings."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    labels = [0] * n

    def emit():
        blocks: dict = {}
        for item, lab in zip(items, labels):
            blocks.setdefault(lab, []).append(item)
        return [blocks[k] for k in sorted(blocks)]

    def rec(i, most):
        if i == n:
            yield emit()
            return
        for lab in range(most + 2):
            labels[i] = lab
            yield from rec(i + 1, max(most, lab))

    labels[0] = 0
    yield from rec(1, 0)


@dataclass(frozen=True)
class CongruencePartition:
    blocks: tuple

    @classmethod
    def from_blocks(cls, blocks) -> "CongruencePartition":
        return cls(tuple(sorted(tuple(sorted(b)) for b in blocks)))


def _compatible(labels, size: int, ops) -> bool:
    for op in ops:
        for x in range(size):
            for y in range(x + 1, size):
                if labels[x] == labels[y] and labels[op(x)] != labels[op(y)]:
                    return False
    return True


@lru_cache(maxsize=None)
def _boolean_congruences(k: int) -> tuple:
    """Partitions of the k-atom Boolean algebra compatible with meet and complement."""
    size = 1 << k
    top = size - 1
    found = []
    for blocks in set_partitions(range(size)):
        labels = [0] * size
        for i, block in enumerate(blocks):
            for x in block:
                labels[x] = i
        if not _compatible(labels, size, [lambda x: x ^ top]):
            continue
        ok = True
        for x in range(size):
            for y in range(size):
                if labels[x] != labels[y]:
                    continue
                for z in range(size):
                    if labels[x & z] != labels[y & z]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            found.append(tuple(labels))
    return tuple(found)


def partition_oracle(frame: BooleanFrame) -> set:
    """Every partition of the elements compatible with meet, complement and ``f``."""
    if frame.atoms > limits().oracle_max_atoms:
        raise TooLarge(f"partition oracle is limited to {limits().oracle_max_atoms} atoms")
    out = set()
    for labels in _boolean_congruences(frame.atoms):
        if _compatible(labels, frame.size, [frame.f.__getitem__]):
            blocks: dict = {}
            for x, lab in enumerate(labels):
                blocks.setdefault(lab, []).append(x)
            out.add(CongruencePartition.from_blocks(blocks.values()))
    return out


def partition_of_generator(frame: BooleanFrame, a: int) -> CongruencePartition:
    return CongruencePartition.from_blocks(generator_blocks(frame, a))
