import pytest

from frameforge import all_frames, builtin_frame, make_frame, trivial_frame
from frameforge.congruence import (
    CongruencePartition,
    congruence_generators,
    generator_blocks,
    is_congruential,
    is_simple,
    join_generators,
    minimal_nontrivial,
    partition_of_generator,
    partition_oracle,
    principal_congruence,
    principal_iterates,
    quotient,
)
from frameforge.core import is_isomorphic
from frameforge.errors import NotCongruential, TooLarge, TrivialFrame


def test_identity_and_total_are_congruential(ex1, sh):
    for frame in (ex1, sh, builtin_frame("cycle:3")):
        assert is_congruential(frame, 0)
        assert is_congruential(frame, frame.top)


def test_example_sh_rejects_4(sh):
    assert not is_congruential(sh, 4)
    assert (2 ^ 6) & ~4 == 0 and (sh.f[2] ^ sh.f[6]) & ~4 != 0


def test_example1_accepts_2(ex1):
    assert is_congruential(ex1, 2)


def test_generators():
    assert congruence_generators(builtin_frame("example-sh")) == (0, 7)
    assert congruence_generators(builtin_frame("two:id")) == (0, 1)
    assert congruence_generators(builtin_frame("cycle:2")) == (0, 2, 3)


def test_principal(ex1, sh):
    assert principal_congruence(sh, 3, 3).generator == 0
    assert principal_congruence(sh, 0, 3).generator == 7
    assert principal_congruence(ex1, 0, 2).generator == 2
    iterates = principal_iterates(sh, 3)
    assert iterates[0] == 3 and iterates[-1] == 7


def test_principal_is_least(ex1):
    for d in range(8):
        p = principal_congruence(ex1, d).generator
        above = [a for a in congruence_generators(ex1) if a & d == d]
        assert p == min(above, key=lambda a: bin(a).count("1"))
        assert all(a & p == p for a in above)


def test_join():
    c = builtin_frame("cycle:2")
    assert join_generators(c, 0, 2) == 2
    assert join_generators(c, 2, 1) == 3


def test_quotient_examples(ex1):
    q, element_map = quotient(ex1, 0)
    assert q == ex1 and list(element_map) == list(range(8))
    one, _ = quotient(ex1, 7)
    assert one == trivial_frame()
    with pytest.raises(NotCongruential):
        quotient(builtin_frame("example-sh"), 4)


def test_quotient_of_four_element_subalgebra():
    rel = make_frame(2, [0, 1, 0, 0])  # relative frame of {0,3,4,7} in example-sh
    q, _ = quotient(rel, 1)
    assert q.f == (0, 0)
    assert is_isomorphic(q, builtin_frame("two:zero")) is not None


def test_simplicity(ex1, sh):
    assert is_simple(sh)
    assert is_simple(builtin_frame("cycle:3"))
    assert not is_simple(ex1)
    assert not is_simple(builtin_frame("cycle:2"))
    with pytest.raises(TrivialFrame):
        is_simple(trivial_frame())


def test_minimal_nontrivial():
    assert minimal_nontrivial(builtin_frame("cycle:2")) == [2]
    assert minimal_nontrivial(builtin_frame("example-sh")) == [7]


def test_partition_oracle_examples():
    assert len(partition_oracle(builtin_frame("two:id"))) == 2
    assert len(partition_oracle(builtin_frame("example-sh"))) == 2
    parts = partition_oracle(builtin_frame("cycle:2"))
    assert len(parts) == 3
    assert CongruencePartition.from_blocks([[0, 2], [1, 3]]) in parts


def test_partition_oracle_limit():
    with pytest.raises(TooLarge):
        partition_oracle(builtin_frame("cycle:4"))


def test_bijection_on_all_two_atom_frames():
    for frame in all_frames(2):
        gens = congruence_generators(frame)
        assert {partition_of_generator(frame, a) for a in gens} == partition_oracle(frame)


def test_blocks_are_cosets():
    c = builtin_frame("cycle:2")
    assert generator_blocks(c, 2) == [(0, 2), (1, 3)]
