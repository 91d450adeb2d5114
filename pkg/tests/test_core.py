import json

import pytest

from frameforge import (
    AtomPermutation,
    BooleanFrame,
    KripkeFrame,
    additive_extension,
    all_frames,
    builtin_frame,
    complex_algebra,
    dump_frame,
    frame_from_dict,
    is_isomorphic,
    load_frame,
    make_frame,
    permute_frame,
    product,
    random_frame,
    trivial_frame,
    wheel,
)
from frameforge.errors import LengthMismatch, TooLarge, UnknownSpec, ValueOutOfRange
from frameforge.terms import builtin_property


def test_trivial_frame():
    one = make_frame(0, [0])
    assert one == trivial_frame()
    assert one.size == 1 and one.top == 0


def test_example1_table(ex1):
    assert ex1.f[5] == 7
    assert all(ex1.f[x] == x for x in range(8) if x != 5)
    assert ex1 == make_frame(3, [0, 1, 2, 3, 4, 7, 6, 7])


def test_value_out_of_range():
    with pytest.raises(ValueOutOfRange, match=r"f\[3\]"):
        make_frame(2, [0, 1, 2, 5])


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        make_frame(2, [0, 1, 2])


def test_atom_cap():
    with pytest.raises(TooLarge):
        make_frame(11, [0] * 2048)


def test_cycle3_orbit():
    c = builtin_frame("cycle:3")
    chain = [0]
    for _ in range(5):
        chain.append(c.f[chain[-1]])
    assert chain == [0, 7, 4, 2, 1, 0]
    assert [c.f[x] for x in (3, 5, 6)] == [3, 5, 6]


def test_example_sh_table(sh):
    assert (sh.f[2], sh.f[7], sh.f[4]) == (7, 0, 0)
    assert all(sh.f[x] == x for x in (0, 1, 3, 5, 6))


@pytest.mark.parametrize("spec", ["nope", "cycle:1", "wheel:4", "two:foo", "cycle:x"])
def test_unknown_spec(spec):
    with pytest.raises(UnknownSpec):
        builtin_frame(spec)


def test_additive_extension_matches_companion():
    g = additive_extension(3, [2, 0, 1])
    assert g.f[1] == 2 and g.f[2] == 0 and g.f[4] == 1
    assert g.f[5] == 3
    assert additive_extension(2, [1, 2]).f == (0, 1, 2, 3)
    assert additive_extension(1, [0]).f == (0, 0)


def test_complex_algebra_small():
    empty = complex_algebra(KripkeFrame(3, frozenset()))
    assert set(empty.f) == {0}
    loop = complex_algebra(KripkeFrame(1, frozenset({(0, 0)})))
    assert loop.f == (0, 1)


def test_wheel5():
    w = builtin_frame("wheel:5")
    assert w.size == 64
    assert w.f[1 << 5] == 63  # every world sees the hub
    assert builtin_property(w, "additive").holds


def test_box_is_dual_of_diamond():
    k = wheel(5)
    dia = complex_algebra(k, "diamond")
    box = complex_algebra(k, "box")
    assert all(box.f[x] == dia.f[x ^ 63] ^ 63 for x in range(64))


def test_product_examples(ex1):
    two_id = builtin_frame("two:id")
    assert product(two_id, two_id).f == (0, 1, 2, 3)
    p = product(ex1, builtin_frame("two:zero"))
    assert p.atoms == 4 and p.f[5] == 7
    x = builtin_frame("cycle:2")
    assert is_isomorphic(product(trivial_frame(), x), x) is not None


def test_random_determinism():
    assert random_frame(2, 7) == random_frame(2, 7)
    assert builtin_property(random_frame(3, 1, "additive"), "additive").holds
    assert random_frame(2, 5, "normal").f[0] == 0
    assert builtin_property(random_frame(2, 3, "star"), "star").holds


def test_all_frames_count():
    assert len(list(all_frames(1))) == 4
    assert len(set(all_frames(2))) == 256


def test_isomorphism_examples(ex1):
    perm = is_isomorphic(ex1, ex1)
    assert perm == AtomPermutation.identity(3)
    assert is_isomorphic(builtin_frame("two:zero"), builtin_frame("two:id")) is None


def test_isomorphism_finds_permutation(ex1):
    perm = AtomPermutation((2, 0, 1))
    moved = permute_frame(ex1, perm)
    found = is_isomorphic(ex1, moved)
    assert found is not None
    assert permute_frame(ex1, found) == moved


def test_json_round_trip(tmp_path, ex1):
    path = tmp_path / "f.json"
    path.write_text(dump_frame(ex1))
    assert load_frame(path) == ex1
    data = {"worlds": 6, "edges": sorted(wheel(5).edges)}
    assert frame_from_dict(json.loads(json.dumps(data))) == builtin_frame("wheel:5")


def test_name_ignored_in_equality(ex1):
    assert ex1.renamed("other") == ex1
    assert hash(BooleanFrame(3, ex1.f, None)) == hash(ex1)
