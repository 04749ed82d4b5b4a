from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from circorder.errors import ElementMismatch, InvalidGroup, SchemaError, UnsupportedVariant
from circorder.groups import (
    LEFT,
    RIGHT,
    CyclicTorsion,
    FgAbelian,
    FiniteTable,
    FreeGroup,
    FreeProduct,
    NonCyclicWitness,
    ball,
    cyclic_table,
    dihedral_table,
    element_from_json,
    element_to_json,
    group_from_json,
    group_sha,
    group_to_json,
    klein_four_table,
    normalize,
    power,
    quaternion_table,
    torsion_cyclic_check,
    word_length,
)

MOD = FreeProduct(FgAbelian(0, 2), FgAbelian(0, 3))


def test_finite_table_validation():
    with pytest.raises(InvalidGroup):
        FiniteTable(((0, 1), (1, 1)))
    swapped = FiniteTable(((1, 0), (0, 1)))  # identity stored at index 1
    assert swapped.identity == 1 and swapped.inv(0) == 0
    with pytest.raises(InvalidGroup):
        FiniteTable(((0, 1, 2), (1, 2, 0), (2, 1, 0)))
    Q = quaternion_table()
    assert Q.order == 8 and not Q.is_abelian()
    assert sorted(Q.element_order(x) for x in Q.elements()) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_ball_sizes():
    # counts by hand: Z has 2r+1 elements of length <= r, Z^2 (l1 ball) 2r^2+2r+1
    assert [len(ball(FgAbelian(1), r)) for r in range(4)] == [1, 3, 5, 7]
    assert len(ball(FgAbelian(2), 3)) == 25
    assert len(ball(FgAbelian(3), 3)) == 63
    # free group F_2: 1 + 4 * (3^r - 1) / 2
    assert [len(ball(FreeGroup(2), r)) for r in range(4)] == [1, 5, 17, 53]
    assert len(ball(FreeProduct(FgAbelian(1), FgAbelian(1)), 3)) == 53
    assert [len(ball(MOD, r)) for r in (2, 3, 4)] == [8, 14, 22]
    assert ball(FgAbelian(1), 2) == [FgAbelian(1).vec((k,)) for k in (0, 1, -1, 2, -2)]


def test_modular_group_ball_two():
    a = ((LEFT, FgAbelian(0, 2).vec((), 1)),)
    b = ((RIGHT, FgAbelian(0, 3).vec((), 1)),)
    b2 = ((RIGHT, FgAbelian(0, 3).vec((), 2)),)
    got = set(ball(MOD, 2))
    assert got == {(), a, b, b2, MOD.mul(a, b), MOD.mul(a, b2), MOD.mul(b, a), MOD.mul(b2, a)}


def test_free_product_normal_form():
    a = ((LEFT, FgAbelian(0, 2).vec((), 1)),)
    b = ((RIGHT, FgAbelian(0, 3).vec((), 1)),)
    assert MOD.mul(a, a) == ()
    assert MOD.mul(b, MOD.mul(b, b)) == ()
    ab = MOD.mul(a, b)
    assert MOD.mul(ab, MOD.inv(ab)) == ()
    assert word_length(MOD, ab) == 2
    assert normalize(MOD, [(LEFT, a[0][1]), (LEFT, a[0][1]), (RIGHT, b[0][1])]) == b
    assert power(MOD, ab, 3) == MOD.mul(ab, MOD.mul(ab, ab))


def test_abelian_arithmetic():
    A = FgAbelian(2, 5)
    x = A.vec((1, -2), 3)
    assert A.mul(x, A.inv(x)) == A.identity
    assert A.pow(x, 5) == A.vec((5, -10), 0)
    with pytest.raises(ElementMismatch):
        A.vec((1,), 0)
    assert FgAbelian(0, 1).is_trivial


def test_torsion_cyclic_check():
    assert torsion_cyclic_check(klein_four_table()) == NonCyclicWitness(1, 2)
    w = torsion_cyclic_check(quaternion_table())
    assert isinstance(w, NonCyclicWitness)
    assert torsion_cyclic_check(cyclic_table(6)) == CyclicTorsion(6)
    assert torsion_cyclic_check(FgAbelian(2, 4)) == CyclicTorsion(4)
    assert isinstance(torsion_cyclic_check(FgAbelian(1, (2, 2))), NonCyclicWitness)
    assert torsion_cyclic_check(FreeGroup(2)) == CyclicTorsion(1)
    assert isinstance(torsion_cyclic_check(dihedral_table(3)), (CyclicTorsion, NonCyclicWitness))


def test_noncyclic_witness_is_genuine():
    K = klein_four_table()
    w = torsion_cyclic_check(K)
    gen = {0}
    frontier = [0]
    while frontier:  # subgroup generated by a and b
        x = frontier.pop()
        for g in (w.a, w.b):
            y = K.mul(x, g)
            if y not in gen:
                gen.add(y)
                frontier.append(y)
    assert all(K.element_order(x) < len(gen) for x in gen)


@pytest.mark.parametrize("G", [cyclic_table(5), klein_four_table(), FgAbelian(2, 3), FgAbelian(1, (2, 4)),
                               FreeGroup(2), MOD])
def test_group_json_round_trip(G):
    doc = json.loads(json.dumps(group_to_json(G)))
    H = group_from_json(doc)
    assert H == G
    assert group_sha(H) == group_sha(G)
    for x in ball(G, 2):
        assert element_from_json(G, json.loads(json.dumps(element_to_json(G, x)))) == x


@pytest.mark.parametrize("doc, path", [
    ({"rank": 1}, "$.type"),
    ({"type": "fg_abelian"}, "$.rank"),
    ({"type": "fg_abelian", "rank": "2"}, "$.rank"),
    ({"type": "free_product", "left": {"type": "free", "rank": 1}}, "$.right"),
    ({"type": "free_product", "left": {"type": "free", "rank": 1}, "right": {"type": "bogus"}}, "$.right.type"),
    ({"type": "finite_table", "table": [[0, 1], [1, "x"]]}, "$.table[1]"),
    ({"type": "finite_table", "table": [[0, 1], [1, 1]]}, "$"),
])
def test_group_schema_errors_name_the_path(doc, path):
    with pytest.raises(SchemaError) as exc:
        group_from_json(doc)
    assert exc.value.path == path


def test_element_schema_errors():
    with pytest.raises(SchemaError) as exc:
        element_from_json(FgAbelian(2), {"vec": [1]}, "$.g")
    assert exc.value.path == "$.g.vec"
    with pytest.raises(SchemaError) as exc:
        element_from_json(MOD, {"word": [["L", 1], ["L", 1]]}, "$.x")
    assert exc.value.path == "$.x.word"
    with pytest.raises(SchemaError):
        element_from_json(cyclic_table(3), 7)


words = st.lists(st.tuples(st.sampled_from([LEFT, RIGHT]), st.integers(0, 5)), max_size=10).map(
    lambda ls: normalize(MOD, [(s, MOD.factor(s).vec((), k)) for s, k in ls]))


@settings(max_examples=200, deadline=None)
@given(words, words, words)
def test_free_product_is_a_group(x, y, z):
    assert MOD.contains(x)
    assert MOD.mul(MOD.mul(x, y), z) == MOD.mul(x, MOD.mul(y, z))
    assert MOD.mul(x, MOD.inv(x)) == ()
    assert MOD.mul((), x) == x == MOD.mul(x, ())


free_words = st.lists(st.tuples(st.integers(0, 1), st.sampled_from([-2, -1, 1, 2])), max_size=8).map(
    lambda ls: normalize(FreeGroup(2), ls))


@settings(max_examples=200, deadline=None)
@given(free_words, free_words, free_words)
def test_free_group_is_a_group(x, y, z):
    F = FreeGroup(2)
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.mul(F.inv(x), x) == ()


def test_unsupported_torsion_check():
    class Weird:
        pass

    with pytest.raises(UnsupportedVariant):
        torsion_cyclic_check(Weird())
