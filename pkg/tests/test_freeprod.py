from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from circorder.abelian import IntertwinedOrder
from circorder.errors import ElementMismatch, InvalidOrder, UnsupportedVariant
from circorder.freeprod import (
    FlippedMinimalOrder,
    LexFreeProductOrder,
    _apply,
    _moves,
    coset_intertwine,
    initial_value,
    lex_eval,
    minimal_triple,
    reduce_triple,
)
from circorder.groups import LEFT, RIGHT, FgAbelian, FreeProduct, ball, normalize
from circorder.orders import FiniteRotation, LexicographicOrder, LinearWrap, agreement, validate

Z2, Z3 = FgAbelian(0, 2), FgAbelian(0, 3)
MOD = FreeProduct(Z2, Z3)
a = ((LEFT, Z2.vec((), 1)),)
b = ((RIGHT, Z3.vec((), 1)),)
b2 = ((RIGHT, Z3.vec((), 2)),)
LEX = LexFreeProductOrder(MOD, FiniteRotation(2, 1), FiniteRotation(3, 1))


def word(*letters):
    return normalize(MOD, [(LEFT, Z2.vec((), 1)) if x == "a" else (RIGHT, Z3.vec((), 1 if x == "b" else 2))
                           for x in letters])


def all_normal_forms(t):
    """Every terminal triple reachable by any sequence of moves."""
    seen, out, stack = set(), set(), [t]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        mv = _moves(u)
        if not mv:
            out.add(u)
        for m in mv:
            stack.append(_apply(MOD, u, m))
    return out


def test_worked_example_trace():
    ab = MOD.mul(a, b)
    tr = reduce_triple(MOD, (a, b, ab))
    assert [s.rule for s in tr.steps] == ["R2", "R3"]
    assert tr.minimal == ((), a, b)
    assert LEX(a, b, ab) == 1
    doc = tr.to_json(MOD)
    assert doc["steps"][0]["rule"] == "R2"
    assert doc["minimal"][0] == {"word": []}


def test_initial_conditions():
    e = ()
    assert LEX(e, a, b) == 1 and LEX(e, a, b2) == 1
    assert LEX(e, b, a) == -1
    # restriction to a factor is the factor order
    for x, y, z in itertools.permutations([e, b, b2], 3):
        vals = [w[0][1] if w else Z3.identity for w in (x, y, z)]
        assert LEX(x, y, z) == FiniteRotation(3, 1)(*vals)
    # mixed shapes read off the factor orders
    assert initial_value(MOD, LEX.cG, LEX.cH, (b, b2, a)) == LEX.cH(Z3.identity, b[0][1], b2[0][1])


def test_exhaustive_confluence_on_short_triples():
    words = ball(MOD, 3)
    rng = random.Random(5)
    triples = [tuple(rng.choice(words) for _ in range(3)) for _ in range(300)]
    for t in triples:
        nf = all_normal_forms(t)
        assert len(nf) == 1
        assert nf == {minimal_triple(MOD, t)}


def test_lex_order_validates_and_mutation_breaks_it():
    sample = ball(MOD, 3)
    assert validate(LEX, sample).ok
    flipped = FlippedMinimalOrder(LEX, ((), a, b))
    rep = validate(flipped, sample)
    assert not rep.ok


def test_other_factor_orders():
    c = LexFreeProductOrder(MOD, FiniteRotation(2, 1), FiniteRotation(3, 2))
    assert validate(c, ball(MOD, 3)).ok
    assert agreement(c, LEX, ball(MOD, 2)) is not None
    Z = FgAbelian(1)
    ZZ = FreeProduct(Z, Z)
    lw = LinearWrap(LexicographicOrder(1))
    assert validate(LexFreeProductOrder(ZZ, lw, lw), ball(ZZ, 2)).ok


def test_lex_eval_and_errors():
    assert lex_eval(MOD, LEX.cG, LEX.cH, ((), a, b)) == 1
    with pytest.raises(ElementMismatch):
        LexFreeProductOrder(MOD, FiniteRotation(3, 1), FiniteRotation(3, 1))
    with pytest.raises(UnsupportedVariant):
        reduce_triple(Z2, (Z2.identity,) * 3)
    with pytest.raises(ValueError):
        reduce_triple(MOD, (a, b), strategy="deterministic")
    with pytest.raises(ValueError):
        reduce_triple(MOD, (a, b, ()), strategy="sideways")


letters = st.lists(st.sampled_from("abB"), max_size=8).map(lambda s: word(*["c" if x == "B" else x for x in s]))


@settings(max_examples=300, deadline=None)
@given(letters, letters, letters, st.integers(0, 2 ** 32))
def test_random_strategies_agree(x, y, z, seed):
    t = (x, y, z)
    det = reduce_triple(MOD, t)
    rnd = reduce_triple(MOD, t, "random", random.Random(seed))
    assert det.minimal == rnd.minimal
    assert len(rnd.steps) <= sum(len(w) for w in t)
    for s in rnd.steps:
        assert sum(map(len, s.after)) < sum(map(len, s.before))


@settings(max_examples=200, deadline=None)
@given(letters, letters, letters, letters)
def test_left_invariance_of_values(g, x, y, z):
    gt = tuple(MOD.mul(g, w) for w in (x, y, z))
    assert LEX(x, y, z) == LEX(*gt)


def test_coset_intertwine_reproduces_abelian_intertwined():
    A = FgAbelian(2)
    ic = IntertwinedOrder(A, [A.vec((1, 0)), A.vec((0, 2))], LexicographicOrder(2), FiniteRotation(2, 1))
    co = coset_intertwine(A, lambda *_: 1, ic.lin, lambda x: ic.split(x)[0], lambda x: ic.split(x)[1],
                          check_sample=ball(A, 2))
    assert agreement(co, ic, ball(A, 3)) is None


def test_coset_intertwine_detects_inconsistent_data():
    A = FgAbelian(1)
    lin = LexicographicOrder(1)
    with pytest.raises(InvalidOrder):
        # "cosets" by sign are not cosets of anything
        coset_intertwine(A, lambda *_: 1, lin, lambda x: x.v[0] > 0, lambda x: x, check_sample=ball(A, 2))
