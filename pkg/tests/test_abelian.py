from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circorder.abelian import (
    ArchimedeanWitness,
    IntertwinedOrder,
    NoneUpTo,
    RotationOrder,
    _common_power_abelian,
    archimedean_witness,
    classify,
    classify_label,
    density_search,
    enumerate_cyclic_orders,
    kernel_hnf,
    make_rotation_params,
    perturb_rotation,
    quotient_data,
    random_gl,
    rotation_disagreement,
)
from circorder.algebraic import AlgebraicReal
from circorder.errors import (
    DensitySearchExhausted,
    DependentParameters,
    InvalidOrder,
    PreconditionError,
    UnsupportedVariant,
)
from circorder.groups import FgAbelian, ball, cyclic_table
from circorder.orders import (
    ExplicitTable,
    FiniteRotation,
    LexicographicOrder,
    LinearWrap,
    TranslationOrder,
    agreement,
    validate,
)

from oracles import orient

Z2 = FgAbelian(2)
ZZ2 = FgAbelian(1, 2)
S2, S3 = "sqrt(2) - 1", "sqrt(3) - 1"


def rot(n, m, th, k=0):
    return RotationOrder(make_rotation_params(n, m, th, k))


# -- rotation parameters ------------------------------------------------------


def test_rotation_params_validation():
    p = make_rotation_params(2, 0, [S2, S3])
    assert p.n == 2 and p.k == 0
    assert make_rotation_params(1, 1, [S2]).m == 0  # Z/1 is trivial torsion
    with pytest.raises(InvalidOrder):
        make_rotation_params(1, 4, [S2], 2)  # gcd(2, 4) != 1
    with pytest.raises(InvalidOrder):
        make_rotation_params(1, 0, ["sqrt(2)"])  # not in (0, 1)
    with pytest.raises(InvalidOrder):
        make_rotation_params(2, 0, [S2])


def test_dependent_parameters_carry_a_witness():
    with pytest.raises(DependentParameters) as exc:
        make_rotation_params(2, 0, ["sqrt(2) - 1", "3 - 2*sqrt(2)"])
    coeffs = exc.value.witness
    vals = [AlgebraicReal.rational(1), AlgebraicReal.parse("sqrt(2) - 1"), AlgebraicReal.parse("3 - 2*sqrt(2)")]
    assert sum((v * q for v, q in zip(vals, coeffs)), AlgebraicReal()).is_zero()
    with pytest.raises(DependentParameters):
        make_rotation_params(1, 0, ["1/3"])


def test_rotation_order_against_float_positions():
    c = rot(2, 3, [S2, S3], 2)
    A = c.group
    th = [math.sqrt(2) - 1, math.sqrt(3) - 1]

    def fpos(x):
        return (x.v[0] * th[0] + x.v[1] * th[1] + Fraction(2, 3) * x.t) % 1.0

    sample = ball(A, 2)
    for t in itertools.permutations(sample, 3):
        ps = [float(fpos(x)) for x in t]
        gaps = [abs(a - b) for a, b in itertools.combinations(ps, 2)]
        if min(gaps) > 1e-9:
            assert c(*t) == orient(*ps)


def test_enumerate_cyclic_orders():
    assert [c.k for c in enumerate_cyclic_orders(10)] == [1, 3, 7, 9]
    assert len(enumerate_cyclic_orders(1)) == len(enumerate_cyclic_orders(2)) == 1


# -- quotients and intertwined orders -------------------------------------------


def test_quotient_by_full_rank_kernel():
    qd = quotient_data(Z2, [Z2.vec((1, 1)), Z2.vec((0, 3))])
    assert qd.group == FgAbelian(0, 3)
    # sigma is a homomorphism with kernel K
    for x in ball(Z2, 2):
        for y in ball(Z2, 2):
            assert qd.sigma(Z2.mul(x, y)) == qd.group.mul(qd.sigma(x), qd.sigma(y))
    assert qd.sigma(Z2.vec((1, 1))) == qd.group.identity
    assert qd.sigma(Z2.vec((0, 3))) == qd.group.identity
    for s in qd.group.elements():
        assert qd.sigma(qd.lift(s)) == s


def test_quotient_with_torsion_and_noncyclic_rejection():
    qd = quotient_data(ZZ2, [ZZ2.vec((3,), 1)])
    assert qd.group == FgAbelian(0, 6)
    with pytest.raises(InvalidOrder):
        quotient_data(Z2, [Z2.vec((2, 0)), Z2.vec((0, 2))])  # Z/2 x Z/2


def test_kernel_hnf():
    assert kernel_hnf(Z2, [Z2.vec((1, 1)), Z2.vec((0, 3))]) == [[1, 1], [0, 3]]
    assert kernel_hnf(Z2, [Z2.vec((2, 4)), Z2.vec((1, 1))]) == [[1, 1], [0, 2]]


def coset_oracle(lin, quot_val, coset, kcoord):
    """Intertwined value from explicit coset data (same-coset ties broken by ``lin``)."""

    def val(a, b, c):
        if len({a, b, c}) < 3:
            return 0
        sa, sb, sc = coset(a), coset(b), coset(c)
        ka, kb, kc = kcoord(a), kcoord(b), kcoord(c)
        if len({sa, sb, sc}) == 3:
            return quot_val(sa, sb, sc)
        lt = lin.less
        if sa == sb == sc:
            return 1 if lt(ka, kb) + lt(kb, kc) + lt(kc, ka) == 2 else -1
        if sa == sb:
            return 1 if lt(ka, kb) else -1
        if sb == sc:
            return 1 if lt(kb, kc) else -1
        return 1 if lt(kc, ka) else -1

    return val


def test_intertwined_full_rank_matches_coset_oracle():
    lin = LexicographicOrder(2)
    c = IntertwinedOrder(Z2, [Z2.vec((1, 0)), Z2.vec((0, 2))], lin, FiniteRotation(2, 1))
    K2 = FgAbelian(2)
    oracle = coset_oracle(lin, lambda *_: 1 / 0, lambda x: x.v[1] % 2,
                          lambda x: K2.vec((x.v[0], (x.v[1] - x.v[1] % 2) // 2)))
    for t in itertools.permutations(ball(Z2, 2), 3):
        assert c(*t) == oracle(*t)
    assert c(Z2.vec((0, 0)), Z2.vec((1, 0)), Z2.vec((0, 1))) == 1


def test_intertwined_rank_one_matches_coset_oracle():
    lin = LexicographicOrder(1)
    q = rot(1, 0, [S2])
    c = IntertwinedOrder(Z2, [Z2.vec((1, 0))], lin, q)
    Q = q.group
    qd = c.quotient
    # quotient coordinate is +-y; fix the sign from sigma
    sgn = qd.sigma(Z2.vec((0, 1))).v[0]
    oracle = coset_oracle(lin, lambda a, b, d: q(Q.vec((a,)), Q.vec((b,)), Q.vec((d,))),
                          lambda x: sgn * x.v[1], lambda x: FgAbelian(1).vec((x.v[0],)))
    for t in itertools.permutations(ball(Z2, 2), 3):
        assert c(*t) == oracle(*t)


def test_intertwined_values_do_not_depend_on_representatives():
    args = (Z2, [Z2.vec((1, 1)), Z2.vec((0, 3))], TranslationOrder([AlgebraicReal.rational(1),
                                                                   AlgebraicReal.sqrt(2)]), FiniteRotation(3, 2))
    a = IntertwinedOrder(*args)
    b = IntertwinedOrder(*args, rep_offset=lambda s: (s.t + 2, -s.t))
    sample = ball(Z2, 3)
    assert agreement(a, b, sample) is None
    assert validate(b, ball(Z2, 2)).ok


def test_intertwined_rejections():
    with pytest.raises(InvalidOrder):
        IntertwinedOrder(Z2, [Z2.vec((1, 0)), Z2.vec((2, 0))], LexicographicOrder(2), FiniteRotation(1, 0))
    with pytest.raises(InvalidOrder):
        IntertwinedOrder(Z2, [Z2.vec((1, 0))], None, rot(1, 0, [S2]))
    with pytest.raises(InvalidOrder):
        IntertwinedOrder(Z2, [Z2.vec((1, 0))], LexicographicOrder(1), FiniteRotation(3, 1))


def test_intertwined_on_torsion_group_validates():
    c = IntertwinedOrder(ZZ2, [ZZ2.vec((3,), 1)], LexicographicOrder(1), FiniteRotation(6, 5))
    assert validate(c, ball(ZZ2, 3)).ok


def test_classify():
    assert classify(rot(2, 0, [S2, S3])).kind == "min"
    assert classify(FiniteRotation(5, 2)).kind == "min"
    assert classify(LinearWrap(LexicographicOrder(2))).kind == "fin"
    full = IntertwinedOrder(Z2, [Z2.vec((1, 1)), Z2.vec((0, 3))], LexicographicOrder(2), FiniteRotation(3, 1))
    cl = classify(full)
    assert (cl.kind, cl.index, cl.kernel_hnf) == ("fin", 3, ((1, 1), (0, 3)))
    partial = IntertwinedOrder(Z2, [Z2.vec((1, 0))], LexicographicOrder(1), rot(1, 0, [S2]))
    assert classify(partial).kind == "blowdown"
    assert classify_label(partial) == "Blowdown(K=[[1, 0]])"
    with pytest.raises(UnsupportedVariant):
        classify(ExplicitTable(cyclic_table(3), {(1, 2): 1}))


# -- density and perturbation ---------------------------------------------------


def test_density_for_linear_wrap_and_rotations():
    c = LinearWrap(LexicographicOrder(2, [1, -1]))
    p = density_search(c, ball(Z2, 2))
    assert agreement(c, RotationOrder(p), ball(Z2, 2)) is None
    r = rot(2, 0, [S2, S3])
    assert density_search(r, ball(Z2, 2)) == r.params
    assert density_search(FiniteRotation(5, 3), []).k == 3


def test_density_search_exhaustion():
    c = IntertwinedOrder(Z2, [Z2.vec((1, 0)), Z2.vec((0, 2))], LexicographicOrder(2), FiniteRotation(2, 1))
    with pytest.raises(DensitySearchExhausted):
        density_search(c, ball(Z2, 4), budget=1)


def test_perturbation_and_disagreement():
    c = rot(1, 0, [S2])
    sample = ball(c.group, 3)
    pert = perturb_rotation(c, sample)
    assert agreement(c, RotationOrder(pert.params), sample) is None
    d = rotation_disagreement(c.params, pert.params)
    assert d is not None and d.first != d.second
    assert rotation_disagreement(c.params, c.params) is None
    with pytest.raises(PreconditionError):
        perturb_rotation(RotationOrder(make_rotation_params(0, 5, [], 2)), [])


# -- archimedean --------------------------------------------------------------------


def test_archimedean_small_cases():
    c = rot(2, 0, [S2, S3])
    g, h = Z2.vec((1, 0)), Z2.vec((0, 1))
    res = archimedean_witness(c, g, h)
    assert isinstance(res, ArchimedeanWitness)
    # brute-force the smallest n
    e = Z2.identity
    n = next(n for n in range(2, 101) if c(e, Z2.pow(g, n), h) != c(e, g, h))
    assert res.n == n
    with pytest.raises(PreconditionError):
        archimedean_witness(c, g, Z2.vec((3, 0)))
    with pytest.raises(PreconditionError):
        archimedean_witness(c, e, h)


def test_common_power():
    A = FgAbelian(2, 4)
    assert _common_power_abelian(A, A.vec((2, 4), 0), A.vec((3, 6), 0))
    assert not _common_power_abelian(A, A.vec((1, 0), 0), A.vec((0, 1), 0))
    assert _common_power_abelian(A, A.vec((0, 0), 1), A.vec((0, 0), 3))
    # (2,0;1) and (4,0;2) are both powers of (2,0;1); (2,0;1), (4,0;0) need (2,0;t) with t=1 and 2t=0: no
    assert _common_power_abelian(A, A.vec((2, 0), 1), A.vec((4, 0), 2))
    assert not _common_power_abelian(A, A.vec((2, 0), 1), A.vec((4, 0), 0))


def test_random_gl():
    gen = np.random.default_rng(1)
    for _ in range(10):
        M = random_gl(gen, 2)
        assert abs(round(np.linalg.det(np.array(M)))) == 1
        assert M != [[1, 0], [0, 1]]


@settings(max_examples=20, deadline=None)
@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_archimedean_pairs_on_rotations(a, b):
    A = Z2
    g, h = A.vec(a), A.vec(b)
    if g == A.identity or h == A.identity or g == h or _common_power_abelian(A, g, h):
        return
    res = archimedean_witness(rot(2, 0, [S2, S3]), g, h, N=1000)
    assert isinstance(res, ArchimedeanWitness)
