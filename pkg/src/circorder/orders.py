"""Circular and linear orders: value model, generic evaluators and checks.

A circular order is a function ``c(x, y, z) in {-1, 0, +1}`` on triples of
group elements.  Every order class here derives from :class:`CircularOrder`;
the base class handles membership checks and degenerate triples and defers
nondegenerate triples to ``_nondegenerate``.

Families specific to abelian groups and free products live in
:mod:`circorder.abelian` and :mod:`circorder.freeprod`.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np
import sympy

from .algebraic import AlgebraicReal, rational_dependency
from .errors import (
    CutCompatibilityError,
    DependentParameters,
    ElementMismatch,
    InvalidOrder,
    NotAutomorphism,
    UnsupportedVariant,
)
from .groups import FgAbelian, FiniteTable, Group, Vec, check_element, cyclic_table


def orientation(p, q, r) -> int:
    """Orientation of three distinct comparable values read around a circle.

    +1 for cyclic rotations of ``p < q < r``, -1 for those of ``p < r < q``.
    """
    n = (p < q) + (q < r) + (r < p)
    return 1 if n == 2 else -1


class CircularOrder:
    group: Group

    def __call__(self, x, y, z) -> int:
        for a in (x, y, z):
            check_element(self.group, a)
        return self._eval(x, y, z)

    def _eval(self, x, y, z) -> int:
        if x == y or y == z or x == z:
            return 0
        return self._nondegenerate(x, y, z)

    def _nondegenerate(self, x, y, z) -> int:
        raise NotImplementedError

    def table_on(self, sample: Sequence) -> np.ndarray:
        """Values on all ordered triples of ``sample`` as an int8 array."""
        n = len(sample)
        out = np.zeros((n, n, n), dtype=np.int8)
        for i, j, k in itertools.permutations(range(n), 3):
            out[i, j, k] = self._eval(sample[i], sample[j], sample[k])
        return out


def evaluate(c: CircularOrder, t: Sequence) -> int:
    """Value of the order on the triple ``t``."""
    x, y, z = t
    return c(x, y, z)


class PositionOrder(CircularOrder):
    """Order read off from injective positions on a circle (any totally ordered keys)."""

    def position(self, x):
        raise NotImplementedError

    def _nondegenerate(self, x, y, z):
        return orientation(self.position(x), self.position(y), self.position(z))

    def table_on(self, sample):
        n = len(sample)
        if n < 3:
            return np.zeros((n, n, n), dtype=np.int8)
        pos = [self.position(x) for x in sample]
        order = sorted(range(n), key=functools.cmp_to_key(lambda i, j: -1 if pos[i] < pos[j] else (1 if pos[j] < pos[i] else 0)))
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(n)
        if len(set(rank.tolist())) != n or any(not (pos[order[i]] < pos[order[i + 1]]) for i in range(n - 1)):
            raise InvalidOrder("positions are not injective on the sample")
        a = rank[:, None, None]
        b = rank[None, :, None]
        c = rank[None, None, :]
        cnt = (a < b).astype(np.int8) + (b < c) + (c < a)
        out = np.where(cnt == 2, 1, -1).astype(np.int8)
        idx = np.arange(n)
        degen = (idx[:, None, None] == idx[None, :, None]) | (idx[None, :, None] == idx[None, None, :]) | (
            idx[:, None, None] == idx[None, None, :])
        out[degen] = 0
        return out


# ---------------------------------------------------------------------------
# Linear orders


class LinearOrder:
    group: Group

    def compare(self, a, b) -> int:
        """-1 if a < b, 0 if equal, +1 if a > b."""
        raise NotImplementedError

    def less(self, a, b) -> bool:
        return self.compare(a, b) < 0

    def key(self):
        return functools.cmp_to_key(self.compare)

    def positive(self, g) -> bool:
        return self.compare(self.group.identity, g) < 0


class TranslationOrder(LinearOrder):
    """Order on ``Z^r``: ``a < b`` iff ``(b - a) . x > 0``.

    The entries of ``x`` must be linearly independent over Q so that distinct
    vectors never tie.
    """

    def __init__(self, x: Sequence[AlgebraicReal]):
        self.x = tuple(v if isinstance(v, AlgebraicReal) else AlgebraicReal.rational(v) for v in x)
        if not self.x:
            raise InvalidOrder("translation order needs rank >= 1")
        if any(v.is_zero() for v in self.x):
            raise InvalidOrder("translation distances must be nonzero")
        dep = rational_dependency(list(self.x))
        if dep is not None:
            raise DependentParameters(f"translation distances are Q-dependent: {dep}", dep)
        self.group = FgAbelian(len(self.x))
        self._floats = [v.enclosure() for v in self.x]

    def compare(self, a, b) -> int:
        d = [bb - aa for aa, bb in zip(a.v, b.v)]
        if not any(d):
            return 0
        # interval fast path
        lo = hi = 0.0
        for di, (l, h) in zip(d, self._floats):
            if di > 0:
                lo += di * l
                hi += di * h
            elif di < 0:
                lo += di * h
                hi += di * l
        slack = 1e-9 * (abs(lo) + abs(hi) + 1)
        if lo - slack > 0:
            return -1
        if hi + slack < 0:
            return 1
        s = AlgebraicReal()
        for di, xi in zip(d, self.x):
            if di:
                s = s + xi * di
        return -s.sign()

    def __repr__(self):
        return f"TranslationOrder({[str(v) for v in self.x]})"


class LexicographicOrder(LinearOrder):
    """Lexicographic order on ``Z^rank``; coordinate ``i`` compared with sign ``signs[i]``."""

    def __init__(self, rank: int, signs: Sequence[int] | None = None):
        signs = tuple(signs) if signs is not None else (1,) * rank
        if len(signs) != rank or any(s not in (1, -1) for s in signs):
            raise InvalidOrder("signs must be a vector of +-1 of length rank")
        self.rank = rank
        self.signs = signs
        self.group = FgAbelian(rank)

    def compare(self, a, b) -> int:
        for s, x, y in zip(self.signs, a.v, b.v):
            if x != y:
                return -s if x < y else s
        return 0

    def __repr__(self):
        return f"LexicographicOrder({self.rank}, {list(self.signs)})"


class ConeOrder(LinearOrder):
    """Order given by a finite positive cone: ``a < b`` iff ``a^-1 b`` is in ``cone``.

    Only comparisons whose difference (or its inverse) lies in the cone are
    defined; anything else raises :class:`ElementMismatch`.
    """

    def __init__(self, group: Group, cone: Iterable):
        self.group = group
        self.cone = frozenset(cone)
        for g in self.cone:
            check_element(group, g)
            if group.inv(g) in self.cone or g == group.identity:
                raise InvalidOrder(f"cone contains {g!r} together with its inverse or is not proper")

    def compare(self, a, b) -> int:
        if a == b:
            return 0
        d = self.group.mul(self.group.inv(a), b)
        if d in self.cone:
            return -1
        if self.group.inv(d) in self.cone:
            return 1
        raise ElementMismatch(f"{a!r}, {b!r}: difference outside the cone's domain")


class LinearWrap(CircularOrder):
    """The circular order of a linear order: +1 exactly on cyclic rotations of increasing triples."""

    def __init__(self, lin: LinearOrder):
        self.lin = lin
        self.group = lin.group

    def _nondegenerate(self, x, y, z):
        lt = self.lin.less
        n = lt(x, y) + lt(y, z) + lt(z, x)
        return 1 if n == 2 else -1

    def __repr__(self):
        return f"LinearWrap({self.lin!r})"


# ---------------------------------------------------------------------------
# Finite cyclic rotations


def _cyclic_residue_fn(group: Group, m: int) -> Callable[[Any], int]:
    if isinstance(group, FgAbelian):
        if group.rank != 0 or group.torsion != (m if m > 1 else 0):
            raise UnsupportedVariant(f"FiniteRotation({m}) needs Z/{m}, got {group}")
        return lambda x: x.t
    if isinstance(group, FiniteTable):
        if group.table != cyclic_table(m).table:
            raise UnsupportedVariant("FiniteRotation on a table needs the addition table of Z/m")
        return lambda x: x
    raise UnsupportedVariant(f"FiniteRotation is not defined on {type(group).__name__}")


class FiniteRotation(PositionOrder):
    """Order on ``Z/m`` placing residue ``a`` at ``a*k/m`` on the circle."""

    def __init__(self, m: int, k: int, group: Group | None = None):
        if m < 1:
            raise InvalidOrder("m must be positive")
        if not (0 <= k < max(m, 1)) or math.gcd(k, m) != 1:
            raise InvalidOrder(f"k={k} must satisfy 0 <= k < m and gcd(k, m) = 1")
        self.m = m
        self.k = k
        self.group = group if group is not None else FgAbelian(0, m)
        self._res = _cyclic_residue_fn(self.group, m)

    def position(self, x) -> int:
        return (self._res(x) * self.k) % self.m

    def __repr__(self):
        return f"FiniteRotation(m={self.m}, k={self.k})"


# ---------------------------------------------------------------------------
# Explicit tables


def _pair_orbit(G: Group, a, b):
    """The six (pair, sign) encodings of the triple (e, a, b) under permutations."""
    ai, bi = G.inv(a), G.inv(b)
    aib = G.mul(ai, b)
    bia = G.mul(bi, a)
    return (
        ((a, b), 1),
        ((b, a), -1),
        ((aib, ai), 1),
        ((ai, aib), -1),
        ((bi, bia), 1),
        ((bia, bi), -1),
    )


class ExplicitTable(CircularOrder):
    """Order stored as a finite table.

    Homogeneous mode (default) stores ``c(e, a, b)`` once per orbit of the
    permutation action on triples; any triple ``(x, y, z)`` is looked up as
    ``(e, x^-1 y, x^-1 z)``.  Triple mode (:meth:`from_triples`) stores raw
    triples of a sample with no invariance assumed.
    """

    def __init__(self, group: Group, pairs: Mapping | Iterable = (), *, _triples=None):
        self.group = group
        self.homogeneous = _triples is None
        self._store: dict = {}
        if _triples is not None:
            self._store = _triples
            return
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        for (a, b), v in items:
            self._insert(a, b, int(v))

    def _insert(self, a, b, v):
        G = self.group
        if v not in (1, -1) or a == b or G.identity in (a, b):
            raise InvalidOrder(f"bad table entry c(e, {a!r}, {b!r}) = {v}")
        for key, s in _pair_orbit(G, a, b):
            if key in self._store:
                if self._store[key] * s != v:
                    raise InvalidOrder(f"table entries for c(e, {a!r}, {b!r}) conflict")
                return
        self._store[(a, b)] = v

    @classmethod
    def from_triples(cls, group: Group, triples: Mapping) -> "ExplicitTable":
        store: dict = {}
        for (x, y, z), v in triples.items():
            v = int(v)
            if len({x, y, z}) < 3:
                if v != 0:
                    raise InvalidOrder(f"degenerate triple {(x, y, z)!r} with value {v}")
                continue
            for t, s in (((x, y, z), 1), ((y, z, x), 1), ((z, x, y), 1),
                         ((x, z, y), -1), ((z, y, x), -1), ((y, x, z), -1)):
                if t in store and store[t] != s * v:
                    raise InvalidOrder(f"triple {(x, y, z)!r} conflicts with its permutations")
                store[t] = s * v
        return cls(group, _triples=store)

    @classmethod
    def from_order(cls, c: CircularOrder, sample: Sequence) -> "ExplicitTable":
        """Record ``c(e, a, b)`` for all pairs of nonidentity sample elements."""
        G = c.group
        e = G.identity
        pairs = {}
        rest = [a for a in sample if a != e]
        for a, b in itertools.combinations(rest, 2):
            pairs[(a, b)] = c._eval(e, a, b)
        return cls(G, pairs)

    def pairs(self) -> dict:
        """Stored representatives (homogeneous mode)."""
        return dict(self._store)

    def _nondegenerate(self, x, y, z):
        if not self.homogeneous:
            try:
                return self._store[(x, y, z)]
            except KeyError:
                raise ElementMismatch(f"triple {(x, y, z)!r} outside the table") from None
        G = self.group
        xi = G.inv(x)
        a, b = G.mul(xi, y), G.mul(xi, z)
        for key, s in _pair_orbit(G, a, b):
            v = self._store.get(key)
            if v is not None:
                return v * s
        raise ElementMismatch(f"triple {(x, y, z)!r} outside the table")

    def with_flipped(self, a, b) -> "ExplicitTable":
        """Copy with the stored value for ``c(e, a, b)`` negated (mutation testing)."""
        if not self.homogeneous:
            raise UnsupportedVariant("with_flipped needs a homogeneous table")
        store = dict(self._store)
        for key, s in _pair_orbit(self.group, a, b):
            if key in store:
                store[key] = -store[key]
                out = ExplicitTable(self.group)
                out._store = store
                return out
        raise ElementMismatch(f"no entry for ({a!r}, {b!r})")

    def __repr__(self):
        mode = "pairs" if self.homogeneous else "triples"
        return f"ExplicitTable({len(self._store)} {mode})"


# ---------------------------------------------------------------------------
# Automorphisms


class Automorphism:
    group: Group

    def __call__(self, x):
        raise NotImplementedError

    def inverse(self) -> "Automorphism":
        raise NotImplementedError

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other``."""
        raise NotImplementedError


def _int_det(rows) -> int:
    if not rows:
        return 1
    return int(sympy.Matrix(rows).det())


class AbelianAutomorphism(Automorphism):
    """``(v, t) -> (M v, h . v + u t mod m)`` on ``Z^n x Z/m``."""

    def __init__(self, group: FgAbelian, matrix, hom=None, unit: int = 1):
        if not isinstance(group, FgAbelian) or isinstance(group.torsion, tuple):
            raise UnsupportedVariant("abelian automorphisms need FgAbelian with cyclic torsion")
        n, m = group.rank, group.m
        M = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(M) != n or any(len(r) != n for r in M):
            raise NotAutomorphism(f"matrix must be {n}x{n}")
        if _int_det(M) not in (1, -1):
            raise NotAutomorphism("matrix is not invertible over Z (determinant not +-1)")
        h = tuple(int(x) for x in hom) if hom is not None else (0,) * n
        if len(h) != n:
            raise NotAutomorphism("hom vector has wrong length")
        if m:
            h = tuple(x % m for x in h)
            unit = unit % m
            if math.gcd(unit, m) != 1:
                raise NotAutomorphism(f"{unit} is not a unit mod {m}")
        else:
            if any(h):
                raise NotAutomorphism("hom part must vanish without torsion")
            unit = 1 if m == 0 else unit
        self.group = group
        self.matrix = M
        self.hom = h
        self.unit = unit

    def __call__(self, x: Vec) -> Vec:
        v = tuple(sum(r[j] * x.v[j] for j in range(len(x.v))) for r in self.matrix)
        m = self.group.m
        t = (sum(a * b for a, b in zip(self.hom, x.v)) + self.unit * x.t) % m if m else 0
        return Vec(v, t)

    def inverse(self) -> "AbelianAutomorphism":
        n, m = self.group.rank, self.group.m
        Minv = sympy.Matrix(self.matrix).inv() if n else sympy.Matrix()
        Mi = tuple(tuple(int(Minv[i, j]) for j in range(n)) for i in range(n))
        if not m:
            return AbelianAutomorphism(self.group, Mi)
        ui = pow(self.unit, -1, m)
        # t = u^-1 (s - h . M^-1 w)
        hM = [sum(self.hom[i] * Mi[i][j] for i in range(n)) for j in range(n)]
        return AbelianAutomorphism(self.group, Mi, [(-ui * x) % m for x in hM], ui)

    def compose(self, other: "AbelianAutomorphism") -> "AbelianAutomorphism":
        n, m = self.group.rank, self.group.m
        A, B = self.matrix, other.matrix
        AB = [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if not m:
            return AbelianAutomorphism(self.group, AB)
        hB = [sum(self.hom[k] * B[k][j] for k in range(n)) for j in range(n)]
        h = [(hB[j] + self.unit * other.hom[j]) % m for j in range(n)]
        return AbelianAutomorphism(self.group, AB, h, self.unit * other.unit)

    def is_identity(self) -> bool:
        n = self.group.rank
        eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return self.matrix == eye and not any(self.hom) and (self.unit == 1 or not self.group.m)

    def __repr__(self):
        return f"AbelianAutomorphism({[list(r) for r in self.matrix]}, hom={list(self.hom)}, unit={self.unit})"


class TableAutomorphism(Automorphism):
    def __init__(self, group: FiniteTable, perm: Sequence[int]):
        perm = tuple(int(x) for x in perm)
        n = group.order
        if sorted(perm) != list(range(n)):
            raise NotAutomorphism("map is not a bijection of the table")
        T = group.table
        for a in range(n):
            for b in range(n):
                if perm[T[a][b]] != T[perm[a]][perm[b]]:
                    raise NotAutomorphism(f"map is not a homomorphism at ({a}, {b})")
        self.group = group
        self.perm = perm

    def __call__(self, x):
        return self.perm[x]

    def inverse(self):
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return TableAutomorphism(self.group, inv)

    def compose(self, other):
        return TableAutomorphism(self.group, [self.perm[other.perm[i]] for i in range(len(self.perm))])

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))

    def __repr__(self):
        return f"TableAutomorphism({list(self.perm)})"


class AutActed(CircularOrder):
    """``(rho . c)(x, y, z) = c(rho^-1 x, rho^-1 y, rho^-1 z)``."""

    def __init__(self, base: CircularOrder, rho: Automorphism):
        if rho.group != base.group:
            raise ElementMismatch("automorphism and order live on different groups")
        self.base = base
        self.rho = rho
        self.rho_inv = rho.inverse()
        self.group = base.group

    def _nondegenerate(self, x, y, z):
        r = self.rho_inv
        return self.base._eval(r(x), r(y), r(z))

    def table_on(self, sample):
        return self.base.table_on([self.rho_inv(x) for x in sample])

    def __repr__(self):
        return f"AutActed({self.base!r}, {self.rho!r})"


def aut_act(rho: Automorphism, c: CircularOrder) -> CircularOrder:
    return AutActed(c, rho)


# ---------------------------------------------------------------------------
# Validation


AXIOMS = ("DV", "C", "H", "IC", "AT")


@dataclass
class Violation:
    kind: str
    witness: tuple

    def to_json(self, fmt=repr):
        return {"kind": self.kind, "witness": [fmt(x) for x in self.witness]}


@dataclass
class ValidationReport:
    checked_triples: int = 0
    checked_quadruples: int = 0
    checked_homogeneity: int = 0
    skipped_homogeneity: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def counts(self) -> dict:
        out = {k: 0 for k in AXIOMS}
        for v in self.violations:
            out[v.kind] += 1
        return out

    def to_json(self, fmt=repr) -> dict:
        return {
            "ok": self.ok,
            "checked_triples": self.checked_triples,
            "checked_quadruples": self.checked_quadruples,
            "checked_homogeneity": self.checked_homogeneity,
            "skipped_homogeneity": self.skipped_homogeneity,
            "violations": [v.to_json(fmt) for v in self.violations],
        }


def _index_sample(sample: Sequence) -> dict:
    index = {}
    for i, x in enumerate(sample):
        if x in index:
            raise ValueError(f"sample contains {x!r} twice")
        index[x] = i
    return index


def validate(c: CircularOrder, sample: Sequence, max_violations: int | None = None) -> ValidationReport:
    """Check the order axioms on every triple and quadruple of ``sample``.

    (DV), (AT), (IC) on all ordered triples, the cocycle identity (C) on all
    ordered quadruples, and left invariance (H) for every ``g`` in the sample
    on the triples whose translates stay inside the sample; the rest are
    counted in ``skipped_homogeneity``.
    """
    sample = list(sample)
    for x in sample:
        check_element(c.group, x)
    index = _index_sample(sample)
    n = len(sample)
    rep = ValidationReport()
    if n == 0:
        return rep
    T = c.table_on(sample)
    viol = rep.violations

    def add(kind, idx):
        if max_violations is None or len(viol) < max_violations:
            viol.append(Violation(kind, tuple(sample[i] for i in idx)))

    ar = np.arange(n)
    degen = (ar[:, None, None] == ar[None, :, None]) | (ar[None, :, None] == ar[None, None, :]) | (
        ar[:, None, None] == ar[None, None, :])
    rep.checked_triples = n ** 3
    for idx in np.argwhere((T == 0) != degen):
        add("DV", idx)
    for idx in np.argwhere(T != -np.transpose(T, (0, 2, 1))):
        add("AT", idx)
    for idx in np.argwhere(T != np.transpose(T, (1, 2, 0))):
        add("IC", idx)

    Ti = T.astype(np.int16)
    for i in range(n):
        D = Ti - Ti[i][None, :, :] + Ti[i][:, None, :] - Ti[i][:, :, None]
        for j, k, l in np.argwhere(D != 0):
            add("C", (i, j, k, l))
    rep.checked_quadruples = n ** 4

    for gi, g in enumerate(sample):
        moved = np.array([index.get(c.group.mul(g, x), -1) for x in sample])
        inside = np.flatnonzero(moved >= 0)
        m = len(inside)
        rep.checked_homogeneity += m ** 3
        rep.skipped_homogeneity += n ** 3 - m ** 3
        if m == 0:
            continue
        src = T[np.ix_(inside, inside, inside)]
        dst = T[np.ix_(moved[inside], moved[inside], moved[inside])]
        for a, b, d in np.argwhere(src != dst):
            if max_violations is None or len(viol) < max_violations:
                viol.append(Violation("H", (g, sample[inside[a]], sample[inside[b]], sample[inside[d]])))
    return rep


# ---------------------------------------------------------------------------
# Cuts


class CutOrder:
    """Linear order on ``G - {p}``: ``x <_p y`` iff ``c(y, p, x) = +1``."""

    def __init__(self, c: CircularOrder, p):
        check_element(c.group, p)
        self.c = c
        self.p = p

    def less(self, x, y) -> bool:
        if self.p in (x, y):
            raise ElementMismatch("the cut point itself is not ordered")
        return self.c._eval(y, self.p, x) == 1

    def compare(self, x, y) -> int:
        if x == y:
            return 0
        return -1 if self.less(x, y) else 1

    def sort(self, elements: Iterable) -> list:
        return sorted((x for x in elements if x != self.p), key=functools.cmp_to_key(self.compare))


def cut_order_at(c: CircularOrder, p) -> CutOrder:
    return CutOrder(c, p)


def cut_sequence(c: CircularOrder, p, sample: Iterable) -> list:
    """Sample elements other than ``p`` listed by the cut order at ``p``."""
    return CutOrder(c, p).sort(sample)


def _as_less(cut) -> Callable[[Any, Any], bool]:
    if hasattr(cut, "less"):
        return cut.less
    return cut


def cocycle_from_cuts(group: Group, cuts: Mapping, sample: Sequence | None = None) -> ExplicitTable:
    """Rebuild a circular order from its cut orders on a finite sample.

    ``cuts`` maps each basepoint ``p`` to a comparator (an object with
    ``less(x, y)`` or a plain ``less`` callable).  The cut orders must be
    strict total orders and pairwise compatible: the order at ``q`` is the
    order at ``p`` cut at ``q``.  Otherwise :class:`CutCompatibilityError`
    is raised with a witness ``(x, y, p, q)``.
    """
    sample = list(sample) if sample is not None else list(cuts)
    for x in sample:
        check_element(group, x)
    seqs = {}
    for p in sample:
        if p not in cuts:
            raise CutCompatibilityError(f"no cut order at {p!r}", (None, None, p, None))
        less = _as_less(cuts[p])
        rest = [x for x in sample if x != p]
        for x, y in itertools.combinations(rest, 2):
            if less(x, y) == less(y, x):
                raise CutCompatibilityError(f"cut at {p!r} is not total on ({x!r}, {y!r})", (x, y, p, p))

        def cmp(x, y, less=less):
            return -1 if less(x, y) else 1

        seq = sorted(rest, key=functools.cmp_to_key(cmp))
        for i, j in itertools.combinations(range(len(seq)), 2):
            if not less(seq[i], seq[j]):
                raise CutCompatibilityError(f"cut at {p!r} is not transitive", (seq[i], seq[j], p, p))
        seqs[p] = seq
    for p, q in itertools.permutations(sample, 2):
        sp = seqs[p]
        at = sp.index(q)
        expected = sp[at + 1:] + [p] + sp[:at]
        actual = seqs[q]
        if expected != actual:
            pos = {x: i for i, x in enumerate(actual)}
            for i, j in itertools.combinations(range(len(expected)), 2):
                x, y = expected[i], expected[j]
                if pos[x] > pos[y]:
                    raise CutCompatibilityError(
                        f"cut orders at {p!r} and {q!r} differ on ({x!r}, {y!r}) by more than a cut",
                        (x, y, p, q))
    triples = {}
    for x, y, z in itertools.permutations(sample, 3):
        rank = {v: i for i, v in enumerate(seqs[y])}
        triples[(x, y, z)] = 1 if rank[z] < rank[x] else -1
    return ExplicitTable.from_triples(group, triples)


# ---------------------------------------------------------------------------
# Linearity, bi-invariance, agreement


@dataclass(frozen=True)
class Linear:
    cone: tuple
    skipped: int = 0


@dataclass(frozen=True)
class GenuineWitness:
    """``g, h`` in the candidate cone with ``gh`` outside it.

    ``reason`` is ``"closure"`` for that case and ``"involution"`` when
    ``g = h`` is a nontrivial involution (no cone can contain ``g`` or its
    inverse, so the order is not linear).
    """

    g: Any
    h: Any
    reason: str = "closure"


def is_linear_on(c: CircularOrder, sample: Sequence):
    G = c.group
    e = G.identity
    sample = list(sample)
    members = set(sample)
    P = [g for g in sample if g != e and c._eval(G.inv(g), e, g) == 1]
    Pset = set(P)
    skipped = 0
    for g in P:
        for h in P:
            gh = G.mul(g, h)
            if gh not in members:
                skipped += 1
                continue
            if gh not in Pset:
                return GenuineWitness(g, h)
    for g in sample:
        if g != e and G.inv(g) == g:
            return GenuineWitness(g, g, "involution")
    return Linear(tuple(P), skipped)


@dataclass(frozen=True)
class BiInvarianceWitness:
    g: Any
    triple: tuple


def bi_invariance_check(c: CircularOrder, sample: Sequence):
    """First ``(g, triple)`` where right multiplication by ``g`` changes the value, else None."""
    sample = list(sample)
    if not sample:
        return None
    index = _index_sample(sample)
    T = c.table_on(sample)
    G = c.group
    for g in sample:
        moved = np.array([index.get(G.mul(x, g), -1) for x in sample])
        inside = np.flatnonzero(moved >= 0)
        if len(inside) < 3:
            continue
        src = T[np.ix_(inside, inside, inside)]
        dst = T[np.ix_(moved[inside], moved[inside], moved[inside])]
        bad = np.argwhere(src != dst)
        if len(bad):
            a, b, d = bad[0]
            return BiInvarianceWitness(g, (sample[inside[a]], sample[inside[b]], sample[inside[d]]))
    return None


@dataclass(frozen=True)
class Disagreement:
    triple: tuple
    first: int
    second: int


def agreement(c1: CircularOrder, c2: CircularOrder, sample: Sequence):
    """None if the orders agree on every triple of ``sample``, else the first
    :class:`Disagreement` in lexicographic order of index triples ``i < j < k``."""
    if c1.group != c2.group:
        raise ElementMismatch("orders live on different groups")
    sample = list(sample)
    n = len(sample)
    if n < 3:
        return None
    T1 = c1.table_on(sample)
    T2 = c2.table_on(sample)
    diff = T1 != T2
    ar = np.arange(n)
    inc = (ar[:, None, None] < ar[None, :, None]) & (ar[None, :, None] < ar[None, None, :])
    bad = np.argwhere(diff & inc)
    if not len(bad):
        return None
    i, j, k = bad[0]
    return Disagreement((sample[i], sample[j], sample[k]), int(T1[i, j, k]), int(T2[i, j, k]))
