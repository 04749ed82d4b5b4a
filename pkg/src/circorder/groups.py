"""Group descriptors with canonical normal forms.

Four families are supported, each as an immutable dataclass exposing
``identity``, ``mul``, ``inv``, ``contains`` and ``gen_letters`` (the ordered
list of generators and their inverses used for ball enumeration):

* :class:`FiniteTable` -- elements are ``int`` indices into a Cayley table.
* :class:`FgAbelian` -- ``Z^n x Z/m``; elements are :class:`Vec`.
* :class:`FreeGroup` -- elements are tuples of ``(generator, exponent)``
  syllables in reduced form.
* :class:`FreeProduct` -- elements are tuples of ``(side, letter)`` with side
  ``"L"`` or ``"R"``, strictly alternating, letters never the factor identity.

Equality of group elements is equality of normal forms.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import ElementMismatch, InvalidGroup, SchemaError, UnsupportedVariant


class Vec(NamedTuple):
    """Element of ``Z^n x Z/m``: integer vector ``v`` plus torsion residue ``t``."""

    v: tuple[int, ...]
    t: Any = 0  # int for cyclic torsion, tuple of residues for several moduli

    def __repr__(self):
        return f"Vec({list(self.v)}, {self.t})"


def _is_int(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


# ---------------------------------------------------------------------------
# Finite Cayley tables


@dataclass(frozen=True)
class FiniteTable:
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None
    identity: int = field(init=False, compare=False)
    inverses: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", rows)
        n = len(rows)
        if n == 0:
            raise InvalidGroup("empty table")
        arr = np.asarray(rows, dtype=np.int64)
        if arr.shape != (n, n):
            raise InvalidGroup(f"table must be {n}x{n}")
        full = np.arange(n)
        for i in range(n):
            if not np.array_equal(np.sort(arr[i]), full):
                raise InvalidGroup(f"row {i} is not a permutation")
            if not np.array_equal(np.sort(arr[:, i]), full):
                raise InvalidGroup(f"column {i} is not a permutation")
        ids = [i for i in range(n) if np.array_equal(arr[i], full) and np.array_equal(arr[:, i], full)]
        if len(ids) != 1:
            raise InvalidGroup("no unique identity element")
        e = ids[0]
        # associativity: (ab)c == a(bc) for all index triples
        left = arr[arr[:, :, None], np.arange(n)[None, None, :]]  # (ab)c
        right = arr[np.arange(n)[:, None, None], arr[None, :, :]]  # a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = (int(x) for x in bad[0])
            raise InvalidGroup(f"table not associative at ({a}, {b}, {c})")
        inverses = tuple(int(np.flatnonzero(arr[i] == e)[0]) for i in range(n))
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverses", inverses)
        if self.names is not None:
            names = tuple(str(s) for s in self.names)
            if len(names) != n or len(set(names)) != n:
                raise InvalidGroup("names must be distinct and one per element")
            object.__setattr__(self, "names", names)

    @property
    def order(self) -> int:
        return len(self.table)

    def contains(self, x) -> bool:
        return _is_int(x) and 0 <= x < len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def gen_letters(self) -> list[int]:
        return [i for i in range(self.order) if i != self.identity]

    def elements(self) -> list[int]:
        return [self.identity] + self.gen_letters()

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        arr = np.asarray(self.table)
        return bool(np.array_equal(arr, arr.T))


def cyclic_table(m: int) -> FiniteTable:
    if m < 1:
        raise InvalidGroup("cyclic group order must be positive")
    return FiniteTable(tuple(tuple((i + j) % m for j in range(m)) for i in range(m)))


def klein_four_table() -> FiniteTable:
    # index bits: 1 = a, 2 = b, 3 = ab
    return FiniteTable(tuple(tuple(i ^ j for j in range(4)) for i in range(4)),
                       names=("e", "a", "b", "ab"))


def quaternion_table() -> FiniteTable:
    """Q8 with indices 0..7 = 1, -1, i, -i, j, -j, k, -k."""
    unit = {  # product of basis units (1, i, j, k) as (sign, unit)
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def decode(i):
        return (1 if i % 2 == 0 else -1), i // 2

    def encode(sign, u):
        return 2 * u + (0 if sign == 1 else 1)

    rows = []
    for a in range(8):
        sa, ua = decode(a)
        row = []
        for b in range(8):
            sb, ub = decode(b)
            s, u = unit[(ua, ub)]
            row.append(encode(sa * sb * s, u))
        rows.append(tuple(row))
    return FiniteTable(tuple(rows), names=("1", "-1", "i", "-i", "j", "-j", "k", "-k"))


def dihedral_table(n: int) -> FiniteTable:
    """Dihedral group of order 2n; index r + n*s for rotation r, reflection bit s."""
    size = 2 * n
    rows = []
    for a in range(size):
        ra, sa = a % n, a // n
        row = []
        for b in range(size):
            rb, sb = b % n, b // n
            r = (ra + (rb if sa == 0 else -rb)) % n
            row.append(r + n * (sa ^ sb))
        rows.append(tuple(row))
    return FiniteTable(tuple(rows))


# ---------------------------------------------------------------------------
# Z^n x torsion


@dataclass(frozen=True)
class FgAbelian:
    """``Z^rank x Z/torsion``; ``torsion = 0`` means torsion-free.

    ``torsion`` may also be a tuple of moduli (e.g. ``(2, 2)``) describing a
    direct sum of cyclic groups. Such groups are representable so that
    :func:`torsion_cyclic_check` can reject them; orders need an ``int``.
    """

    rank: int
    torsion: Union[int, tuple[int, ...]] = 0

    def __post_init__(self):
        if not _is_int(self.rank) or self.rank < 0:
            raise InvalidGroup("rank must be a nonnegative integer")
        tor = self.torsion
        if isinstance(tor, (list, tuple)):
            mods = tuple(int(x) for x in tor if int(x) != 1)
            if any(x < 0 for x in mods):
                raise InvalidGroup("torsion moduli must be nonnegative")
            if any(x == 0 for x in mods):
                raise InvalidGroup("use rank for free factors, not torsion modulus 0")
            tor = mods[0] if len(mods) == 1 else (0 if not mods else mods)
        elif not _is_int(tor) or tor < 0:
            raise InvalidGroup("torsion must be a nonnegative integer")
        else:
            tor = int(tor)
            if tor == 1:
                tor = 0
        object.__setattr__(self, "rank", int(self.rank))
        object.__setattr__(self, "torsion", tor)

    @property
    def m(self) -> int:
        """Cyclic torsion order (0 if none). Raises for noncyclic moduli."""
        if isinstance(self.torsion, tuple):
            raise UnsupportedVariant(f"torsion {self.torsion} is given as several moduli")
        return self.torsion

    @property
    def moduli(self) -> tuple[int, ...]:
        if isinstance(self.torsion, tuple):
            return self.torsion
        return (self.torsion,) if self.torsion else ()

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.moduli

    @property
    def identity(self) -> Vec:
        t = tuple(0 for _ in self.torsion) if isinstance(self.torsion, tuple) else 0
        return Vec((0,) * self.rank, t)

    def vec(self, v: Sequence[int], t=0) -> Vec:
        x = Vec(tuple(int(a) for a in v), tuple(t) if isinstance(t, (list, tuple)) else int(t))
        if isinstance(self.torsion, tuple):
            x = Vec(x.v, tuple(a % q for a, q in zip(x.t, self.torsion)))
        elif self.torsion:
            x = Vec(x.v, x.t % self.torsion)
        if not self.contains(x):
            raise ElementMismatch(f"{x} is not an element of {self}")
        return x

    def contains(self, x) -> bool:
        if not isinstance(x, tuple) or len(x) != 2:
            return False
        v, t = x
        if not isinstance(v, tuple) or len(v) != self.rank or not all(_is_int(a) for a in v):
            return False
        if isinstance(self.torsion, tuple):
            return (isinstance(t, tuple) and len(t) == len(self.torsion)
                    and all(_is_int(a) and 0 <= a < q for a, q in zip(t, self.torsion)))
        if not _is_int(t):
            return False
        return t == 0 if self.torsion == 0 else 0 <= t < self.torsion

    def mul(self, a: Vec, b: Vec) -> Vec:
        v = tuple(x + y for x, y in zip(a.v, b.v))
        if isinstance(self.torsion, tuple):
            return Vec(v, tuple((x + y) % q for x, y, q in zip(a.t, b.t, self.torsion)))
        return Vec(v, (a.t + b.t) % self.torsion if self.torsion else 0)

    def inv(self, a: Vec) -> Vec:
        v = tuple(-x for x in a.v)
        if isinstance(self.torsion, tuple):
            return Vec(v, tuple((-x) % q for x, q in zip(a.t, self.torsion)))
        return Vec(v, (-a.t) % self.torsion if self.torsion else 0)

    def pow(self, a: Vec, n: int) -> Vec:
        v = tuple(n * x for x in a.v)
        if isinstance(self.torsion, tuple):
            return Vec(v, tuple((n * x) % q for x, q in zip(a.t, self.torsion)))
        return Vec(v, (n * a.t) % self.torsion if self.torsion else 0)

    def gen_letters(self) -> list[Vec]:
        out = []
        zero_t = self.identity.t
        for i in range(self.rank):
            e = tuple(1 if j == i else 0 for j in range(self.rank))
            out.append(Vec(e, zero_t))
            out.append(Vec(tuple(-x for x in e), zero_t))
        if isinstance(self.torsion, tuple):
            for i, q in enumerate(self.torsion):
                for s in (1, q - 1):
                    t = tuple(s if j == i else 0 for j in range(len(self.torsion)))
                    g = Vec((0,) * self.rank, t)
                    if g not in out:
                        out.append(g)
        elif self.torsion:
            for s in (1, self.torsion - 1):
                g = Vec((0,) * self.rank, s)
                if g not in out and g != self.identity:
                    out.append(g)
        return out

    def elements(self) -> list[Vec]:
        if self.rank:
            raise UnsupportedVariant("group is infinite")
        return ball(self, sum(self.moduli))


# ---------------------------------------------------------------------------
# Free groups


@dataclass(frozen=True)
class FreeGroup:
    rank: int

    def __post_init__(self):
        if not _is_int(self.rank) or self.rank < 1:
            raise InvalidGroup("free group rank must be at least 1")

    identity = ()

    def contains(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        prev = None
        for syl in x:
            if not (isinstance(syl, tuple) and len(syl) == 2):
                return False
            g, e = syl
            if not (_is_int(g) and 0 <= g < self.rank and _is_int(e) and e != 0):
                return False
            if g == prev:
                return False
            prev = g
        return True

    def mul(self, a, b):
        out = list(a)
        for g, e in b:
            if out and out[-1][0] == g:
                s = out[-1][1] + e
                if s:
                    out[-1] = (g, s)
                else:
                    out.pop()
            else:
                out.append((g, e))
        return tuple(out)

    def inv(self, a):
        return tuple((g, -e) for g, e in reversed(a))

    def gen_letters(self):
        out = []
        for i in range(self.rank):
            out.append(((i, 1),))
            out.append(((i, -1),))
        return out


# ---------------------------------------------------------------------------
# Free products

LEFT, RIGHT = "L", "R"


@dataclass(frozen=True)
class FreeProduct:
    left: "Group"
    right: "Group"

    def __post_init__(self):
        for side in (self.left, self.right):
            if not isinstance(side, (FiniteTable, FgAbelian, FreeGroup, FreeProduct)):
                raise InvalidGroup(f"unsupported factor {side!r}")

    identity = ()

    def factor(self, side: str):
        return self.left if side == LEFT else self.right

    def contains(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        prev = None
        for item in x:
            if not (isinstance(item, tuple) and len(item) == 2 and item[0] in (LEFT, RIGHT)):
                return False
            side, letter = item
            fac = self.factor(side)
            if side == prev or not fac.contains(letter) or letter == fac.identity:
                return False
            prev = side
        return True

    def mul(self, a, b):
        out = list(a)
        rest = list(b)
        while out and rest and out[-1][0] == rest[0][0]:
            side = out[-1][0]
            fac = self.factor(side)
            prod = fac.mul(out[-1][1], rest[0][1])
            out.pop()
            rest.pop(0)
            if prod != fac.identity:
                out.append((side, prod))
                break
        return tuple(out + rest)

    def inv(self, a):
        return tuple((side, self.factor(side).inv(x)) for side, x in reversed(a))

    def gen_letters(self):
        return [((LEFT, g),) for g in self.left.gen_letters()] + [
            ((RIGHT, h),) for h in self.right.gen_letters()
        ]

    def embed(self, side: str, x):
        """The one-letter word for factor element ``x`` (empty word for identity)."""
        fac = self.factor(side)
        if not fac.contains(x):
            raise ElementMismatch(f"{x!r} is not in the {side} factor")
        return () if x == fac.identity else ((side, x),)


Group = Union[FiniteTable, FgAbelian, FreeGroup, FreeProduct]


# ---------------------------------------------------------------------------
# Module-level operations


def check_element(G: Group, x) -> None:
    if not G.contains(x):
        raise ElementMismatch(f"{x!r} is not a normal-form element of {describe(G)}")


def multiply(G: Group, a, b):
    check_element(G, a)
    check_element(G, b)
    return G.mul(a, b)


def inverse(G: Group, a):
    check_element(G, a)
    return G.inv(a)


def power(G: Group, a, n: int):
    if isinstance(G, FgAbelian):
        return G.pow(a, n)
    base = a if n >= 0 else G.inv(a)
    out = G.identity
    for _ in range(abs(n)):
        out = G.mul(out, base)
    return out


def normalize(G: Group, letters: Iterable):
    """Multiply out a raw sequence of letters into a normal form.

    For :class:`FreeGroup` the letters are ``(generator, exponent)`` pairs,
    for :class:`FreeProduct` they are ``(side, factor element)`` pairs; runs
    are merged and identities removed.
    """
    out = G.identity
    if isinstance(G, FreeGroup):
        for g, e in letters:
            if not (0 <= g < G.rank):
                raise ElementMismatch(f"generator {g} out of range")
            if e:
                out = G.mul(out, ((g, e),))
        return out
    if isinstance(G, FreeProduct):
        for side, x in letters:
            out = G.mul(out, G.embed(side, x))
        return out
    raise UnsupportedVariant("normalize applies to free groups and free products")


def ball(G: Group, radius: int) -> list:
    """Elements of word length at most ``radius``; identity first.

    Breadth-first from the identity, expanding each element by right
    multiplication with ``G.gen_letters()`` in order. The result is
    deterministic and every element of ``ball(r+1)`` is a ``ball(r)`` element
    times a generator or inverse.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    gens = G.gen_letters()
    seen = {G.identity}
    out = [G.identity]
    frontier = [G.identity]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return out


def word_length(G: Group, x) -> int:
    """Number of free-product letters (syllables for free groups)."""
    if isinstance(G, (FreeProduct, FreeGroup)):
        return len(x)
    raise UnsupportedVariant("word_length applies to free groups and free products")


# ---------------------------------------------------------------------------
# Torsion


@dataclass(frozen=True)
class CyclicTorsion:
    order: int


@dataclass(frozen=True)
class NonCyclicWitness:
    a: Any
    b: Any


def _generated(G: FiniteTable, gens: Sequence[int]) -> set[int]:
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.table[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _torsion_free(G: Group) -> bool:
    if isinstance(G, FreeGroup):
        return True
    if isinstance(G, FgAbelian):
        return not G.moduli
    if isinstance(G, FiniteTable):
        return G.order == 1
    if isinstance(G, FreeProduct):
        return _torsion_free(G.left) and _torsion_free(G.right)
    raise UnsupportedVariant(f"unknown group type {type(G).__name__}")


def torsion_cyclic_check(G: Group):
    """Is the torsion subgroup cyclic? Returns its order or a noncyclic pair."""
    if isinstance(G, FiniteTable):
        n = G.order
        if any(G.element_order(a) == n for a in range(n)):
            return CyclicTorsion(n)
        # a finite group all of whose 2-generated subgroups are cyclic is cyclic
        for a in range(n):
            for b in range(a + 1, n):
                sub = _generated(G, (a, b))
                if not any(G.element_order(x) == len(sub) for x in sub):
                    return NonCyclicWitness(a, b)
        raise AssertionError("unreachable: noncyclic group without noncyclic pair")
    if isinstance(G, FgAbelian):
        mods = G.moduli
        for i in range(len(mods)):
            for j in range(i + 1, len(mods)):
                p = math.gcd(mods[i], mods[j])
                if p > 1:
                    zero = [0] * len(mods)
                    ta, tb = list(zero), list(zero)
                    ta[i] = mods[i] // p
                    tb[j] = mods[j] // p
                    z = (0,) * G.rank
                    return NonCyclicWitness(Vec(z, tuple(ta)), Vec(z, tuple(tb)))
        return CyclicTorsion(math.prod(mods) if mods else 1)
    if _torsion_free(G):
        return CyclicTorsion(1)
    raise UnsupportedVariant("torsion of a free product with torsion factors is not computed")


# ---------------------------------------------------------------------------
# JSON


def describe(G: Group) -> str:
    if isinstance(G, FiniteTable):
        return f"FiniteTable(order={G.order})"
    if isinstance(G, FgAbelian):
        return f"FgAbelian(rank={G.rank}, torsion={G.torsion})"
    if isinstance(G, FreeGroup):
        return f"FreeGroup(rank={G.rank})"
    return f"FreeProduct({describe(G.left)}, {describe(G.right)})"


def group_to_json(G: Group) -> dict:
    if isinstance(G, FiniteTable):
        out: dict = {"type": "finite_table", "table": [list(r) for r in G.table],
                     "inverses": list(G.inverses)}
        if G.names is not None:
            out["names"] = list(G.names)
        return out
    if isinstance(G, FgAbelian):
        tor = list(G.torsion) if isinstance(G.torsion, tuple) else G.torsion
        return {"type": "fg_abelian", "rank": G.rank, "torsion": tor}
    if isinstance(G, FreeGroup):
        return {"type": "free", "rank": G.rank}
    return {"type": "free_product", "left": group_to_json(G.left), "right": group_to_json(G.right)}


def _need(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    val = obj[key]
    if kind is int and not _is_int(val):
        raise SchemaError(f"{path}.{key}", "expected an integer")
    if kind is list and not isinstance(val, list):
        raise SchemaError(f"{path}.{key}", "expected an array")
    return val


def group_from_json(obj, path: str = "$") -> Group:
    kind = _need(obj, "type", path)
    try:
        if kind == "finite_table":
            table = _need(obj, "table", path, list)
            for i, row in enumerate(table):
                if not isinstance(row, list) or not all(_is_int(x) for x in row):
                    raise SchemaError(f"{path}.table[{i}]", "expected an array of integers")
            G = FiniteTable(tuple(tuple(r) for r in table), names=obj.get("names"))
            if "inverses" in obj and list(obj["inverses"]) != list(G.inverses):
                raise SchemaError(f"{path}.inverses", "inconsistent with the table")
            return G
        if kind == "fg_abelian":
            rank = _need(obj, "rank", path, int)
            tor = obj.get("torsion", 0)
            if isinstance(tor, list):
                if not all(_is_int(x) for x in tor):
                    raise SchemaError(f"{path}.torsion", "expected integers")
                tor = tuple(tor)
            elif not _is_int(tor):
                raise SchemaError(f"{path}.torsion", "expected an integer or array of integers")
            return FgAbelian(rank, tor)
        if kind == "free":
            return FreeGroup(_need(obj, "rank", path, int))
        if kind == "free_product":
            return FreeProduct(group_from_json(_need(obj, "left", path), f"{path}.left"),
                               group_from_json(_need(obj, "right", path), f"{path}.right"))
    except InvalidGroup as exc:
        raise SchemaError(path, str(exc)) from exc
    raise SchemaError(f"{path}.type", f"unknown group type {kind!r}")


def element_to_json(G: Group, x):
    if isinstance(G, FiniteTable):
        return {"idx": x}
    if isinstance(G, FgAbelian):
        return {"vec": list(x.v), "t": list(x.t) if isinstance(x.t, tuple) else x.t}
    if isinstance(G, FreeGroup):
        return {"letters": [[g, e] for g, e in x]}
    return {"word": [[side, element_to_json(G.factor(side), y)] for side, y in x]}


def element_from_json(G: Group, obj, path: str = "$"):
    """Parse an element. Bare integers are accepted for tables and ``Z/m``."""
    if isinstance(G, FiniteTable):
        if _is_int(obj):
            idx = obj
        else:
            idx = _need(obj, "idx", path, int)
        if not G.contains(idx):
            raise SchemaError(path, f"index {idx} out of range")
        return int(idx)
    if isinstance(G, FgAbelian):
        if _is_int(obj) and G.rank == 0:
            return G.vec((), obj)
        if isinstance(obj, list) and not isinstance(G.torsion, tuple) and G.torsion == 0:
            obj = {"vec": obj}
        v = _need(obj, "vec", path, list)
        if len(v) != G.rank or not all(_is_int(a) for a in v):
            raise SchemaError(f"{path}.vec", f"expected {G.rank} integers")
        t = obj.get("t", G.identity.t)
        try:
            return G.vec(v, t)
        except (ElementMismatch, TypeError) as exc:
            raise SchemaError(f"{path}.t", str(exc)) from exc
    if isinstance(G, FreeGroup):
        letters = _need(obj, "letters", path, list)
        out = tuple((int(g), int(e)) for g, e in letters)
        if not G.contains(out):
            raise SchemaError(f"{path}.letters", "not a reduced word")
        return out
    word = _need(obj, "word", path, list)
    items = []
    for i, item in enumerate(word):
        p = f"{path}.word[{i}]"
        if not (isinstance(item, list) and len(item) == 2 and item[0] in (LEFT, RIGHT)):
            raise SchemaError(p, 'expected ["L"|"R", element]')
        items.append((item[0], element_from_json(G.factor(item[0]), item[1], f"{p}[1]")))
    out = tuple(items)
    if not G.contains(out):
        raise SchemaError(f"{path}.word", "not an alternating word of nonidentity letters")
    return out


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def group_sha(G: Group) -> str:
    return hashlib.sha256(canonical_json(group_to_json(G)).encode()).hexdigest()


def format_element(G: Group, x) -> str:
    """Short human-readable label, used in CSV/SVG output and CLI text."""
    if isinstance(G, FiniteTable):
        return G.names[x] if G.names else str(x)
    if isinstance(G, FgAbelian):
        if isinstance(G.torsion, tuple):
            return f"{list(x.v)}|{list(x.t)}"
        if G.rank == 0:
            return str(x.t)
        if G.torsion:
            return f"({','.join(map(str, x.v))};{x.t})"
        return f"({','.join(map(str, x.v))})" if G.rank > 1 else str(x.v[0])
    if isinstance(G, FreeGroup):
        if not x:
            return "e"
        return "".join(f"x{g}" + (f"^{e}" if e != 1 else "") for g, e in x)
    if not x:
        return "e"
    return "*".join(
        ("a" if side == LEFT else "b") + "[" + format_element(G.factor(side), y) + "]" for side, y in x
    )
