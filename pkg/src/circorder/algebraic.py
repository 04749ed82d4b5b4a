"""Exact real numbers of the form sum_d q_d * sqrt(d).

Keys ``d`` are squarefree positive integers (``d = 1`` is the rational part)
and coefficients are :class:`fractions.Fraction`.  Square roots of distinct
squarefree integers are linearly independent over Q, so the normalized
coefficient map is a canonical form: two values are equal iff their maps are.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence, Union

import sympy

Rational = Union[int, Fraction]

_START_BITS = 64


def _square_split(d: int) -> tuple[int, int]:
    """Return ``(s, core)`` with ``d == s*s*core`` and ``core`` squarefree."""
    s, core = 1, 1
    for p, e in sympy.factorint(d).items():
        s *= p ** (e // 2)
        if e % 2:
            core *= p
    return s, core


class AlgebraicReal:
    __slots__ = ("_terms", "_enc")

    def __init__(self, terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for d, q in items:
            d = int(d)
            if d < 0:
                raise ValueError(f"square root of negative integer {d}")
            q = Fraction(q)
            if d == 0 or q == 0:
                continue
            s, core = _square_split(d)
            acc[core] = acc.get(core, Fraction(0)) + q * s
        self._terms = tuple(sorted((d, q) for d, q in acc.items() if q != 0))
        self._enc = None

    @classmethod
    def _raw(cls, terms: tuple[tuple[int, Fraction], ...]) -> "AlgebraicReal":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._enc = None
        return obj

    @classmethod
    def rational(cls, q: Rational) -> "AlgebraicReal":
        return cls({1: q})

    @classmethod
    def sqrt(cls, d: int, coeff: Rational = 1) -> "AlgebraicReal":
        return cls({d: coeff})

    @classmethod
    def parse(cls, text: str) -> "AlgebraicReal":
        """Parse an expression such as ``"sqrt(2) - 7/5"``."""
        expr = sympy.nsimplify(sympy.sympify(text, rational=True))
        return cls.from_sympy(expr)

    @classmethod
    def from_sympy(cls, expr) -> "AlgebraicReal":
        terms: dict[int, Fraction] = {}
        for term in sympy.Add.make_args(sympy.expand(expr)):
            coeff, rest = term.as_coeff_Mul()
            if rest == 1:
                d = 1
            elif rest.is_Pow and rest.exp == sympy.Rational(1, 2) and rest.base.is_Integer:
                d = int(rest.base)
            else:
                raise ValueError(f"not a rational combination of square roots: {expr}")
            if not coeff.is_Rational:
                raise ValueError(f"non-rational coefficient in {expr}")
            terms[d] = terms.get(d, Fraction(0)) + Fraction(int(coeff.p), int(coeff.q))
        return cls(terms)

    # -- structure -----------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coefficient(self, d: int) -> Fraction:
        for key, q in self._terms:
            if key == d:
                return q
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(d == 1 for d, _ in self._terms)

    def radicands(self) -> set[int]:
        return {d for d, _ in self._terms if d != 1}

    def primes_used(self) -> set[int]:
        out: set[int] = set()
        for d in self.radicands():
            out.update(sympy.primefactors(d))
        return out

    def to_json(self) -> dict:
        return {"terms": [[d, str(q)] for d, q in self._terms]}

    @classmethod
    def from_json(cls, obj) -> "AlgebraicReal":
        return cls((int(d), Fraction(q)) for d, q in obj["terms"])

    # -- arithmetic ------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "AlgebraicReal":
        if isinstance(other, AlgebraicReal):
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicReal.rational(other)
        return NotImplemented

    def _combine(self, other: "AlgebraicReal", sign: int) -> "AlgebraicReal":
        acc = dict(self._terms)
        for d, q in other._terms:
            acc[d] = acc.get(d, Fraction(0)) + sign * q
        return AlgebraicReal._raw(tuple(sorted((d, q) for d, q in acc.items() if q != 0)))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self):
        return AlgebraicReal._raw(tuple((d, -q) for d, q in self._terms))

    def scale(self, q: Rational) -> "AlgebraicReal":
        q = Fraction(q)
        if q == 0:
            return AlgebraicReal._raw(())
        return AlgebraicReal._raw(tuple((d, q * c) for d, c in self._terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for d1, q1 in self._terms:
            for d2, q2 in other._terms:
                g = math.gcd(d1, d2)
                # sqrt(d1*d2) = g * sqrt(d1*d2/g^2), and d1*d2/g^2 is squarefree
                core = (d1 // g) * (d2 // g)
                acc[core] = acc.get(core, Fraction(0)) + q1 * q2 * g
        return AlgebraicReal._raw(tuple(sorted((d, q) for d, q in acc.items() if q != 0)))

    __rmul__ = __mul__

    # -- exact sign ------------------------------------------------------------

    def _scaled_bounds(self, bits: int) -> tuple[int, int, int]:
        """Integers ``lo, hi, den`` with ``lo/den <= self <= hi/den``."""
        L = reduce(math.lcm, (q.denominator for _, q in self._terms), 1)
        lo = hi = 0
        one = 1 << bits
        for d, q in self._terms:
            c = q.numerator * (L // q.denominator)
            if d == 1:
                lo += c * one
                hi += c * one
                continue
            s = math.isqrt(d << (2 * bits))  # s < sqrt(d) * 2^bits < s + 1
            if c > 0:
                lo += c * s
                hi += c * (s + 1)
            else:
                lo += c * (s + 1)
                hi += c * s
        return lo, hi, L << bits

    def sign(self) -> int:
        if not self._terms:
            return 0
        if self.is_rational():
            return 1 if self._terms[0][1] > 0 else -1
        bits = _START_BITS
        while True:
            lo, hi, _ = self._scaled_bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def enclosure(self) -> tuple[float, float]:
        """Floats ``lo <= self <= hi`` (outward rounded)."""
        if self._enc is None:
            if not self._terms:
                self._enc = (0.0, 0.0)
            else:
                lo, hi, den = self._scaled_bounds(_START_BITS)
                self._enc = (
                    math.nextafter(lo / den, -math.inf),
                    math.nextafter(hi / den, math.inf),
                )
        return self._enc

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.coefficient(1))
        bits = _START_BITS
        while True:
            lo, hi, den = self._scaled_bounds(bits)
            if lo // den == hi // den:
                return lo // den
            bits *= 2

    def frac(self) -> "AlgebraicReal":
        """Fractional part in ``[0, 1)``."""
        n = self.floor()
        return self - n if n else self

    def __float__(self) -> float:
        return math.fsum(float(q) * math.sqrt(d) for d, q in self._terms)

    # -- comparison ------------------------------------------------------------

    def compare(self, other) -> int:
        other = self._coerce(other)
        a_lo, a_hi = self.enclosure()
        b_lo, b_hi = other.enclosure()
        if a_hi < b_lo:
            return -1
        if b_hi < a_lo:
            return 1
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return f"AlgebraicReal({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for d, q in self._terms:
            mag = abs(q)
            if d == 1:
                body = str(mag)
            elif mag == 1:
                body = f"sqrt({d})"
            else:
                body = f"{mag}*sqrt({d})"
            parts.append(("-" if q < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, body in parts[1:]:
            out += f" {s} {body}"
        return out


def rational_dependency(values: Sequence[AlgebraicReal]) -> list[Fraction] | None:
    """A nonzero rational vector ``w`` with ``sum w_i * values[i] == 0``, or None.

    The values are independent over Q exactly when None is returned.
    """
    if not values:
        return None
    basis = sorted(set().union(*(v.terms.keys() for v in values)) or {1})
    mat = sympy.Matrix(
        [[sympy.Rational(v.coefficient(d).numerator, v.coefficient(d).denominator) for v in values]
         for d in basis]
    )
    null = mat.nullspace()
    if not null:
        return None
    vec = null[0]
    den = reduce(math.lcm, (int(sympy.fraction(x)[1]) for x in vec), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(math.gcd, ints, 0) or 1
    return [Fraction(x // g) for x in ints]
