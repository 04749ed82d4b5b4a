"""Circular orders on finitely generated abelian groups ``Z^n x Z/m``.

* rotation orders: element ``a`` sits at ``frac(a.theta + t*k/m)``;
* intertwined orders: a linear order on a torsion-free subgroup ``K``
  combined with a circular order on the (cyclic-torsion) quotient;
* density search, perturbation, Archimedean witnesses and classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from .algebraic import AlgebraicReal, rational_dependency
from .errors import (
    DensitySearchExhausted,
    DependentParameters,
    ElementMismatch,
    InternalInvariantError,
    InvalidOrder,
    PreconditionError,
    UnsupportedVariant,
)
from .groups import FgAbelian, Vec, ball, check_element
from .orders import (
    CircularOrder,
    FiniteRotation,
    LexicographicOrder,
    LinearOrder,
    LinearWrap,
    PositionOrder,
    TranslationOrder,
    agreement,
    orientation,
)

# ---------------------------------------------------------------------------
# Rotation orders


@dataclass(frozen=True)
class RotationParams:
    n: int
    m: int
    theta: tuple
    k: int

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "theta": [t.to_json() for t in self.theta], "k": self.k}


def make_rotation_params(n: int, m: int, theta: Sequence, k: int = 0) -> RotationParams:
    """Validated rotation parameters.

    ``{1, theta_1, ..., theta_n}`` must be linearly independent over Q; a
    dependency is reported through :class:`DependentParameters` with the
    coefficient vector aligned to ``(1, theta_1, ..., theta_n)``.
    """
    theta = tuple(t if isinstance(t, AlgebraicReal) else AlgebraicReal.parse(str(t)) for t in theta)
    if n < 0 or m < 0:
        raise InvalidOrder("n and m must be nonnegative")
    if len(theta) != n:
        raise InvalidOrder(f"expected {n} angles, got {len(theta)}")
    if m == 1:
        m = 0
    if m:
        if not (0 <= k < m) or math.gcd(k, m) != 1:
            raise InvalidOrder(f"k={k} must satisfy 0 <= k < m and gcd(k, m) = 1")
    elif k != 0:
        raise InvalidOrder("k must be 0 without torsion")
    for i, t in enumerate(theta):
        if not (t > 0 and t < 1):
            raise InvalidOrder(f"theta[{i}] = {t} is not in (0, 1)")
    dep = rational_dependency([AlgebraicReal.rational(1), *theta])
    if dep is not None:
        raise DependentParameters(f"1 and theta are Q-dependent with coefficients {[str(q) for q in dep]}", dep)
    return RotationParams(n, m, theta, k)


class RotationOrder(PositionOrder):
    def __init__(self, params: RotationParams, group: FgAbelian | None = None):
        self.params = params
        self.group = group if group is not None else FgAbelian(params.n, params.m)
        if self.group != FgAbelian(params.n, params.m):
            raise ElementMismatch(f"rotation parameters do not fit {self.group}")
        self._cache: dict = {}
        self._tors = Fraction(params.k, params.m) if params.m else Fraction(0)

    def position(self, x: Vec) -> AlgebraicReal:
        p = self._cache.get(x)
        if p is None:
            s = AlgebraicReal.rational(self._tors * x.t)
            for a, th in zip(x.v, self.params.theta):
                if a:
                    s = s + th * a
            p = s.frac()
            if len(self._cache) < 200_000:
                self._cache[x] = p
        return p

    def __repr__(self):
        p = self.params
        return f"RotationOrder(theta={[str(t) for t in p.theta]}, k={p.k}, m={p.m})"


def rotation_eval(p: RotationParams, t: Sequence[Vec]) -> int:
    return RotationOrder(p)(*t)


def enumerate_cyclic_orders(m: int, group=None) -> list:
    """All circular orders of ``Z/m``: one :class:`FiniteRotation` per unit ``k``."""
    if m < 1:
        raise ValueError("m must be positive")
    if m <= 2:
        return [FiniteRotation(m, m - 1, group)]
    return [FiniteRotation(m, k, group) for k in range(1, m) if math.gcd(k, m) == 1]


# ---------------------------------------------------------------------------
# Quotients by a torsion-free subgroup


def _as_column(x: Vec, m: int) -> list[int]:
    return list(x.v) + ([x.t] if m else [])


def _echelon(rows: list[list[int]]) -> list[list[int]]:
    """Row echelon basis of the integer lattice spanned by ``rows``.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``, so the result is the Hermite normal form of the lattice.
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    width = len(rows[0])
    out: list[list[int]] = []
    for col in range(width):
        active = [r for r in rows if r[col] != 0]
        rows = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rows.append(r)
            active = nxt
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            for i, r in enumerate(out):
                q = r[col] // piv[col]
                out[i] = [a - q * b for a, b in zip(r, piv)]
            out.append(piv)
    return out


@dataclass
class QuotientData:
    """``A / K`` presented as ``Z^f x Z/M`` via a Smith normal form.

    ``sigma(x)`` reads coordinates ``U x``; ``lift(s)`` is the canonical
    representative ``U^-1 y`` with ``y`` zero off the quotient coordinates.
    """

    ambient: FgAbelian
    U: list
    Uinv: list
    diag: list
    free_idx: list
    tors_idx: int | None
    group: FgAbelian

    def sigma(self, x: Vec) -> Vec:
        col = _as_column(x, self.ambient.m)
        y = [sum(a * b for a, b in zip(row, col)) for row in self.U]
        t = y[self.tors_idx] % self.group.m if self.tors_idx is not None else 0
        return Vec(tuple(y[i] for i in self.free_idx), t)

    def lift(self, s: Vec) -> Vec:
        N = len(self.U)
        y = [0] * N
        for i, a in zip(self.free_idx, s.v):
            y[i] = a
        if self.tors_idx is not None:
            y[self.tors_idx] = s.t
        x = [sum(a * b for a, b in zip(row, y)) for row in self.Uinv]
        m = self.ambient.m
        return Vec(tuple(x[: self.ambient.rank]), x[-1] % m if m else 0)


def quotient_data(A: FgAbelian, kernel: Sequence[Vec]) -> QuotientData:
    m = A.m
    n = A.rank
    N = n + (1 if m else 0)
    cols = [_as_column(g, m) for g in kernel]
    if m:
        cols.append([0] * n + [m])
    if not cols:
        cols = [[0] * N]
    R = sympy.Matrix(N, len(cols), lambda i, j: cols[j][i])
    D, U, V = smith_normal_decomp(R, domain=sympy.ZZ)
    if U * R * V != D or abs(U.det()) != 1:
        raise InternalInvariantError("Smith normal form decomposition failed its check")
    U = [[int(U[i, j]) for j in range(N)] for i in range(N)]
    diag = []
    for i in range(N):
        d = int(D[i, i]) if i < D.shape[1] else 0
        if d < 0:
            U[i] = [-a for a in U[i]]
            d = -d
        diag.append(d)
    Uinv_m = sympy.Matrix(U).inv()
    Uinv = [[int(Uinv_m[i, j]) for j in range(N)] for i in range(N)]
    free_idx = [i for i, d in enumerate(diag) if d == 0]
    tors = [i for i, d in enumerate(diag) if d > 1]
    if len(tors) > 1:
        raise InvalidOrder(
            f"quotient torsion Z/{diag[tors[0]]} x Z/{diag[tors[1]]} ... is not cyclic; no circular order exists")
    tors_idx = tors[0] if tors else None
    M = diag[tors_idx] if tors else 0
    return QuotientData(A, U, Uinv, diag, free_idx, tors_idx, FgAbelian(len(free_idx), M))


def kernel_hnf(A: FgAbelian, kernel: Sequence[Vec]) -> list[list[int]]:
    """Hermite normal form (rows) of the lattice spanned by the kernel generators."""
    return _echelon([_as_column(g, A.m) for g in kernel])


# ---------------------------------------------------------------------------
# Intertwined orders


@dataclass
class BlowdownData:
    group: FgAbelian
    kernel: tuple
    lin: LinearOrder | None
    quotient_order: CircularOrder
    quotient: QuotientData


class IntertwinedOrder(CircularOrder):
    """Linear order ``lin`` on ``K`` intertwined with ``quotient_order`` on ``A/K``.

    Elements in distinct cosets compare as their images; inside a coset the
    offset from the coset representative, written in the basis ``kernel``,
    is compared by ``lin``.  ``rep_offset`` shifts each representative by the
    kernel element with the returned coordinates; values do not depend on it.
    """

    def __init__(self, group: FgAbelian, kernel: Sequence, lin: LinearOrder | None,
                 quotient_order: CircularOrder, rep_offset: Callable[[Vec], Sequence[int]] | None = None):
        if not isinstance(group, FgAbelian) or isinstance(group.torsion, tuple):
            raise UnsupportedVariant("intertwined orders need FgAbelian with cyclic torsion")
        kernel = tuple(g if isinstance(g, Vec) else group.vec(g[0], g[1] if len(g) > 1 else 0) for g in kernel)
        for g in kernel:
            check_element(group, g)
        r = len(kernel)
        proj = [list(g.v) for g in kernel]
        if r:
            if sympy.Matrix(proj).rank() != r:
                raise InvalidOrder("kernel generators must be independent (K has to be free abelian)")
        if r and lin is None:
            raise InvalidOrder("a nontrivial kernel needs a linear order")
        if lin is not None and lin.group != FgAbelian(r):
            raise InvalidOrder(f"linear order must live on Z^{r}")
        self.group = group
        self.quotient = quotient_data(group, kernel)
        if quotient_order.group != self.quotient.group:
            raise InvalidOrder(f"quotient order must live on {self.quotient.group}, got {quotient_order.group}")
        self.kernel = kernel
        self.lin = lin
        self.quotient_order = quotient_order
        self.rep_offset = rep_offset
        # left inverse of the projected kernel basis on r independent rows
        self._rows: list[int] = []
        if r:
            Pm = sympy.Matrix(proj).T  # n x r
            _, pivots = Pm.T.rref()
            self._rows = list(pivots)
            inv = Pm.extract(self._rows, list(range(r))).inv()
            self._solve = [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(r)] for i in range(r)]
        self._memo: dict = {}

    @property
    def data(self) -> BlowdownData:
        return BlowdownData(self.group, self.kernel, self.lin, self.quotient_order, self.quotient)

    def representative(self, s: Vec) -> Vec:
        rep = self.quotient.lift(s)
        if self.rep_offset is not None:
            off = list(self.rep_offset(s))
            for c, g in zip(off, self.kernel):
                if c:
                    rep = self.group.mul(rep, self.group.pow(g, c))
        return rep

    def kernel_coords(self, d: Vec) -> tuple[int, ...]:
        """Coordinates of ``d`` (an element of K) in the kernel basis."""
        r = len(self.kernel)
        if not r:
            if d != self.group.identity:
                raise InternalInvariantError(f"{d} should be trivial")
            return ()
        rhs = [d.v[i] for i in self._rows]
        sol = [sum(q * b for q, b in zip(row, rhs)) for row in self._solve]
        if any(x.denominator != 1 for x in sol):
            raise InternalInvariantError(f"{d} is not in the kernel lattice")
        k = [int(x) for x in sol]
        chk = self.group.identity
        for c, g in zip(k, self.kernel):
            chk = self.group.mul(chk, self.group.pow(g, c))
        if chk != d:
            raise InternalInvariantError(f"kernel coordinates of {d} do not reproduce it")
        return tuple(k)

    def split(self, x: Vec) -> tuple[Vec, Vec]:
        """``(sigma(x), k(x))``."""
        hit = self._memo.get(x)
        if hit is None:
            s = self.quotient.sigma(x)
            rep = self.representative(s)
            d = self.group.mul(x, self.group.inv(rep))
            hit = (s, Vec(self.kernel_coords(d), 0))
            if len(self._memo) < 200_000:
                self._memo[x] = hit
        return hit

    def _nondegenerate(self, a, b, c):
        sa, ka = self.split(a)
        sb, kb = self.split(b)
        sc, kc = self.split(c)
        if sa != sb and sb != sc and sa != sc:
            return self.quotient_order._eval(sa, sb, sc)
        lt = self.lin.less
        if sa == sb and sb == sc:
            n = lt(ka, kb) + lt(kb, kc) + lt(kc, ka)
            return 1 if n == 2 else -1
        if sa == sb:
            return 1 if lt(ka, kb) else -1
        if sb == sc:
            return 1 if lt(kb, kc) else -1
        return 1 if lt(kc, ka) else -1

    def __repr__(self):
        return f"IntertwinedOrder(K={[list(g.v) + [g.t] for g in self.kernel]}, lin={self.lin!r}, quotient={self.quotient_order!r})"


def intertwined_eval(c: IntertwinedOrder, t: Sequence) -> int:
    return c(*t)


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class Classification:
    kind: str  # "fin", "min" or "blowdown"
    kernel_hnf: tuple = ()
    index: int | None = None


def classify(c: CircularOrder) -> Classification:
    if isinstance(c, (RotationOrder, FiniteRotation)):
        return Classification("min")
    if isinstance(c, LinearWrap) and isinstance(c.group, FgAbelian) and c.group.moduli == ():
        basis = [[int(i == j) for j in range(c.group.rank)] for i in range(c.group.rank)]
        return Classification("fin", tuple(map(tuple, basis)), 1)
    if isinstance(c, IntertwinedOrder):
        hnf = tuple(tuple(r) for r in kernel_hnf(c.group, c.kernel))
        if len(c.kernel) == c.group.rank:
            Q = c.quotient.group
            return Classification("fin", hnf, Q.m or 1)
        return Classification("blowdown", hnf, None)
    raise UnsupportedVariant(f"cannot classify {type(c).__name__}")


# ---------------------------------------------------------------------------
# Density of rotation orders


def _translation_vector(lin: LinearOrder, kcoords: Sequence[Sequence[int]]) -> list[AlgebraicReal]:
    """Distances ``x`` with ``k < k'`` iff ``(k' - k).x > 0`` on the given coordinates."""
    if isinstance(lin, TranslationOrder):
        return list(lin.x)
    if isinstance(lin, LexicographicOrder):
        spread = 1
        for a in kcoords:
            for b in kcoords:
                spread = max([spread] + [abs(x - y) for x, y in zip(a, b)])
        base = 2 * spread + 1
        return [AlgebraicReal.rational(Fraction(s, base ** i)) for i, s in enumerate(lin.signs)]
    raise UnsupportedVariant(f"density search cannot handle linear order {type(lin).__name__}")


def _as_intertwined(c: CircularOrder) -> IntertwinedOrder | None:
    if isinstance(c, IntertwinedOrder):
        return c
    if isinstance(c, LinearWrap) and isinstance(c.group, FgAbelian) and not c.group.moduli:
        n = c.group.rank
        basis = [c.group.vec([int(i == j) for j in range(n)]) for i in range(n)]
        return IntertwinedOrder(c.group, basis, c.lin, FiniteRotation(1, 0))
    return None


def _primes_in(c) -> set[int]:
    out: set[int] = set()
    if isinstance(c, RotationOrder):
        for t in c.params.theta:
            out |= t.primes_used()
    elif isinstance(c, IntertwinedOrder):
        if isinstance(c.lin, TranslationOrder):
            for t in c.lin.x:
                out |= t.primes_used()
        out |= _primes_in(c.quotient_order)
    elif isinstance(c, LinearWrap) and isinstance(c.lin, TranslationOrder):
        for t in c.lin.x:
            out |= t.primes_used()
    return out


def _quotient_angles(c: CircularOrder, sample: list, budget: int) -> tuple[list, Fraction]:
    """Rotation parameters ``(phi, k/M)`` reproducing ``c`` (an order on ``Z^f x Z/M``) on ``sample``."""
    if isinstance(c, RotationOrder):
        p = c.params
        return list(p.theta), Fraction(p.k, p.m) if p.m else Fraction(0)
    if isinstance(c, FiniteRotation):
        return [], Fraction(c.k, c.m) if c.m > 1 else Fraction(0)
    p = density_search(c, sample, budget)
    return list(p.theta), Fraction(p.k, p.m) if p.m else Fraction(0)


def density_search(c: CircularOrder, sample: Sequence, budget: int = 64) -> RotationParams:
    """Rotation parameters whose order agrees with ``c`` on every triple of ``sample``.

    Rotation orders return their own parameters.  For an intertwined order the
    angles are built as ``frac(w_i + L(e_i)/2^t + eps * sqrt(p_i))``: ``w`` is the
    rotation vector of the quotient order pulled back to ``A``, ``L`` is a
    linear functional extending the translation distances of ``lin`` from
    ``K`` to ``Z^n``, and the ``p_i`` are fresh primes.  Each round increases
    ``t`` (and shrinks ``eps``) and checks agreement exactly.
    """
    sample = list(sample)
    if isinstance(c, RotationOrder):
        return c.params
    if isinstance(c, FiniteRotation):
        if not isinstance(c.group, FgAbelian):
            raise UnsupportedVariant("density search needs an FgAbelian group")
        return make_rotation_params(0, c.m if c.m > 1 else 0, [], c.k if c.m > 1 else 0)
    ic = _as_intertwined(c)
    if ic is None:
        raise UnsupportedVariant(f"density search does not handle {type(c).__name__}")
    A = ic.group
    n, m = A.rank, A.m
    Q = ic.quotient
    splits = [ic.split(x) for x in sample]
    qsample = []
    for s, _ in splits:
        if s not in qsample:
            qsample.append(s)
    phi, tq = _quotient_angles(ic.quotient_order, qsample, budget)

    # w: quotient rotation vector pulled back through sigma, on coordinates of Z^n (+ torsion)
    N = len(Q.U)
    w = []
    for j in range(N):
        acc = AlgebraicReal.rational(tq * Q.U[Q.tors_idx][j]) if Q.tors_idx is not None else AlgebraicReal()
        for fi, ph in zip(Q.free_idx, phi):
            if Q.U[fi][j]:
                acc = acc + ph * Q.U[fi][j]
        w.append(acc)
    k = 0
    if m:
        wt = w[n]
        if not wt.is_rational():
            raise InternalInvariantError("torsion angle must be rational")
        frac_t = wt.coefficient(1) % 1
        if (frac_t * m).denominator != 1:
            raise InternalInvariantError("torsion angle is not a multiple of 1/m")
        k = int(frac_t * m)

    # L: linear functional on Q^n with L(proj K_j) = x_j, zero on a complement
    r = len(ic.kernel)
    L = [AlgebraicReal() for _ in range(n)]
    if r:
        kc = [tuple(kv.v) for _, kv in splits]
        x = _translation_vector(ic.lin, kc)
        proj = [list(g.v) for g in ic.kernel]
        basis = list(proj)
        for j in range(n):
            cand = basis + [[int(i == j) for i in range(n)]]
            if len(basis) < n and sympy.Matrix(cand).rank() == len(cand):
                basis = cand
        B = sympy.Matrix(basis)  # rows b_i; L(b_i) = x_i (or 0); L(e_j) = sum_i (B^-1)[j, i] * target_i
        Binv = B.inv()
        targets = x + [AlgebraicReal() for _ in range(n - r)]
        for j in range(n):
            acc = AlgebraicReal()
            for i in range(n):
                q = Binv[j, i]
                if q != 0:
                    acc = acc + targets[i] * Fraction(int(q.p), int(q.q))
            L[j] = acc

    used = _primes_in(ic)
    for th in phi:
        used |= th.primes_used()
    start = max(used) if used else 1
    primes = []
    p = start
    for _ in range(n):
        p = sympy.nextprime(p)
        primes.append(p)

    for t in range(1, budget + 1):
        scale = Fraction(1, 2 ** t)
        eps = Fraction(1, 2 ** (2 * t + 4))
        theta = []
        for j in range(n):
            val = w[j] + L[j] * scale + AlgebraicReal.sqrt(primes[j], eps)
            theta.append(val.frac())
        try:
            params = make_rotation_params(n, m, theta, k)
        except InvalidOrder:
            continue
        if agreement(ic, RotationOrder(params, A), sample) is None:
            return params
    raise DensitySearchExhausted(f"no agreeing rotation order found within {budget} rounds")


# ---------------------------------------------------------------------------
# Perturbation: rotation orders are not isolated


@dataclass(frozen=True)
class Perturbation:
    params: RotationParams
    witness: Any  # Disagreement showing the new order differs from the old one


def rotation_disagreement(p1: RotationParams, p2: RotationParams, max_power: int = 10 ** 6):
    """A triple ``(e, g, g^j)`` on which the two rotation orders differ, or None.

    A float scan locates candidates, each is confirmed with exact evaluation.
    """
    from .orders import Disagreement

    if (p1.n, p1.m) != (p2.n, p2.m):
        raise ElementMismatch("parameters for different groups")
    A = FgAbelian(p1.n, p1.m)
    c1, c2 = RotationOrder(p1, A), RotationOrder(p2, A)
    e = A.identity
    if p1.m and p1.k != p2.k:
        for j in range(2, p1.m):
            g = A.vec([0] * p1.n, 1)
            gj = A.vec([0] * p1.n, j)
            if c1._eval(e, g, gj) != c2._eval(e, g, gj):
                return Disagreement((e, g, gj), c1._eval(e, g, gj), c2._eval(e, g, gj))
    js = np.arange(2, max_power + 1, dtype=np.float64)
    for i in range(p1.n):
        a, b = float(p1.theta[i]), float(p2.theta[i])
        if p1.theta[i] == p2.theta[i]:
            continue
        # c(e, g, g^j) = +1 iff pos(g) < pos(g^j)
        s1 = np.mod(js * a, 1.0) > a
        s2 = np.mod(js * b, 1.0) > b
        cands = np.flatnonzero(s1 != s2)
        for idx in cands[:50]:
            j = int(js[idx])
            g = A.vec([int(q == i) for q in range(p1.n)], 0)
            gj = A.pow(g, j)
            v1, v2 = c1._eval(e, g, gj), c2._eval(e, g, gj)
            if v1 != v2:
                return Disagreement((e, g, gj), v1, v2)
    return None


def perturb_rotation(c: RotationOrder, sample: Sequence, max_rounds: int = 64) -> Perturbation:
    """A different rotation order agreeing with ``c`` on ``sample``.

    The first angle is moved by ``eps * sqrt(q)`` for a prime ``q`` not used by
    ``c``; ``eps`` starts near the smallest position gap on the sample and is
    halved until the new order agrees.  Distinctness is shown by an explicit
    disagreeing triple.
    """
    p = c.params
    if p.n == 0:
        raise PreconditionError("rotation orders of a finite cyclic group are isolated")
    sample = list(sample)
    used = set()
    for t in p.theta:
        used |= t.primes_used()
    q = sympy.nextprime(max(used) if used else 1)
    pos = sorted(float(c.position(x)) for x in sample)
    gaps = [b - a for a, b in zip(pos, pos[1:])] + ([1 - pos[-1] + pos[0]] if pos else [])
    gap = min([g for g in gaps if g > 0] or [0.5])
    reach = max([abs(x.v[0]) for x in sample] or [1]) or 1
    j = max(1, int(math.floor(-math.log2(gap / (4 * reach * math.sqrt(q))))))
    for _ in range(max_rounds):
        delta = AlgebraicReal.sqrt(q, Fraction(1, 2 ** j))
        th = list(p.theta)
        th[0] = (th[0] + delta).frac()
        try:
            new = make_rotation_params(p.n, p.m, th, p.k)
        except InvalidOrder:
            j += 1
            continue
        if agreement(c, RotationOrder(new, c.group), sample) is None:
            wit = rotation_disagreement(p, new)
            if wit is None:
                raise InternalInvariantError("perturbed parameters differ but no disagreement was found")
            return Perturbation(new, wit)
        j += 1
    raise DensitySearchExhausted("no agreeing perturbation found")


# ---------------------------------------------------------------------------
# Archimedean witnesses


@dataclass(frozen=True)
class ArchimedeanWitness:
    n: int


@dataclass(frozen=True)
class NoneUpTo:
    N: int


def _common_power_abelian(A: FgAbelian, g: Vec, h: Vec) -> bool:
    """Are ``g`` and ``h`` both powers of one element of ``A``?"""
    m = A.m
    v, w = g.v, h.v
    if not any(v) and not any(w):
        return True  # both torsion; the torsion subgroup is cyclic
    if not any(v) or not any(w):
        return False
    if sympy.Matrix([list(v), list(w)]).rank() > 1:
        return False
    gv = math.gcd(*v)
    u0 = tuple(a // gv for a in v)
    i0 = gv
    j0 = next(b // u for b, u in zip(w, u0) if u)
    g0 = math.gcd(i0, j0)
    for l in sympy.divisors(g0):
        i, j = i0 // l, j0 // l
        if not m:
            return True
        for r in range(m):
            if (i * r - g.t) % m == 0 and (j * r - h.t) % m == 0:
                return True
    return False


def archimedean_witness(c: CircularOrder, g, h, N: int = 100, check_precondition: bool = True):
    """Smallest ``n <= N`` with ``c(e, g, h) != c(e, g^n, h)``, else :class:`NoneUpTo`."""
    G = c.group
    check_element(G, g)
    check_element(G, h)
    e = G.identity
    if check_precondition:
        if g == e or h == e:
            raise PreconditionError("g and h must be nontrivial")
        if g == h:
            raise PreconditionError("g and h are powers of a common element")
        if isinstance(G, FgAbelian) and _common_power_abelian(G, g, h):
            raise PreconditionError("g and h are powers of a common element")
    v0 = c._eval(e, g, h)
    gn = g
    for n in range(2, N + 1):
        gn = G.mul(gn, g)
        if c._eval(e, gn, h) != v0:
            return ArchimedeanWitness(n)
    return NoneUpTo(N)


def random_gl(rng, n: int, bound: int = 3, max_tries: int = 10_000):
    """Random matrix in GL(n, Z) with entries in ``[-bound, bound]``, not the identity."""
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(max_tries):
        M = [[int(rng.integers(-bound, bound + 1)) for _ in range(n)] for _ in range(n)]
        if M != eye and abs(int(sympy.Matrix(M).det())) == 1:
            return M
    raise RuntimeError("could not sample an invertible matrix")


def classify_label(c: CircularOrder) -> str:
    cl = classify(c)
    if cl.kind == "min":
        return "Min"
    name = "Fin" if cl.kind == "fin" else "Blowdown"
    return f"{name}(K={[list(r) for r in cl.kernel_hnf]})"


__all__ = [
    "RotationParams", "make_rotation_params", "RotationOrder", "rotation_eval",
    "enumerate_cyclic_orders", "QuotientData", "quotient_data", "kernel_hnf",
    "BlowdownData", "IntertwinedOrder", "intertwined_eval", "Classification", "classify",
    "classify_label", "density_search", "Perturbation", "perturb_rotation",
    "rotation_disagreement", "ArchimedeanWitness", "NoneUpTo", "archimedean_witness",
    "random_gl", "orientation",
]
