"""Lexicographic circular orders on free products and coset intertwining.

Triples of reduced words are rewritten with three moves until every word
has length at most one:

* R1 -- all three words start with the same letter ``x``: strip it;
* R2 -- exactly two words start with ``x``: left multiply the triple by ``x^-1``;
* R3 -- a word of length >= 2 is the only one starting with its first
  letter ``x``: cut it down to ``x``.

Each move shortens the total length, and the end result does not depend on
the order of moves.  The order value is then read from a fixed table on
triples of single letters (see :func:`initial_value`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .errors import ElementMismatch, InvalidOrder, UnsupportedVariant
from .groups import LEFT, RIGHT, FreeProduct, Group, ball, check_element
from .orders import CircularOrder, LinearOrder

Word = tuple


@dataclass(frozen=True)
class ReductionStep:
    rule: str  # "R1", "R2" or "R3"
    letter: Any  # (side, factor element)
    before: tuple
    after: tuple


@dataclass(frozen=True)
class TripleReductionTrace:
    steps: tuple
    minimal: tuple

    def to_json(self, G: FreeProduct) -> dict:
        from .groups import element_to_json

        def tri(t):
            return [element_to_json(G, w) for w in t]

        return {
            "steps": [
                {"rule": s.rule,
                 "letter": [s.letter[0], element_to_json(G.factor(s.letter[0]), s.letter[1])],
                 "before": tri(s.before), "after": tri(s.after)}
                for s in self.steps
            ],
            "minimal": tri(self.minimal),
        }


def _moves(t: tuple) -> list[tuple[str, Any, int]]:
    """All reductions applicable to ``t`` as ``(rule, letter, position)``.

    ``position`` is the word index for R3 and -1 otherwise.
    """
    leads = [w[0] if w else None for w in t]
    if leads[0] is not None and leads[0] == leads[1] == leads[2]:
        return [("R1", leads[0], -1)]
    out = []
    for x in dict.fromkeys(l for l in leads if l is not None):
        cnt = leads.count(x)
        if cnt == 2:
            out.append(("R2", x, -1))
        elif cnt == 1:
            i = leads.index(x)
            if len(t[i]) >= 2:
                out.append(("R3", x, i))
    return out


def _apply(G: FreeProduct, t: tuple, move) -> tuple:
    rule, x, pos = move
    if rule == "R1":
        return tuple(w[1:] for w in t)
    if rule == "R2":
        side, letter = x
        xinv = ((side, G.factor(side).inv(letter)),)
        return tuple(w[1:] if (w and w[0] == x) else G.mul(xinv, w) for w in t)
    out = list(t)
    out[pos] = (x,)
    return tuple(out)


def _pick_deterministic(moves):
    for rule in ("R1", "R2"):
        cands = [m for m in moves if m[0] == rule]
        if cands:
            return cands[0]
    return min((m for m in moves if m[0] == "R3"), key=lambda m: m[2])


def reduce_triple(G: FreeProduct, t: Sequence, strategy: str = "deterministic",
                  rng: random.Random | None = None, trace: bool = True) -> TripleReductionTrace:
    """Reduce ``t`` to its minimal triple, recording each move.

    ``strategy="deterministic"`` applies R1 when possible, else R2, else R3 on
    the first eligible word.  ``strategy="random"`` picks uniformly among all
    applicable moves using ``rng``.
    """
    if not isinstance(G, FreeProduct):
        raise UnsupportedVariant("reduce_triple needs a FreeProduct")
    t = tuple(t)
    if len(t) != 3:
        raise ValueError("expected a triple")
    for w in t:
        check_element(G, w)
    if strategy == "random":
        rng = rng or random.Random(0)
    elif strategy != "deterministic":
        raise ValueError(f"unknown strategy {strategy!r}")
    steps = []
    while True:
        moves = _moves(t)
        if not moves:
            break
        mv = _pick_deterministic(moves) if strategy == "deterministic" else rng.choice(moves)
        nt = _apply(G, t, mv)
        if trace:
            steps.append(ReductionStep(mv[0], mv[1], t, nt))
        t = nt
    return TripleReductionTrace(tuple(steps), t)


def minimal_triple(G: FreeProduct, t: tuple) -> tuple:
    while True:
        moves = _moves(t)
        if not moves:
            return t
        t = _apply(G, t, _pick_deterministic(moves))


def initial_value(G: FreeProduct, cG: CircularOrder, cH: CircularOrder, t: tuple) -> int:
    """Order value on a minimal triple (three words of length <= 1).

    Restrictions to the factors are the factor orders; mixed triples use
    ``c(e, g, h) = +1``, ``c(g1, g2, h) = cG(g1, g2, e)`` and
    ``c(g, h1, h2) = cH(e, h1, h2)``, transported along cyclic rotations.
    """
    if any(len(w) > 1 for w in t):
        raise ValueError(f"{t!r} is not a minimal triple")
    if len(set(t)) < 3:
        return 0
    sides = [w[0][0] if w else None for w in t]
    if RIGHT not in sides:
        e = G.left.identity
        return cG._eval(*(w[0][1] if w else e for w in t))
    if LEFT not in sides:
        e = G.right.identity
        return cH._eval(*(w[0][1] if w else e for w in t))
    # mixed: rotate cyclically into one of the three tabulated shapes
    for r in range(3):
        a, b, c = t[r:] + t[:r]
        sa, sb, sc = sides[r:] + sides[:r]
        if sa is None:  # (e, ., .)
            return 1 if sb == LEFT else -1
        if sa == LEFT and sb == LEFT and sc == RIGHT:
            return cG._eval(a[0][1], b[0][1], G.left.identity)
        if sa == LEFT and sb == RIGHT and sc == RIGHT:
            return cH._eval(G.right.identity, b[0][1], c[0][1])
    raise AssertionError(f"unhandled minimal triple {t!r}")


class LexFreeProductOrder(CircularOrder):
    """The lexicographic circular order on ``G * H`` built from ``cG`` and ``cH``."""

    def __init__(self, group: FreeProduct, cG: CircularOrder, cH: CircularOrder, check_radius: int = 1):
        if not isinstance(group, FreeProduct):
            raise UnsupportedVariant("lexicographic orders need a FreeProduct")
        if cG.group != group.left or cH.group != group.right:
            raise ElementMismatch("factor orders do not match the factors")
        self.group = group
        self.cG = cG
        self.cH = cH
        if check_radius:
            self._check_initial_table(check_radius)

    def _check_initial_table(self, radius: int) -> None:
        """The completed table must be cyclically invariant and antisymmetric."""
        G = self.group
        letters = [()] + [((LEFT, g),) for g in ball(G.left, radius)[1:]] + [
            ((RIGHT, h),) for h in ball(G.right, radius)[1:]]
        letters = letters[:12]
        for a in letters:
            for b in letters:
                for c in letters:
                    v = initial_value(G, self.cG, self.cH, (a, b, c))
                    if v != initial_value(G, self.cG, self.cH, (b, c, a)) or v != -initial_value(
                            G, self.cG, self.cH, (a, c, b)):
                        raise InvalidOrder(f"initial conditions inconsistent at {(a, b, c)!r}")

    def minimal(self, x, y, z) -> tuple:
        return minimal_triple(self.group, (x, y, z))

    def _nondegenerate(self, x, y, z):
        # evaluated on the triple itself (not a translate) so that validating
        # left invariance actually exercises the reduction system
        return initial_value(self.group, self.cG, self.cH, minimal_triple(self.group, (x, y, z)))

    def __repr__(self):
        return f"LexFreeProductOrder({self.cG!r}, {self.cH!r})"


def lex_eval(G: FreeProduct, cG: CircularOrder, cH: CircularOrder, t: Sequence) -> int:
    return LexFreeProductOrder(G, cG, cH, check_radius=0)(*t)


class FlippedMinimalOrder(LexFreeProductOrder):
    """Lexicographic order with one minimal triple's value negated (mutation testing)."""

    def __init__(self, base: LexFreeProductOrder, minimal: tuple):
        super().__init__(base.group, base.cG, base.cH, check_radius=0)
        self.flip = tuple(minimal)

    def _nondegenerate(self, x, y, z):
        t = minimal_triple(self.group, (x, y, z))
        v = initial_value(self.group, self.cG, self.cH, t)
        return -v if t == self.flip else v


# ---------------------------------------------------------------------------
# Coset intertwining


class CosetIntertwined(CircularOrder):
    """Circular order from a circular order on cosets and a linear order on the stabilizer.

    ``coset_of(g)`` names the coset of ``g``; ``k_coord(g)`` is ``r^-1 g`` for the
    chosen representative ``r`` of that coset, an element of ``stab_lin``'s group.
    ``orbit_order`` is a callable ``(i, j, k) -> +-1`` on distinct coset names
    (a :class:`CircularOrder` on the coset names also works).
    """

    def __init__(self, group: Group, orbit_order, stab_lin: LinearOrder | None,
                 coset_of: Callable, k_coord: Callable):
        self.group = group
        self.orbit_order = orbit_order._eval if isinstance(orbit_order, CircularOrder) else orbit_order
        self.stab_lin = stab_lin
        self.coset_of = coset_of
        self.k_coord = k_coord

    def _nondegenerate(self, a, b, c):
        sa, sb, sc = self.coset_of(a), self.coset_of(b), self.coset_of(c)
        if sa != sb and sb != sc and sa != sc:
            return self.orbit_order(sa, sb, sc)
        if self.stab_lin is None:
            raise InvalidOrder("distinct elements share a coset but the stabilizer has no order")
        lt = self.stab_lin.less
        ka, kb, kc = self.k_coord(a), self.k_coord(b), self.k_coord(c)
        if sa == sb == sc:
            n = lt(ka, kb) + lt(kb, kc) + lt(kc, ka)
            return 1 if n == 2 else -1
        if sa == sb:
            return 1 if lt(ka, kb) else -1
        if sb == sc:
            return 1 if lt(kb, kc) else -1
        return 1 if lt(kc, ka) else -1

    def check_consistency(self, sample: Sequence) -> None:
        """Left translation must map cosets to cosets and preserve in-coset order."""
        G = self.group
        members = set(sample)
        for a in sample:
            for b in sample:
                if a == b or self.coset_of(a) != self.coset_of(b):
                    continue
                if self.stab_lin is None:
                    raise InvalidOrder(f"inconsistent coset data: {a!r} and {b!r} share a coset")
                base = self.stab_lin.less(self.k_coord(a), self.k_coord(b))
                for g in sample:
                    ga, gb = G.mul(g, a), G.mul(g, b)
                    if ga not in members or gb not in members:
                        continue
                    if self.coset_of(ga) != self.coset_of(gb):
                        raise InvalidOrder(f"inconsistent coset data: {g!r} splits the coset of {a!r}, {b!r}")
                    if self.stab_lin.less(self.k_coord(ga), self.k_coord(gb)) != base:
                        raise InvalidOrder(f"inconsistent coset data: {g!r} reorders {a!r}, {b!r}")


def coset_intertwine(group: Group, orbit_order, stab_lin, coset_of, k_coord,
                     check_sample: Sequence | None = None) -> CosetIntertwined:
    c = CosetIntertwined(group, orbit_order, stab_lin, coset_of, k_coord)
    if check_sample is not None:
        c.check_consistency(check_sample)
    return c
