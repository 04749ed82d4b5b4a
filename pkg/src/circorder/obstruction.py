"""Finite obstructions to circular (CO) and linear (LO) orderability.

A ball of the group is turned into a set of +-1 constraints:

* CO mode: variable ``v(a, b)`` stands for ``c(e, a, b)``.  Equality clauses
  tie ``v(a, b) = -v(b, a)`` and ``v(a, b) = v(a^-1 b, a^-1)``; one cocycle
  clause per 3-element set ``{a, b, c}`` says that exactly two of
  ``v(a^-1 b, a^-1 c), -v(b, c), v(a, c), -v(a, b)`` are +1.
* LO mode: variable ``p(a)`` says ``a`` is positive.  Equality clauses tie
  ``p(a) = -p(a^-1)``; cone clauses forbid ``p(a), p(b)`` with ``not p(ab)``.

Equalities are merged with a signed union-find; the remaining clauses are
solved by backtracking with unit propagation.  An unsatisfiable instance
yields a certificate: a clause subset that is unsatisfiable on its own,
minimized by deletion and checkable by :func:`verify_certificate`.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import InternalInvariantError, NotUnsat, SchemaError, UnsupportedVariant
from .groups import (
    FiniteTable,
    Group,
    ball,
    element_from_json,
    element_to_json,
    group_from_json,
    group_sha,
)
from .orders import ExplicitTable

CO, LO = "co", "lo"


@dataclass(frozen=True)
class Clause:
    kind: str  # "eq", "cocycle" or "cone"
    lits: tuple  # ((variable index, sign), ...)
    source: tuple = ()  # defining group elements

    def holds(self, x: Sequence[int]) -> bool:
        vals = [s * x[v] for v, s in self.lits]
        if self.kind == "eq":
            return vals[0] == vals[1]
        if self.kind == "cocycle":
            return vals.count(1) == 2
        return 1 in vals


@dataclass
class ConstraintInstance:
    group: Group
    radius: int
    mode: str
    elements: list
    variables: list  # keys: (a, b) in CO mode, (a,) in LO mode
    clauses: list
    skipped: int = 0  # identifications dropped because a translate left the ball
    note: str = ""

    @property
    def index(self) -> dict:
        return {k: i for i, k in enumerate(self.variables)}


def build_instance(G: Group, radius: int, mode: str = CO) -> ConstraintInstance:
    if mode not in (CO, LO):
        raise ValueError(f"mode must be 'co' or 'lo', got {mode!r}")
    if radius < 1:
        raise ValueError("radius must be at least 1")
    elems = ball(G, radius)
    e = G.identity
    rest = elems[1:]
    members = set(elems)
    inv = {a: G.inv(a) for a in elems}
    clauses: list[Clause] = []
    skipped = 0
    if mode == CO:
        variables = [(a, b) for a in rest for b in rest if a != b]
        idx = {k: i for i, k in enumerate(variables)}
        for (a, b) in variables:
            i = idx[(a, b)]
            j = idx[(b, a)]
            if i < j:
                clauses.append(Clause("eq", ((i, 1), (j, -1)), (a, b)))
        for (a, b) in variables:
            ai = inv[a]
            aib = G.mul(ai, b)
            if ai in members and aib in members:
                j = idx[(aib, ai)]
                if j != idx[(a, b)]:
                    clauses.append(Clause("eq", ((idx[(a, b)], 1), (j, 1)), (a, b)))
            else:
                skipped += 1
        for trio in itertools.combinations(rest, 3):
            for piv in range(3):
                a = trio[piv]
                b, c = [trio[q] for q in range(3) if q != piv]
                ai = inv[a]
                aib, aic = G.mul(ai, b), G.mul(ai, c)
                if aib in members and aic in members:
                    lits = ((idx[(aib, aic)], 1), (idx[(b, c)], -1), (idx[(a, c)], 1), (idx[(a, b)], -1))
                    clauses.append(Clause("cocycle", lits, (a, b, c)))
                    break
            else:
                skipped += 1
        note = "" if len(rest) >= 2 else "fewer than two nonidentity elements: no variables"
    else:
        variables = [(a,) for a in rest]
        idx = {k: i for i, k in enumerate(variables)}
        for a in rest:
            ai = inv[a]
            if ai not in members:
                skipped += 1
                continue
            i, j = idx[(a,)], idx[(ai,)]
            if i <= j:
                clauses.append(Clause("eq", ((i, 1), (j, -1)), (a,)))
        for a in rest:
            for b in rest:
                ab = G.mul(a, b)
                if ab == e:
                    continue
                if ab not in members:
                    skipped += 1
                    continue
                clauses.append(Clause("cone", ((idx[(a,)], -1), (idx[(b,)], -1), (idx[(ab,)], 1)), (a, b)))
        note = "" if rest else "trivial ball: no variables"
    return ConstraintInstance(G, radius, mode, elems, variables, clauses, skipped, note)


# ---------------------------------------------------------------------------
# Solver


class _UnionFind:
    """Signed union-find whose merges are remembered as a spanning forest for explanations."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [1] * n  # value(x) = parity[x] * value(parent[x])
        self.adj: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]

    def find(self, x: int) -> tuple[int, int]:
        s = 1
        while self.parent[x] != x:
            s *= self.parity[x]
            x = self.parent[x]
        return x, s

    def union(self, a: int, b: int, rel: int, cid: int):
        """Impose value(a) = rel * value(b). Returns None or a conflicting clause set."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        if ra == rb:
            if sa * sb != rel:
                return set(self.explain(a, b)) | {cid}
            return None
        # value(ra) = sa*value(a) = sa*rel*value(b) = sa*rel*sb*value(rb)
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        self.parity[ra] = sa * rel * sb
        self.adj[a].append((b, rel, cid))
        self.adj[b].append((a, rel, cid))
        return None

    def explain(self, a: int, b: int) -> list[int]:
        """Clause ids on the forest path between ``a`` and ``b``."""
        if a == b:
            return []
        prev = {a: None}
        dq = deque([a])
        while dq:
            x = dq.popleft()
            if x == b:
                break
            for y, _, cid in self.adj[x]:
                if y not in prev:
                    prev[y] = (x, cid)
                    dq.append(y)
        out = []
        x = b
        while prev[x] is not None:
            x, cid = prev[x]
            out.append(cid)
        return out


class _Search:
    """Backtracking over class representatives with unit propagation."""

    def __init__(self, nvars: int, clauses: Sequence[Clause], ids: Sequence[int]):
        self.n = nvars
        self.uf = _UnionFind(nvars)
        self.conflict: set | None = None
        self.cons: list[tuple[str, list, int]] = []
        for c, cid in zip(clauses, ids):
            if c.kind == "eq":
                (a, sa), (b, sb) = c.lits
                bad = self.uf.union(a, b, sa * sb, cid)
                if bad is not None and self.conflict is None:
                    self.conflict = bad
        self.root_of = [self.uf.find(v) for v in range(nvars)]
        for c, cid in zip(clauses, ids):
            if c.kind != "eq":
                lits = [(self.root_of[v][0], s * self.root_of[v][1]) for v, s in c.lits]
                self.cons.append((c.kind, lits, cid))
        self.raw = {cid: c for c, cid in zip(clauses, ids)}
        self.roots = sorted({r for r, _ in self.root_of})
        self.occ: dict[int, list[int]] = {r: [] for r in self.roots}
        for k, (_, lits, _) in enumerate(self.cons):
            for r in dict.fromkeys(v for v, _ in lits):
                self.occ[r].append(k)
        self.assign: dict[int, int] = {}
        self.touched: set[int] = set()

    # -- propagation ---------------------------------------------------------

    def _status(self, k: int):
        """(conflict?, forced literal list) for constraint ``k``."""
        kind, lits, _ = self.cons[k]
        t = f = 0
        unk = []
        for v, s in lits:
            a = self.assign.get(v)
            if a is None:
                unk.append((v, s))
            elif a * s == 1:
                t += 1
            else:
                f += 1
        if kind == "cocycle":
            if t > 2 or f > 2:
                return True, []
            if unk and t == 2:
                return False, [(v, -s) for v, s in unk]
            if unk and f == 2:
                return False, [(v, s) for v, s in unk]
            return False, []
        # cone: at least one literal true
        if t:
            return False, []
        if not unk:
            return True, []
        if len({v for v, _ in unk}) == 1 and len(set(unk)) == 1:
            return False, [unk[0]]
        return False, []

    def _propagate(self, start: list[int], trail: list[int]) -> bool:
        queue = deque(start)
        while queue:
            v = queue.popleft()
            for k in self.occ[v]:
                bad, forced = self._status(k)
                if bad:
                    self.touched.add(self.cons[k][2])
                    return False
                for fv, fs in forced:
                    cur = self.assign.get(fv)
                    if cur is None:
                        self.assign[fv] = fs
                        trail.append(fv)
                        queue.append(fv)
                        self.touched.add(self.cons[k][2])
                    elif cur != fs:
                        self.touched.add(self.cons[k][2])
                        return False
        return True

    def _initial(self, trail) -> bool:
        # constraints that are unit or conflicting before any decision
        for k in range(len(self.cons)):
            bad, forced = self._status(k)
            if bad:
                self.touched.add(self.cons[k][2])
                return False
            for fv, fs in forced:
                cur = self.assign.get(fv)
                if cur is None:
                    self.assign[fv] = fs
                    trail.append(fv)
                    self.touched.add(self.cons[k][2])
                    if not self._propagate([fv], trail):
                        return False
                elif cur != fs:
                    self.touched.add(self.cons[k][2])
                    return False
        return True

    def _undo(self, trail, mark):
        while len(trail) > mark:
            del self.assign[trail.pop()]

    def _next_var(self):
        for r in self.roots:
            if r not in self.assign:
                return r
        return None

    def run(self, all_solutions: bool = False, limit: int | None = None, fixed: tuple | None = None):
        """Yield total assignments of class roots (as dicts)."""
        if self.conflict is not None:
            self.touched |= self.conflict
            return
        trail: list[int] = []
        if not self._initial(trail):
            return
        if fixed is not None:
            v, s = fixed
            if v in self.assign:
                if self.assign[v] != s:
                    return
            else:
                self.assign[v] = s
                trail.append(v)
                if not self._propagate([v], trail):
                    return
        found = 0
        stack = []  # (var, next value to try or None, trail mark)

        def decide():
            v = self._next_var()
            if v is None:
                return None
            stack.append([v, -1, len(trail)])
            self.assign[v] = 1
            trail.append(v)
            return v

        v = decide()
        if v is None:
            yield dict(self.assign)
            return
        ok = self._propagate([v], trail)
        while True:
            if ok:
                v = self._next_var()
                if v is None:
                    yield dict(self.assign)
                    found += 1
                    if not all_solutions or (limit is not None and found >= limit):
                        return
                    ok = False
                    continue
                v = decide()
                ok = self._propagate([v], trail)
                continue
            # backtrack
            while stack and stack[-1][1] is None:
                stack.pop()
            if not stack:
                return
            top = stack[-1]
            var, val, mark = top
            self._undo(trail, mark)
            top[1] = None
            self.assign[var] = val
            trail.append(var)
            ok = self._propagate([var], trail)

    def expand(self, x: dict) -> list[int]:
        """Class assignment -> values of every raw variable."""
        return [s * x[r] for r, s in self.root_of]

    def core(self) -> set[int]:
        """Touched constraints plus the equalities linking their variables to class roots."""
        out = set(self.touched)
        for cid in list(self.touched):
            c = self.raw[cid]
            if c.kind == "eq":
                continue
            for v, _ in c.lits:
                r, _ = self.root_of[v]
                out.update(self.uf.explain(v, r))
        return out


@dataclass
class Sat:
    assignment: list  # +-1 per variable of the instance


@dataclass
class Unsat:
    core: list  # clause indices into the instance


def _solve_subset(inst: ConstraintInstance, ids: Sequence[int]):
    s = _Search(len(inst.variables), [inst.clauses[i] for i in ids], ids)
    for x in s.run():
        return Sat(s.expand(x)), s
    return Unsat(sorted(s.core())), s


def solve(inst: ConstraintInstance, threads: int = 1):
    """Sat with a total assignment, or Unsat with a clause subset that is unsatisfiable.

    With ``threads > 1`` the two values of the first decision variable are
    explored concurrently; the result is the one the sequential search returns.
    """
    ids = list(range(len(inst.clauses)))
    if threads <= 1:
        res, _ = _solve_subset(inst, ids)
        return res
    probe = _Search(len(inst.variables), inst.clauses, ids)
    if probe.conflict is not None or not probe.roots:
        res, _ = _solve_subset(inst, ids)
        return res
    first = probe.roots[0]

    def branch(val):
        s = _Search(len(inst.variables), inst.clauses, ids)
        for x in s.run(fixed=(first, val)):
            return Sat(s.expand(x)), s
        return None, s

    with ThreadPoolExecutor(max_workers=2) as ex:
        plus, minus = ex.map(branch, (1, -1))
    if plus[0] is not None:
        return plus[0]
    if minus[0] is not None:
        return minus[0]
    core = plus[1].core() | minus[1].core()
    return Unsat(sorted(core))


# ---------------------------------------------------------------------------
# Certificates


@dataclass
class Certificate:
    mode: str
    group_sha: str
    clauses: list  # Clause objects with variable indices into ``variables``
    variables: list  # group-element keys
    group: Group | None = None
    minimized: bool = True

    def to_json(self) -> dict:
        G = self.group

        def enc(x):
            return element_to_json(G, x)

        out = {
            "mode": self.mode,
            "group_sha": self.group_sha,
            "variables": [[enc(a) for a in key] for key in self.variables],
            "clauses": [
                {"kind": c.kind, "lits": [[v, s] for v, s in c.lits], "source": [enc(a) for a in c.source]}
                for c in self.clauses
            ],
            "triples": ([[enc(G.identity), enc(k[0]), enc(k[1])] for k in self.variables]
                        if self.mode == CO else []),
            "minimized": self.minimized,
        }
        return out


def _certificate(inst: ConstraintInstance, ids: Sequence[int], minimized: bool) -> Certificate:
    used = sorted({v for i in ids for v, _ in inst.clauses[i].lits})
    remap = {v: j for j, v in enumerate(used)}
    clauses = [Clause(c.kind, tuple((remap[v], s) for v, s in c.lits), c.source)
               for c in (inst.clauses[i] for i in ids)]
    return Certificate(inst.mode, group_sha(inst.group), clauses, [inst.variables[v] for v in used],
                       inst.group, minimized)


def minimize_certificate(inst: ConstraintInstance, core: Sequence[int]) -> Certificate:
    """Deletion-based minimization: drop each clause whose removal keeps the set unsatisfiable."""
    ids = sorted(core)
    res, _ = _solve_subset(inst, ids)
    if isinstance(res, Sat):
        raise NotUnsat("the given clause set is satisfiable")
    keep = list(ids)
    for cid in ids:
        trial = [i for i in keep if i != cid]
        r, _ = _solve_subset(inst, trial)
        if isinstance(r, Unsat):
            keep = trial
    return _certificate(inst, keep, True)


def certificate_from_json(obj) -> tuple[str, str, list, list]:
    """Parse the structural part: ``(mode, sha, clauses, raw variables)``."""
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected an object")
    for key in ("mode", "group_sha", "clauses"):
        if key not in obj:
            raise SchemaError(f"$.{key}", "missing required field")
    mode = obj["mode"]
    if mode not in (CO, LO):
        raise SchemaError("$.mode", "must be 'co' or 'lo'")
    clauses = []
    for i, c in enumerate(obj["clauses"]):
        p = f"$.clauses[{i}]"
        if not isinstance(c, dict) or c.get("kind") not in ("eq", "cocycle", "cone"):
            raise SchemaError(f"{p}.kind", "must be 'eq', 'cocycle' or 'cone'")
        lits = c.get("lits")
        want = {"eq": 2, "cocycle": 4, "cone": 3}[c["kind"]]
        if not isinstance(lits, list) or len(lits) != want:
            raise SchemaError(f"{p}.lits", f"expected {want} literals")
        out = []
        for j, l in enumerate(lits):
            if (not isinstance(l, list) or len(l) != 2 or not isinstance(l[0], int) or l[0] < 0
                    or l[1] not in (1, -1)):
                raise SchemaError(f"{p}.lits[{j}]", "expected [variable index, +1 or -1]")
            out.append((l[0], l[1]))
        clauses.append(Clause(c["kind"], tuple(out), tuple(c.get("source", ()))))
    return mode, obj["group_sha"], clauses, obj.get("variables", [])


def exhaustive_unsat(clauses: Sequence[Clause], chunk_bits: int = 18) -> bool:
    """True iff no +-1 assignment satisfies all clauses (brute force over used variables)."""
    used = sorted({v for c in clauses for v, _ in c.lits})
    k = len(used)
    pos = {v: i for i, v in enumerate(used)}
    if k > 30:
        return _backtrack_unsat(clauses)
    total = 1 << k
    step = 1 << min(k, chunk_bits)
    shifts = np.arange(k, dtype=np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, min(total, start + step), dtype=np.int64)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int8) * 2 - 1  # +-1
        alive = np.ones(len(idx), dtype=bool)
        for c in clauses:
            vals = np.stack([bits[:, pos[v]] * s for v, s in c.lits], axis=1)
            if c.kind == "eq":
                ok = vals[:, 0] == vals[:, 1]
            elif c.kind == "cocycle":
                ok = (vals == 1).sum(axis=1) == 2
            else:
                ok = (vals == 1).any(axis=1)
            alive &= ok
            if not alive.any():
                break
        if alive.any():
            return False
    return True


def _backtrack_unsat(clauses: Sequence[Clause]) -> bool:
    used = sorted({v for c in clauses for v, _ in c.lits})
    by_var = {v: [] for v in used}
    for c in clauses:
        last = max(used.index(v) for v, _ in c.lits)
        by_var[used[last]].append(c)
    x = {}

    def rec(i):
        if i == len(used):
            return True
        v = used[i]
        for val in (1, -1):
            x[v] = val
            if all(c.holds(x) for c in by_var[v]) and rec(i + 1):
                return True
        del x[v]
        return False

    return not rec(0)


@dataclass
class CertificateCheck:
    unsat: bool
    derivable: bool | None  # None when no group was supplied
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.unsat and self.derivable is not False


def _expected_lits(G: Group, mode: str, c: Clause, key_of, keys) -> tuple | None:
    """Recompute a clause's literals from its source elements (None if underivable)."""
    try:
        if mode == CO:
            if c.kind == "eq":
                a, b = c.source
                ai = G.inv(a)
                out = []
                for other, sign in (((b, a), -1), ((G.mul(ai, b), ai), 1)):
                    if other in keys:
                        out.append(((key_of((a, b)), 1), (key_of(other), sign)))
                return tuple(out)
            if c.kind == "cocycle":
                a, b, cc = c.source
                ai = G.inv(a)
                return ((((key_of((G.mul(ai, b), G.mul(ai, cc))), 1), (key_of((b, cc)), -1),
                          (key_of((a, cc)), 1), (key_of((a, b)), -1)),))
            return None
        if c.kind == "eq":
            (a,) = c.source
            return ((((key_of((a,)), 1), (key_of((G.inv(a),)), -1)),))
        if c.kind == "cone":
            a, b = c.source
            return ((((key_of((a,)), -1), (key_of((b,)), -1), (key_of((G.mul(a, b),)), 1)),))
    except KeyError:
        return None
    return None


def verify_certificate(obj, group: Group | None = None) -> CertificateCheck:
    """Replay a certificate: brute-force unsatisfiability, and if ``group`` is
    given, check the hash and re-derive every clause from its source elements."""
    if isinstance(obj, Certificate):
        obj = obj.to_json()
    mode, sha, clauses, raw_vars = certificate_from_json(obj)
    unsat = exhaustive_unsat(clauses) if clauses else False
    if group is None:
        return CertificateCheck(unsat, None, "" if unsat else "clauses are satisfiable")
    if sha != group_sha(group):
        return CertificateCheck(unsat, False, "group hash does not match")
    try:
        keys = [tuple(element_from_json(group, a, f"$.variables[{i}]") for a in key)
                for i, key in enumerate(raw_vars)]
        src_clauses = [
            Clause(c.kind, c.lits, tuple(element_from_json(group, a, f"$.clauses[{i}].source") for a in c.source))
            for i, c in enumerate(clauses)
        ]
    except SchemaError as exc:
        return CertificateCheck(unsat, False, str(exc))
    index = {k: i for i, k in enumerate(keys)}
    e = group.identity
    for k in keys:
        if e in k or (mode == CO and (len(k) != 2 or k[0] == k[1])) or (mode == LO and len(k) != 1):
            return CertificateCheck(unsat, False, f"bad variable {k!r}")
    for i, c in enumerate(src_clauses):
        exp = _expected_lits(group, mode, c, lambda k: index[k], index)
        if exp is None or tuple(c.lits) not in exp:
            return CertificateCheck(unsat, False, f"clause {i} is not derivable from its source")
    return CertificateCheck(unsat, True, "" if unsat else "clauses are satisfiable")


# ---------------------------------------------------------------------------
# Search and enumeration


@dataclass
class NotOrderable:
    radius: int
    certificate: Certificate


@dataclass
class Inconclusive:
    max_radius: int
    assignment: list  # satisfying assignment at max_radius (not a proof of orderability)
    instance: ConstraintInstance | None = None


def search(G: Group, max_radius: int, mode: str = CO, threads: int = 1):
    """Iterative deepening: the first unsatisfiable radius yields a minimized certificate."""
    if max_radius < 1:
        raise ValueError("max_radius must be at least 1")
    last = None
    for r in range(1, max_radius + 1):
        inst = build_instance(G, r, mode)
        res = solve(inst, threads)
        if isinstance(res, Unsat):
            return NotOrderable(r, minimize_certificate(inst, res.core))
        last = (inst, res)
        if len(inst.elements) == len(ball(G, r + 1)):
            break  # the ball stopped growing: the whole (finite) group is covered
    inst, res = last
    return Inconclusive(max_radius, res.assignment, inst)


def assignment_to_table(inst: ConstraintInstance, x: Sequence[int]) -> ExplicitTable:
    if inst.mode != CO:
        raise UnsupportedVariant("only CO assignments describe circular orders")
    return ExplicitTable(inst.group, {k: v for k, v in zip(inst.variables, x)})


def assignment_cone(inst: ConstraintInstance, x: Sequence[int]) -> list:
    if inst.mode != LO:
        raise UnsupportedVariant("only LO assignments describe cones")
    return [k[0] for k, v in zip(inst.variables, x) if v == 1]


def enumerate_orders(G: FiniteTable, threads: int = 1) -> list[ExplicitTable]:
    """Every circular order of a finite group, as explicit tables, in search order."""
    if not isinstance(G, FiniteTable):
        raise UnsupportedVariant("enumerate_orders needs a finite table")
    inst = build_instance(G, max(1, G.order), CO)
    if not inst.variables:
        return [ExplicitTable(G)]
    ids = list(range(len(inst.clauses)))
    probe = _Search(len(inst.variables), inst.clauses, ids)
    sols: list[list[int]] = []
    if threads > 1 and probe.conflict is None and probe.roots:
        first = probe.roots[0]

        def branch(val):
            s = _Search(len(inst.variables), inst.clauses, ids)
            return [s.expand(x) for x in s.run(all_solutions=True, fixed=(first, val))]

        with ThreadPoolExecutor(max_workers=2) as ex:
            for part in ex.map(branch, (1, -1)):
                sols.extend(part)
    else:
        sols = [probe.expand(x) for x in probe.run(all_solutions=True)]
    return [assignment_to_table(inst, x) for x in sols]


def group_from_certificate_file(path: str) -> Group:
    with open(path) as fh:
        return group_from_json(json.load(fh))
