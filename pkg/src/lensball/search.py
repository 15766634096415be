"""Exhaustive searches over subsets of D^n and the Casson-Gordon sums.

The embedding search places the vectors ``v_1, .., v_n`` one row at a time.
Symmetry under signed coordinate permutations is broken by only building
matrices whose columns, restricted to the rows placed so far, have their
first nonzero entry positive and are sorted lexicographically decreasing.
Every orbit has exactly one such representative, so full enumeration yields
one matrix per class and the first-found matrix is well defined.

Inside a row the coordinates are not scanned left to right.  A row must hit
a prescribed dot product with every earlier row, so the generator always
branches on a coordinate from the support of some earlier row whose dot
product is still off target, and falls back to "spare" coordinates only
once every constraint is met.  Fresh coordinates are interchangeable and are
filled last as a non-increasing run of positive entries.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

import numpy as np

from .cfrac import Fraction, check_neg_string, neg_expand
from .lattice import LatticeSubset, canonical_key, is_good, is_standard, stats

__all__ = [
    "DEFAULT_MAX_NODES",
    "SearchLimitExceeded",
    "EmbeddingResult",
    "CGReport",
    "embed_string",
    "iter_embeddings",
    "donaldson_obstruction",
    "enumerate_standard",
    "enumerate_good_rank3",
    "strings_with_invariant",
    "casson_gordon_sums",
    "casson_gordon_check",
]

DEFAULT_MAX_NODES = 10**8
MAX_ENUM_RANK = 7
MAX_CG_M = 31


class SearchLimitExceeded(RuntimeError):
    """The node budget ran out before the search space was exhausted."""

    def __init__(self, nodes: int):
        super().__init__(f"search exceeded {nodes} nodes")
        self.nodes = nodes


def max_nodes_default() -> int:
    env = os.environ.get("LENSBALL_MAX_NODES")
    return int(env) if env else DEFAULT_MAX_NODES


@dataclass
class EmbeddingResult:
    string: tuple[int, ...]
    found: bool
    matrix: tuple[tuple[int, ...], ...] | None = None
    nodes_explored: int = 0
    status: str = "ok"  # "ok" or "resource_exceeded"

    def to_dict(self) -> dict:
        return {
            "string": list(self.string),
            "found": self.found,
            "matrix": [list(r) for r in self.matrix] if self.matrix else None,
            "nodes_explored": self.nodes_explored,
            "status": self.status,
        }


@lru_cache(maxsize=None)
def _square_runs(r: int, parts: int, cap: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Non-increasing positive tuples of length <= ``parts`` with squares summing to r."""
    if r == 0:
        return ((),)
    if parts == 0:
        return ()
    top = isqrt(r) if cap is None else min(cap, isqrt(r))
    out = []
    for v in range(top, 0, -1):
        for rest in _square_runs(r - v * v, parts - 1, v):
            out.append((v,) + rest)
    return tuple(out)


class _ChainSearch:
    """Backtracking over integer matrices with a prescribed chain Gram pattern.

    ``adjacent`` lists the Euclidean dot products allowed between consecutive
    rows (``(-1,)`` for standard subsets, ``(-1, 0)`` for the weaker chain
    conditions); non-consecutive rows are always orthogonal.
    """

    def __init__(self, norms, ncols, adjacent=(-1,), max_nodes=None):
        self.norms = tuple(norms)
        self.n = ncols
        self.adjacent = tuple(adjacent)
        self.max_nodes = max_nodes_default() if max_nodes is None else max_nodes
        self.nodes = 0
        self.rows = []
        self.supp = []                      # per row: [(col, val)]
        self.users = [[] for _ in range(ncols)]  # per col: [(row, val)]
        self.tied = [False] * ncols         # col c equal to col c-1 so far
        self.used = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise SearchLimitExceeded(self.max_nodes)

    # -- row placement -------------------------------------------------
    def _push(self, x):
        i = len(self.rows)
        self.rows.append(x)
        sp = [(c, v) for c, v in enumerate(x) if v]
        self.supp.append(sp)
        for c, v in sp:
            self.users[c].append((i, v))
        saved = (self.tied, self.used)
        if i == 0:
            self.tied = [False] + [x[c] == x[c - 1] for c in range(1, self.n)]
        else:
            t = self.tied
            self.tied = [False] + [t[c] and x[c] == x[c - 1] for c in range(1, self.n)]
        last = max((c for c, _ in sp), default=-1)
        self.used = max(self.used, last + 1)
        return saved

    def _pop(self, saved):
        self.rows.pop()
        for c, _ in self.supp.pop():
            self.users[c].pop()
        self.tied, self.used = saved

    # -- candidate rows ------------------------------------------------
    def candidates(self, i, target_prev):
        """All admissible rows ``i`` with Euclidean dot ``target_prev`` against row i-1."""
        a = self.norms[i]
        u = self.used
        fresh = self.n - u
        assign = [None] * u
        demand = {}
        if i > 0 and target_prev:
            demand[i - 1] = target_prev
        out = []
        supp, users, tied = self.supp, self.users, self.tied

        def free_norm(j, floor):
            return sum(m * m for c, m in supp[j] if c >= floor and assign[c] is None)

        def apply(c, v, sign):
            for j, m in users[c]:
                d = demand.get(j, 0) - sign * v * m
                if d:
                    demand[j] = d
                else:
                    demand.pop(j, None)

        def feasible(c, r, floor):
            for j, _ in users[c]:
                d = demand.get(j)
                if d:
                    nrm = free_norm(j, floor)
                    if nrm == 0 or d * d > r * nrm:
                        return False
            # tied neighbours must stay non-increasing
            v = assign[c]
            if c > 0 and tied[c]:
                left = assign[c - 1]
                if left is None and c - 1 < floor:
                    left = 0
                if left is not None and left < v:
                    return False
            if c + 1 < u and tied[c + 1]:
                right = assign[c + 1]
                if right is not None and v < right:
                    return False
            return True

        def emit(r):
            base = [0 if x is None else x for x in assign]
            for c in range(1, u):
                if tied[c] and base[c - 1] < base[c]:
                    return
            for run in _square_runs(r, fresh):
                out.append(tuple(base) + run + (0,) * (fresh - len(run)))

        def dfs(r, floor):
            self._tick()
            if demand:
                best = None
                for j in demand:
                    free = [c for c, _ in supp[j] if c >= floor and assign[c] is None]
                    if best is None or len(free) < len(best):
                        best = free
                if not best:
                    return
                c = best[0]
                top = isqrt(r)
                for v in range(-top, top + 1):
                    assign[c] = v
                    apply(c, v, 1)
                    if feasible(c, r - v * v, floor):
                        dfs(r - v * v, floor)
                    apply(c, v, -1)
                assign[c] = None
                return
            emit(r)
            if r < 2:
                return
            # spare coordinate: the lowest-index extra nonzero among used columns
            top = isqrt(r - 1)
            for c in range(floor, u):
                if assign[c] is not None:
                    continue
                for v in range(-top, top + 1):
                    if v == 0:
                        continue
                    assign[c] = v
                    apply(c, v, 1)
                    if feasible(c, r - v * v, c + 1):
                        dfs(r - v * v, c + 1)
                    apply(c, v, -1)
                assign[c] = None

        dfs(a, 0)
        out.sort(reverse=True)
        return out

    # -- whole matrices ----------------------------------------------------
    def solutions(self):
        """Yield every canonical matrix (as a tuple of rows)."""
        k = len(self.norms)

        def rec(i):
            if i == k:
                yield tuple(self.rows)
                return
            targets = self.adjacent if i > 0 else (0,)
            for tp in targets:
                for x in self.candidates(i, tp):
                    self._tick()
                    saved = self._push(x)
                    yield from rec(i + 1)
                    self._pop(saved)

        yield from rec(0)


def iter_embeddings(string, ncols=None, *, adjacent=(-1,), max_nodes=None):
    """Yield all canonical realisations of a chain string in D^ncols."""
    s = tuple(string)
    search = _ChainSearch(s, len(s) if ncols is None else ncols, adjacent, max_nodes)
    yield from search.solutions()


def embed_string(string, *, max_nodes=None) -> EmbeddingResult:
    """Search for a standard subset of D^n realising ``string`` (n = its length)."""
    s = check_neg_string(string)
    search = _ChainSearch(s, len(s), (-1,), max_nodes)
    try:
        for M in search.solutions():
            return EmbeddingResult(s, True, M, search.nodes)
    except SearchLimitExceeded:
        return EmbeddingResult(s, False, None, search.nodes, "resource_exceeded")
    return EmbeddingResult(s, False, None, search.nodes)


def donaldson_obstruction(fr: Fraction, *, max_nodes=None) -> bool:
    """True iff the strings of p/q and p/(p-q) both embed in diagonal lattices."""
    for g in (fr, Fraction(fr.p, fr.p - fr.q)):
        res = embed_string(neg_expand(g), max_nodes=max_nodes)
        if res.status != "ok":
            raise SearchLimitExceeded(res.nodes_explored)
        if not res.found:
            return False
    return True


def strings_with_invariant(n: int, I_max: int, I_min: int | None = None):
    """All strings of length n with entries >= 2 and I_min <= sum(a_i - 3) <= I_max."""
    budget = 3 * n + I_max  # bound on sum(a_i)
    low = -math.inf if I_min is None else 3 * n + I_min

    def rec(prefix, left):
        if len(prefix) == n:
            if sum(prefix) >= low:
                yield tuple(prefix)
            return
        slots = n - len(prefix) - 1
        for a in range(2, left - 2 * slots + 1):
            prefix.append(a)
            yield from rec(prefix, left - a)
            prefix.pop()

    yield from rec([], budget)


def enumerate_standard(n: int, I_max: int, *, max_nodes=None) -> list[LatticeSubset]:
    """Every standard subset of D^n with I <= I_max, one per Aut(D^n) class."""
    if not 3 <= n <= MAX_ENUM_RANK:
        raise ValueError(f"rank must be in 3..{MAX_ENUM_RANK}, got {n}")
    out = []
    for s in strings_with_invariant(n, I_max):
        for M in iter_embeddings(s, n, max_nodes=max_nodes):
            out.append(LatticeSubset(M, n))
    return out


def enumerate_good_rank3(I_max: int = -1, *, max_nodes=None) -> list[LatticeSubset]:
    """Good subsets of D^3 with I <= I_max.

    Classes are taken up to Aut(D^3), reversal of the chain and negating
    whole components of the intersection graph.
    """
    if I_max >= 0:
        raise ValueError("I_max must be negative")
    seen = {}
    for s in strings_with_invariant(3, I_max):
        for M in iter_embeddings(s, 3, adjacent=(-1, 0), max_nodes=max_nodes):
            S = LatticeSubset(M, 3)
            if not is_good(S):
                continue
            key = canonical_key(S, allow_reverse=True, component_signs=True)
            if key not in seen:
                seen[key] = LatticeSubset(key, 3)
    return [seen[k] for k in sorted(seen)]


@dataclass
class CGReport:
    m: int
    q: int
    values: list[float] = field(default_factory=list)
    all_pm_one: bool = False
    tolerance: float = 1e-6

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "q": self.q,
            "values": self.values,
            "all_pm_one": self.all_pm_one,
            "tolerance": self.tolerance,
        }


def casson_gordon_sums(m: int, q: int) -> np.ndarray:
    """``(2/m^2) sum_s cot(pi s/m^2) cot(pi q s/m^2) sin^2(pi r s/m)`` for r = 1..m-1."""
    p = m * m
    s = np.arange(1, p)
    # reduce q*s mod p before scaling so the angle stays accurate
    w = np.cos(np.pi * s / p) / np.sin(np.pi * s / p)
    qs = (q * s) % p
    w = w * (np.cos(np.pi * qs / p) / np.sin(np.pi * qs / p))
    r = np.arange(1, m)[:, None]
    rs = (r * s[None, :]) % m
    sin2 = np.sin(np.pi * rs / m) ** 2
    return (2.0 / p) * (sin2 @ w)


def casson_gordon_check(m: int, q: int, tolerance: float = 1e-6) -> CGReport:
    if m < 2:
        raise ValueError("m must be >= 2")
    if m > MAX_CG_M:
        raise ValueError(f"m is capped at {MAX_CG_M}")
    if math.gcd(q, m * m) != 1:
        raise ValueError(f"q={q} is not coprime to m^2={m * m}")
    vals = casson_gordon_sums(m, q)
    ok = bool(np.all(np.abs(np.abs(vals) - 1.0) <= tolerance))
    return CGReport(m, q, [float(v) for v in vals], ok, tolerance)
