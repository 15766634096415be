"""Subsets of the diagonal lattice D^n and their combinatorics.

A subset is stored as its coefficient matrix: row ``i`` holds the
coordinates of ``v_i`` over the basis ``e_1..e_n`` with ``e_i . e_j =
-delta_ij``.  Indices in this module are 0-based; row order is the chain
order ``v_1, ..., v_n``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import cached_property

__all__ = [
    "LatticeSubset",
    "SubsetStats",
    "ConditionError",
    "dot",
    "gram",
    "conds_ok",
    "stats",
    "is_irreducible",
    "is_good",
    "is_standard",
    "project",
    "contract",
    "expand",
    "components",
    "bad_component_count",
    "is_bad_component",
    "canonical_rows",
    "canonical_key",
    "determinant",
]


class ConditionError(ValueError):
    """A subset does not satisfy the conditions an operation requires."""


def dot(u, v) -> int:
    return -sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class LatticeSubset:
    """Vectors ``v_1..v_k`` of ``D^n``; normally ``k == n``."""

    rows: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(len(r) != self.n for r in rows):
            raise ValueError(f"every vector must have {self.n} coordinates")

    @classmethod
    def from_rows(cls, rows) -> "LatticeSubset":
        rows = [tuple(r) for r in rows]
        return cls(tuple(rows), len(rows[0]) if rows else 0)

    def __len__(self):
        return len(self.rows)

    @cached_property
    def squares(self) -> tuple[int, ...]:
        """``a_i = -v_i . v_i``."""
        return tuple(sum(x * x for x in r) for r in self.rows)

    @property
    def string(self) -> tuple[int, ...]:
        return self.squares

    def E(self, i: int) -> frozenset[int]:
        return frozenset(j for j, r in enumerate(self.rows) if r[i])

    def V(self, j: int) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.rows[j]) if x)

    @property
    def I(self) -> int:
        return sum(a - 3 for a in self.squares)

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.rows])

    @classmethod
    def from_json(cls, text: str) -> "LatticeSubset":
        return cls.from_rows(json.loads(text))

    def gram_csv(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(gram(self))
        return buf.getvalue()

    def matrix_csv(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(self.rows)
        return buf.getvalue()


@dataclass(frozen=True)
class SubsetStats:
    I: int
    p_counts: tuple[int, ...]  # p_counts[i-1] = p_i
    c: int
    b: int
    E_sets: tuple[frozenset[int], ...]
    V_sets: tuple[frozenset[int], ...]

    def p(self, i: int) -> int:
        return self.p_counts[i - 1] if 1 <= i <= len(self.p_counts) else 0


def gram(S: LatticeSubset) -> list[list[int]]:
    """``Q = -M M^t``."""
    return [[dot(u, v) for v in S.rows] for u in S.rows]


def conds_ok(S: LatticeSubset, *, standard: bool = False) -> bool:
    """Diagonal <= -2, neighbours 0 or 1 (exactly 1 if ``standard``), others 0."""
    rows = S.rows
    k = len(rows)
    for i in range(k):
        if S.squares[i] < 2:
            return False
        for j in range(i + 1, k):
            d = dot(rows[i], rows[j])
            if j == i + 1:
                if d != 1 and (standard or d != 0):
                    return False
            elif d != 0:
                return False
    return True


def is_standard(S: LatticeSubset) -> bool:
    return conds_ok(S, standard=True)


def is_irreducible(S: LatticeSubset) -> bool:
    """Vectors sharing a coordinate are linked; check the links connect all of S."""
    k = len(S.rows)
    if k <= 1:
        return True
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(S.n):
        users = [j for j, r in enumerate(S.rows) if r[i]]
        for j in users[1:]:
            a, b = find(users[0]), find(j)
            if a != b:
                parent[a] = b
    return len({find(j) for j in range(k)}) == 1


def is_good(S: LatticeSubset) -> bool:
    return conds_ok(S) and is_irreducible(S)


def components(S: LatticeSubset) -> list[tuple[int, int]]:
    """Connected components of the intersection graph as ``(first, last)`` intervals.

    Assumes the chain conditions, under which every edge joins consecutive rows.
    """
    out = []
    start = 0
    for i in range(1, len(S.rows) + 1):
        if i == len(S.rows) or dot(S.rows[i - 1], S.rows[i]) != 1:
            out.append((start, i - 1))
            start = i
    return out


def stats(S: LatticeSubset) -> SubsetStats:
    if not conds_ok(S):
        raise ConditionError("subset violates the chain conditions")
    E_sets = tuple(S.E(i) for i in range(S.n))
    V_sets = tuple(S.V(j) for j in range(len(S.rows)))
    p_counts = [0] * S.n
    for e in E_sets:
        if e:
            p_counts[len(e) - 1] += 1
    b = bad_component_count(S) if is_irreducible(S) else 0
    return SubsetStats(
        I=S.I,
        p_counts=tuple(p_counts),
        c=len(components(S)),
        b=b,
        E_sets=E_sets,
        V_sets=V_sets,
    )


def project(v, i: int) -> tuple[int, ...]:
    """``pi_{e_i}(v) = v + (v . e_i) e_i``: zero out coordinate ``i``."""
    return tuple(0 if k == i else x for k, x in enumerate(v))


def _contract_unchecked(S: LatticeSubset, i: int, s: int, t: int) -> LatticeSubset:
    rows = list(S.rows)
    rows[t] = project(rows[t], i)
    del rows[s]
    rows = tuple(r[:i] + r[i + 1:] for r in rows)
    return LatticeSubset(rows, S.n - 1)


def contract(S: LatticeSubset, i: int, s: int, t: int) -> LatticeSubset:
    """Drop ``v_s``, replace ``v_t`` by its projection off ``e_i`` and delete ``e_i``.

    The projected vector keeps ``v_t``'s place in the chain.  Requires
    ``E_i = {s, t}``, ``a_t > 2`` and every coefficient of magnitude <= 1.
    """
    if not conds_ok(S):
        raise ConditionError("contraction needs the chain conditions")
    if s == t:
        raise ConditionError("s and t must differ")
    if S.E(i) != {s, t}:
        raise ConditionError(f"E_{i} = {sorted(S.E(i))}, expected {{{s}, {t}}}")
    if S.squares[t] <= 2:
        raise ConditionError(f"a_t = {S.squares[t]} must exceed 2")
    if any(abs(x) > 1 for r in S.rows for x in r):
        raise ConditionError("contraction needs all |v_j . e_i| <= 1")
    return _contract_unchecked(S, i, s, t)


def _expand_right(S: LatticeSubset) -> LatticeSubset:
    rows = S.rows
    first, last = rows[0], rows[-1]
    k = len(rows)
    for j in range(S.n):
        if S.E(j) == {0, k - 1} and abs(first[j]) == 1 and abs(last[j]) == 1:
            break
    else:
        raise ConditionError("no coordinate is shared by exactly the two end vectors")
    alpha = -last[j]
    beta = -alpha * first[j]
    new = [0] * (S.n + 1)
    new[j] = alpha
    new[S.n] = beta
    out = [r + (0,) for r in rows]
    out[0] = first + (1,)
    out.append(tuple(new))
    return LatticeSubset(tuple(out), S.n + 1)


def expand(S: LatticeSubset, side: str = "right", amount: int = 1) -> LatticeSubset:
    """Expand a standard subset by final (-2)-vectors in fresh coordinates.

    ``right`` turns the string ``(s_1..s_k)`` into ``(s_1+1, .., s_k, 2)``;
    ``left`` turns it into ``(2, s_1, .., s_k+1)``.  Each step is undone by
    :func:`contract` on the fresh coordinate.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if amount < 0:
        raise ValueError("amount must be >= 0")
    if not is_standard(S):
        raise ConditionError("expansion needs a standard subset")
    for _ in range(amount):
        if side == "right":
            S = _expand_right(S)
        else:
            R = LatticeSubset(S.rows[::-1], S.n)
            S = LatticeSubset(_expand_right(R).rows[::-1], S.n + 1)
    return S


def is_bad_component(S: LatticeSubset, first: int, last: int) -> bool:
    """Whether the component ``v_first..v_last`` of a good subset is bad.

    Peels final (-2)-vectors by contraction until the component has three
    vectors and checks the base pattern: squares (2, >2, 2) and a coordinate
    used by exactly those three vectors.
    """
    size = last - first + 1
    if size < 3:
        return False
    a = S.squares
    if size == 3:
        if not (a[first] == 2 and a[first + 1] > 2 and a[last] == 2):
            return False
        want = {first, first + 1, last}
        return any(S.E(j) == want for j in range(S.n))
    ncomp = len(components(S))
    for end in (first, last):
        if a[end] != 2:
            continue
        for h in range(S.n):
            E = S.E(h)
            if len(E) != 2 or end not in E:
                continue
            (t,) = E - {end}
            if not first <= t <= last or a[t] <= 2:
                continue
            if abs(S.rows[end][h]) != 1 or abs(S.rows[t][h]) != 1:
                continue
            T = _contract_unchecked(S, h, end, t)
            if not is_good(T) or len(components(T)) != ncomp:
                continue
            if is_bad_component(T, first, last - 1):
                return True
    return False


def bad_component_count(S: LatticeSubset) -> int:
    if not is_good(S):
        raise ConditionError("bad components are defined for good subsets")
    return sum(is_bad_component(S, f, l) for f, l in components(S))


def canonical_rows(rows, n: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Canonical representative under signed coordinate permutations.

    Each coordinate is sign-normalised so its first nonzero use is positive,
    then coordinates are sorted lexicographically decreasing (so earlier
    first use comes first and unused coordinates go last).
    """
    rows = [tuple(r) for r in rows]
    if n is None:
        n = len(rows[0]) if rows else 0
    cols = []
    for i in range(n):
        col = [r[i] for r in rows]
        lead = next((x for x in col if x), 0)
        if lead < 0:
            col = [-x for x in col]
        cols.append(tuple(col))
    cols.sort(reverse=True)
    return tuple(tuple(c[j] for c in cols) for j in range(len(rows)))


def canonical_key(S: LatticeSubset, *, allow_reverse: bool = False,
                  component_signs: bool = False):
    """Smallest canonical matrix over the requested extra symmetries.

    ``component_signs`` also identifies subsets that differ by negating every
    vector of some intersection-graph components; this keeps the Gram matrix.
    """
    variants = [S.rows]
    if component_signs:
        comps = components(S)
        variants = []
        for mask in range(1 << len(comps)):
            rows = list(S.rows)
            for c, (a, b) in enumerate(comps):
                if mask >> c & 1:
                    for j in range(a, b + 1):
                        rows[j] = tuple(-x for x in rows[j])
            variants.append(tuple(rows))
    if allow_reverse:
        variants += [rows[::-1] for rows in variants]
    return min(canonical_rows(rows, S.n) for rows in variants)


def determinant(matrix) -> int:
    """Exact integer determinant (Bareiss)."""
    m = [list(r) for r in matrix]
    k = len(m)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(k - 1):
        if m[c][c] == 0:
            for r in range(c + 1, k):
                if m[r][c]:
                    m[c], m[r] = m[r], m[c]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(c + 1, k):
            for j in range(c + 1, k):
                m[r][j] = (m[r][j] * m[c][c] - m[r][c] * m[c][j]) // prev
        prev = m[c][c]
    return sign * m[-1][-1]
