"""Membership in the set R of fractions whose lens spaces bound rational balls.

R is generated by three base families with ``p = m^2`` and closed under

    f(p/q) = p/(p-q)        g(p/q) = p/q'   (q q' = 1 mod p)

Both maps are involutions, so the closure of a single fraction is a finite
orbit of at most four elements and membership reduces to scanning it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd, isqrt

from .cfrac import Fraction

__all__ = [
    "FamilyWitness",
    "RMembership",
    "f_map",
    "g_map",
    "orbit",
    "base_family_check",
    "family_witnesses",
    "is_in_R",
    "is_ribbon_2bridge",
]

FAMILIES = ("Type1", "Type2", "Type3")


@dataclass(frozen=True, order=True)
class FamilyWitness:
    family: str
    m: int
    k_or_d: int
    sign: str  # "+" or "-"

    def q_for(self) -> int:
        """The denominator this witness describes (numerator is m^2)."""
        m, x, plus = self.m, self.k_or_d, self.sign == "+"
        if self.family == "Type1":
            return m * x + (1 if plus else -1)
        return x * (m + (1 if plus else -1))


@dataclass(frozen=True)
class RMembership:
    in_R: bool
    orbit_element: Fraction | None = None
    witness: FamilyWitness | None = None

    def to_dict(self) -> dict:
        if not self.in_R:
            return {"in_R": False}
        w = self.witness
        return {
            "in_R": True,
            "orbit_element": str(self.orbit_element),
            "family": w.family,
            "m": w.m,
            "k_or_d": w.k_or_d,
            "sign": w.sign,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def f_map(fr: Fraction) -> Fraction:
    return Fraction(fr.p, fr.p - fr.q)


def g_map(fr: Fraction) -> Fraction:
    return Fraction(fr.p, pow(fr.q, -1, fr.p))


def orbit(fr: Fraction) -> frozenset[Fraction]:
    """Closure of ``{fr}`` under f and g, by fixpoint iteration."""
    # both maps fix p, so iterate on q and build Fractions once at the end
    p = fr.p
    seen = {fr.q}
    todo = [fr.q]
    while todo:
        x = todo.pop()
        for y in (p - x, pow(x, -1, p)):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(Fraction(p, q) for q in seen)


def family_witnesses(fr: Fraction) -> list[FamilyWitness]:
    """Every base-family description of ``fr``, sorted by (family, m, k/d, sign)."""
    p, q = fr.p, fr.q
    m = isqrt(p)
    if m * m != p:
        return []
    found = []
    for k in range(1, m):
        if gcd(m, k) != 1:
            continue
        for sign, eps in (("+", 1), ("-", -1)):
            if m * k + eps == q:
                found.append(FamilyWitness("Type1", m, k, sign))
    for sign, eps in (("+", 1), ("-", -1)):
        base = m + eps
        if base <= 0 or q % base:
            continue
        d = q // base
        if d <= 1:
            continue
        # Type2 pairs d(m +- 1) with 2m -+ 1; Type3 with m +- 1.
        if (2 * m - eps) % d == 0:
            found.append(FamilyWitness("Type2", m, d, sign))
        if d % 2 == 1 and (m + eps) % d == 0:
            found.append(FamilyWitness("Type3", m, d, sign))
    found.sort(key=lambda w: (FAMILIES.index(w.family), w.m, w.k_or_d, w.sign))
    return found


def base_family_check(fr: Fraction) -> FamilyWitness | None:
    found = family_witnesses(fr)
    return found[0] if found else None


def is_in_R(fr: Fraction) -> RMembership:
    r = isqrt(fr.p)
    if r * r != fr.p:
        # every orbit element shares p, and all base families need p = m^2
        return RMembership(False)
    best = None
    for x in orbit(fr):
        w = base_family_check(x)
        if w is None:
            continue
        key = (FAMILIES.index(w.family), w.m, w.k_or_d, w.sign, x.q)
        if best is None or key < best[0]:
            best = (key, x, w)
    if best is None:
        return RMembership(False)
    return RMembership(True, best[1], best[2])


def is_ribbon_2bridge(fr: Fraction) -> bool:
    """Whether the 2-bridge knot K(p,q) is ribbon (p must be odd)."""
    if fr.p % 2 == 0:
        raise ValueError(
            f"K({fr.p},{fr.q}) is a 2-component link for even p; use is_in_R"
        )
    return is_in_R(fr).in_R
