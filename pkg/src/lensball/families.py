"""String families of standard subsets with I < 0 and their fractions.

Each family is named by its invariant: ``Iminus3`` strings come from
``(2,2,2)`` by repeatedly appending or prepending a 2, the ``Iminus2_*`` and
``Iminus1_*`` families are two-parameter patterns in ``(s, t)``.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction as Rational
from math import gcd

from .cfrac import (
    Fraction,
    format_string,
    neg_eval,
    neg_expand,
    plus_eval,
    plus_to_minus,
    riemenschneider_dual,
    twos,
)

__all__ = [
    "INVARIANTS",
    "MAX_PARAM",
    "FamilySpec",
    "FamilyError",
    "family_value",
    "gen_string",
    "gen_fraction",
    "decompose_type1",
    "fraction_step",
    "string_step",
    "iminus3_strings",
    "enumerate_family",
    "specs_for_invariant",
    "family_csv",
    "ribbon_identity_suite",
]

INVARIANTS = {
    "Iminus3": -3,
    "Iminus2_t1": -2,
    "Iminus2_t2": -2,
    "Iminus1_t1": -1,
    "Iminus1_t2": -1,
    "Iminus1_t3": -1,
}

# keeps every intermediate inside 64-bit range
MAX_PARAM = 64


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    """A family name with its parameters: ``(c_1..c_k)`` or ``(s, t)``."""

    invariant: str
    params: tuple[int, ...]

    def __post_init__(self):
        params = tuple(self.params)
        object.__setattr__(self, "params", params)
        if self.invariant not in INVARIANTS:
            raise FamilyError(f"unknown family {self.invariant!r}")
        if any(not isinstance(x, int) for x in params):
            raise FamilyError("parameters must be integers")
        if any(x > MAX_PARAM for x in params):
            raise FamilyError(f"parameters are capped at {MAX_PARAM}")
        if self.invariant == "Iminus3":
            k = len(params)
            if k == 0 or any(c < 1 for c in params):
                raise FamilyError("Iminus3 needs c_1..c_k >= 1")
            if k % 2 == 0:
                raise FamilyError(f"Iminus3 needs an odd number of c's, got k={k}")
        else:
            if len(params) != 2 or any(x < 0 for x in params):
                raise FamilyError(f"{self.invariant} needs (s, t) with s, t >= 0")

    @property
    def I(self) -> int:
        return INVARIANTS[self.invariant]

    def label(self) -> str:
        if self.invariant == "Iminus3":
            return "c=" + ",".join(map(str, self.params))
        return "s={},t={}".format(*self.params)


def _iminus3_string(c) -> tuple[int, ...]:
    k = len(c)
    if k == 1:
        return (c[0] + 1,) + twos(c[0] + 1)
    # c[j-1] is c_j; odd j sit at heads on the left, even j on the right
    out = [c[k - 1] + 1]
    for j in range(k - 1, 1, -1):
        out.extend((c[j - 1] + 2,) if j % 2 else twos(c[j - 1] - 1))
    out.append(c[0] + 2)
    out.extend(twos(c[0] + 1))
    for j in range(2, k + 1):
        out.extend((c[j - 1] + 2,) if j % 2 == 0 else twos(c[j - 1] - 1))
    return tuple(out)


def gen_string(spec: FamilySpec) -> tuple[int, ...]:
    if spec.invariant == "Iminus3":
        return _iminus3_string(spec.params)
    s, t = spec.params
    if spec.invariant == "Iminus2_t1":
        return twos(t) + (3, 2 + s, 2 + t, 3) + twos(s)
    if spec.invariant == "Iminus2_t2":
        return twos(t) + (3 + s, 2, 2 + t, 3) + twos(s)
    if spec.invariant == "Iminus1_t1":
        return (t + 2, s + 2, 3) + twos(t) + (4,) + twos(s)
    if spec.invariant == "Iminus1_t2":
        return (t + 2, 2, 3 + s) + twos(t) + (4,) + twos(s)
    return (3 + t, 2, 3 + s, 3) + twos(t) + (3,) + twos(s)


def _undo_moves(s) -> list[str]:
    """Moves taking ``(2,2,2)`` to ``s``, in the order they are applied."""
    s = list(s)
    moves = []
    while len(s) > 3:
        if s[-1] == 2 and s[0] > 2:
            s = [s[0] - 1] + s[1:-1]
            moves.append("append")
        elif s[0] == 2 and s[-1] > 2:
            s = s[1:-1] + [s[-1] - 1]
            moves.append("prepend")
        else:
            raise FamilyError(f"{s} is not reachable from (2,2,2)")
    if s != [2, 2, 2]:
        raise FamilyError(f"{s} is not reachable from (2,2,2)")
    moves.reverse()
    return moves


def family_value(spec: FamilySpec) -> tuple[int, int]:
    """``(m, k)`` for Iminus3, ``(m, d)`` for the others."""
    if spec.invariant == "Iminus3":
        m, k = 2, 1
        for mv in _undo_moves(gen_string(spec)):
            m, k = (m + k, k) if mv == "append" else (2 * m - k, m)
        return m, k
    s, t = spec.params
    if spec.invariant == "Iminus2_t1":
        return 2 * s * t + 3 * s + 3 * t + 4, 2 * s + 3
    if spec.invariant == "Iminus2_t2":
        return 2 * s * t + 2 * s + 3 * t + 4, 2 * s + 3
    if spec.invariant == "Iminus1_t1":
        return 2 * s * t + 4 * s + 3 * t + 5, 2 * s + 3
    if spec.invariant == "Iminus1_t2":
        return 2 * s * t + 3 * s + 3 * t + 5, 2 * s + 3
    return 2 * t * s + 5 * s + 4 * t + 9, 2 * t + 5


def gen_fraction(spec: FamilySpec) -> Fraction:
    """The fraction of the family string, from the closed forms in ``m`` and ``d``."""
    m, x = family_value(spec)
    p = m * m
    inv = spec.invariant
    if inv == "Iminus3":
        q = m * x + 1
    elif inv.startswith("Iminus2"):
        q = p - x * (m - 1)
    elif inv in ("Iminus1_t1", "Iminus1_t2"):
        q = x * (m + 1)
    else:
        q = (2 * m - 1) * (m + 1) // x
    return Fraction(p, q)


def decompose_type1(fr: Fraction) -> tuple[int, int, str]:
    """``(m, k, sign)`` with ``fr = m^2/(mk +- 1)``, ``0 < k < m``, ``gcd(m, k) = 1``."""
    p, q = fr.p, fr.q
    m = int(round(p ** 0.5))
    while m * m > p:
        m -= 1
    while (m + 1) ** 2 <= p:
        m += 1
    if m * m != p:
        raise FamilyError(f"{fr} does not have a square numerator")
    for sign, eps in (("+", 1), ("-", -1)):
        k, r = divmod(q - eps, m)
        if r == 0 and 0 < k < m and gcd(m, k) == 1:
            return m, k, sign
    raise FamilyError(f"{fr} is not of the form m^2/(mk+-1) with gcd(m,k)=1")


def fraction_step(fr: Fraction, direction: str) -> Fraction:
    """Fraction of the string after ``prepend`` (2 in front, last term +1)
    or ``append`` (first term +1, 2 at the end)."""
    m, k, sign = decompose_type1(fr)
    eps = 1 if sign == "+" else -1
    if direction == "prepend":
        M = 2 * m - k
        return Fraction(M * M, M * m + eps)
    if direction == "append":
        M = m + k
        return Fraction(M * M, M * k + eps)
    raise ValueError("direction must be 'prepend' or 'append'")


def string_step(s, direction: str) -> tuple[int, ...]:
    s = tuple(s)
    if direction == "prepend":
        return (2,) + s[:-1] + (s[-1] + 1,)
    if direction == "append":
        return (s[0] + 1,) + s[1:] + (2,)
    raise ValueError("direction must be 'prepend' or 'append'")


def iminus3_strings(max_length: int) -> dict[int, set[tuple[int, ...]]]:
    """Strings reachable from ``(2,2,2)`` by the two moves, grouped by length."""
    out = {3: {(2, 2, 2)}}
    for n in range(4, max_length + 1):
        out[n] = {string_step(s, d) for s in out[n - 1] for d in ("prepend", "append")}
    return out


def specs_for_invariant(invariant: str, max_param: int, *, max_k: int = 3):
    """All specs of one family with every parameter ``<= max_param``.

    Iminus3 takes ``c_i`` from 1 and odd ``k <= max_k``; the others take
    ``s, t`` from 0.
    """
    if invariant not in INVARIANTS:
        raise FamilyError(f"unknown family {invariant!r}")
    if max_param > MAX_PARAM:
        raise FamilyError(f"parameters are capped at {MAX_PARAM}")
    if invariant == "Iminus3":
        for k in range(1, max_k + 1, 2):
            for c in itertools.product(range(1, max_param + 1), repeat=k):
                yield FamilySpec(invariant, c)
    else:
        for s in range(max_param + 1):
            for t in range(max_param + 1):
                yield FamilySpec(invariant, (s, t))


def enumerate_family(I: int, max_param: int, *, max_k: int = 3) -> list[FamilySpec]:
    """Specs of every family with invariant ``I`` (one of -1, -2, -3)."""
    names = [name for name, v in INVARIANTS.items() if v == I]
    if not names:
        raise FamilyError(f"no family has invariant {I}; expected -1, -2 or -3")
    return [sp for name in names for sp in specs_for_invariant(name, max_param, max_k=max_k)]


def family_csv(specs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["invariant", "params", "string", "p", "q"])
    for sp in specs:
        fr = gen_fraction(sp)
        w.writerow([sp.invariant, sp.label(), format_string(gen_string(sp)), fr.p, fr.q])
    return buf.getvalue()


def _minus(s) -> Rational:
    return neg_eval(s).value


def ribbon_identity_suite(bound: int = 10) -> dict[str, bool]:
    """Check the plus/minus identities behind the ribbon families for
    ``0 <= s, t <= bound`` (and ``1 <= c <= bound`` for the short I = -3 case)."""
    report = {}
    report["iminus3_short"] = all(
        _minus((c + 1,) + twos(c + 1)) == plus_eval((c, c + 2))
        for c in range(1, bound + 1)
    )
    palin = True
    for k in (3, 5):
        for c in itertools.product(range(1, 4), repeat=k):
            plus = tuple(reversed(c)) + (c[0] + 2,) + c[1:]
            s = _iminus3_string(c)
            palin &= s == plus_to_minus(plus) and _minus(s) == plus_eval(plus)
    report["iminus3_palindrome"] = palin
    ok = {"iminus2_t1": True, "iminus2_t2": True, "iminus1_t1": True,
          "iminus1_t2": True, "iminus1_t3": True}
    for s, t in itertools.product(range(bound + 1), repeat=2):
        ok["iminus2_t1"] &= plus_eval((1, t, 1, 1, s, 1, t, 1, 1, s + 1)) == _minus(
            gen_string(FamilySpec("Iminus2_t1", (s, t))))
        ok["iminus2_t2"] &= plus_eval((1, t, s + 1, 2, t, 1, 1, s + 1)) == _minus(
            gen_string(FamilySpec("Iminus2_t2", (s, t))))
        ok["iminus1_t1"] &= plus_eval((t + 1, 1, s, 1, 1, t + 1, 2, s + 1)) == _minus(
            gen_string(FamilySpec("Iminus1_t1", (s, t))))
        ok["iminus1_t2"] &= plus_eval((t + 1, 2, s + 1, t + 1, 2, s + 1)) == _minus(
            gen_string(FamilySpec("Iminus1_t2", (s, t))))
        # third type: the dual of the reverse lands in the first type
        fr = neg_eval(gen_string(FamilySpec("Iminus1_t3", (s, t))))
        back = neg_expand(Fraction(fr.p, fr.p - pow(fr.q, -1, fr.p)))
        ok["iminus1_t3"] &= back == (s + 2, t + 3, 3) + twos(s) + (4,) + twos(t + 1)
        ok["iminus1_t3"] &= back == riemenschneider_dual(gen_string(FamilySpec("Iminus1_t3", (s, t)))[::-1])
    report.update(ok)
    return report
