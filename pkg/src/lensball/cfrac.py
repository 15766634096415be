"""Exact continued-fraction arithmetic.

Strings are plain tuples of ints.  A *negative* string ``(a_1, ..., a_n)``
with every ``a_i >= 2`` denotes

    a_1 - 1/(a_2 - 1/(... - 1/a_n))

and a *positive* string denotes ``a_1 + 1/(a_2 + 1/(...))``.  The power
shorthand ``2^[t]`` stands for ``t`` consecutive 2s.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction as Rational
from math import gcd

import numpy as np

__all__ = [
    "Fraction",
    "FractionError",
    "StringError",
    "check_neg_string",
    "neg_expand",
    "neg_eval",
    "neg_eval_rational",
    "plus_eval",
    "plus_to_minus",
    "riemenschneider_dual",
    "point_rule",
    "reverse_string",
    "two_pow_eval",
    "negsum",
    "negsum_batch",
    "twos",
    "parse_fraction",
    "parse_string",
    "format_string",
]


class FractionError(ValueError):
    """Raised for a fraction that is not reduced or not of the form p > q >= 1."""


class StringError(ValueError):
    """Raised for a malformed continued-fraction string."""


@dataclass(frozen=True, order=True)
class Fraction:
    """A reduced pair ``p/q`` with ``p > q >= 1``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if not (isinstance(p, int) and isinstance(q, int)):
            raise FractionError(f"p and q must be integers, got {p!r}/{q!r}")
        if not p > q >= 1:
            raise FractionError(f"need p > q >= 1, got {p}/{q}")
        if gcd(p, q) != 1:
            raise FractionError(f"{p}/{q} is not reduced")

    def __str__(self):
        return f"{self.p}/{self.q}"

    @property
    def value(self) -> Rational:
        return Rational(self.p, self.q)


def twos(t: int) -> tuple[int, ...]:
    """The block ``2^[t]``."""
    if t < 0:
        raise StringError(f"2^[t] needs t >= 0, got {t}")
    return (2,) * t


def check_neg_string(s) -> tuple[int, ...]:
    s = tuple(s)
    if not s:
        raise StringError("empty string")
    for a in s:
        if not isinstance(a, int) or a < 2:
            raise StringError(f"negative string terms must be integers >= 2: {s}")
    return s


def neg_expand(fr: Fraction) -> tuple[int, ...]:
    """Hirzebruch-Jung expansion of ``p/q`` by ceiling division."""
    p, q = fr.p, fr.q
    out = []
    while q:
        a = -(-p // q)
        out.append(a)
        p, q = q, a * q - p
    return tuple(out)


def _neg_fold(s) -> tuple[int, int]:
    # x = n/d folded right to left; each step is unimodular so n/d stays reduced
    n, d = s[-1], 1
    for a in reversed(s[:-1]):
        if n <= d:
            raise ArithmeticError(f"intermediate value {n}/{d} <= 1 in {tuple(s)}")
        n, d = a * n - d, n
    return n, d


def neg_eval_rational(s) -> Rational:
    """Value of a negative string; terms are not validated beyond x > 1 checks."""
    s = tuple(s)
    if not s:
        raise StringError("empty string")
    return Rational(*_neg_fold(s))


def neg_eval(s) -> Fraction:
    s = check_neg_string(s)
    n, d = _neg_fold(s)
    if n <= d:
        raise ArithmeticError(f"value {n}/{d} <= 1 for {s}")
    return Fraction(n, d)


def plus_eval(s) -> Rational:
    """Value of a positive continued fraction.

    Zero terms are tolerated (``x + 1/(0 + 1/y) = x + y``) so that the
    degenerate s = 0 or t = 0 instances of the ribbon identities can be
    evaluated; a zero tail is a ZeroDivisionError.
    """
    s = tuple(s)
    if not s:
        raise StringError("empty string")
    if any(a < 0 for a in s):
        raise StringError(f"positive string terms must be >= 0: {s}")
    n, d = s[-1], 1
    for a in reversed(s[:-1]):
        if n == 0:
            raise ZeroDivisionError(f"zero tail in {s}")
        n, d = a * n + d, n
    return Rational(n, d)


def plus_to_minus(s) -> tuple[int, ...]:
    """Convert an even-length positive string to its negative string.

    ``[a1,...,a2n]^+ = [a1+1, 2^[a2-1], a3+2, 2^[a4-1], ..., a_{2n-1}+2, 2^[a_{2n}-1]]^-``
    """
    s = tuple(s)
    if not s or len(s) % 2:
        raise StringError(f"positive string must have even length, got {len(s)}")
    if any(not isinstance(a, int) or a < 1 for a in s):
        raise StringError(f"positive string terms must be integers >= 1: {s}")
    out = [s[0] + 1]
    out.extend(twos(s[1] - 1))
    for i in range(2, len(s), 2):
        out.append(s[i] + 2)
        out.extend(twos(s[i + 1] - 1))
    return tuple(out)


def _blocks(s):
    """Split ``s`` as ``m1, 2^[m2], m3, 2^[m4], ...`` with every m_odd >= 3."""
    blocks = []
    i = 0
    while i < len(s):
        head = s[i]
        i += 1
        run = 0
        while i < len(s) and s[i] == 2:
            run += 1
            i += 1
        blocks.append((head, run))
    return blocks


def point_rule(s) -> tuple[int, ...]:
    """Riemenschneider's point rule; the first term must be at least 3."""
    s = check_neg_string(s)
    if s[0] < 3:
        raise StringError(f"point rule needs a first term >= 3: {s}")
    blocks = _blocks(s)
    out = []
    for idx, (head, run) in enumerate(blocks):
        out.extend(twos(head - 2 if idx == 0 else head - 3))
        out.append(run + (2 if idx == len(blocks) - 1 else 3))
    return tuple(out)


def riemenschneider_dual(s) -> tuple[int, ...]:
    """String of ``p/(p-q)`` given the string of ``p/q``."""
    s = check_neg_string(s)
    if s[0] >= 3:
        return point_rule(s)
    fr = neg_eval(s)
    return neg_expand(Fraction(fr.p, fr.p - fr.q))


def reverse_string(s) -> tuple[tuple[int, ...], Fraction]:
    """Reversed string and its value ``p/q'`` with ``q q' = 1 mod p``."""
    s = check_neg_string(s)
    r = s[::-1]
    return r, neg_eval(r)


def two_pow_eval(t: int, x) -> Rational:
    """Closed form of ``[2^[t], x]^-``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x = Rational(x)
    return ((t + 1) * x - t) / (t * x - (t - 1))


def negsum(s) -> int:
    """Sum of ``a_i - 3`` over the string."""
    return sum(a - 3 for a in check_neg_string(s))


def negsum_batch(p, q) -> np.ndarray:
    """``negsum(neg_expand(p/q))`` for arrays of coprime pairs ``p > q >= 1``.

    Runs the same ceiling recurrence elementwise.  A run of 2s keeps ``p - q``
    fixed, so each run is consumed in one step and the loop count stays
    logarithmic in ``p``.
    """
    shape = np.shape(p)
    p = np.atleast_1d(np.array(p, dtype=np.int64)).ravel()
    q = np.atleast_1d(np.array(q, dtype=np.int64)).ravel()
    if p.shape != q.shape:
        raise ValueError("p and q must have the same shape")
    if np.any(q < 1) or np.any(q >= p):
        raise FractionError("need p > q >= 1 elementwise")
    if p.size and p.max() >= 2**62:
        raise OverflowError("negsum_batch works in int64; p must stay below 2^62")
    total = np.zeros(p.shape, dtype=np.int64)
    idx = np.arange(p.size)
    while idx.size:
        P, Q = p[idx], q[idx]
        d = P - Q
        run = d <= Q
        # r twos: (P, Q) -> (P - r d, Q - r d)
        r = np.where(run, Q // d, 0)
        a = np.where(run, 0, -(-P // Q))
        total[idx] += np.where(run, -r, a - 3)
        p[idx] = np.where(run, P - r * d, Q)
        q[idx] = np.where(run, Q - r * d, a * Q - P)
        idx = idx[q[idx] > 0]
    return total.reshape(shape)


_FRACTION_RE = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")
_POW_RE = re.compile(r"^2\^\[(\d+)\]$")


def parse_fraction(text: str) -> Fraction:
    m = _FRACTION_RE.match(text)
    if not m:
        raise FractionError(f"cannot parse fraction {text!r}; expected 'p/q'")
    return Fraction(int(m.group(1)), int(m.group(2)))


def parse_string(text: str) -> tuple[int, ...]:
    """Parse ``"[a1,a2,...]"``; items may use the ``2^[t]`` shorthand."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]") and not _POW_RE.match(body):
        body = body[1:-1]
    out = []
    for item in body.split(","):
        item = item.strip()
        if not item:
            continue
        m = _POW_RE.match(item)
        if m:
            out.extend(twos(int(m.group(1))))
        elif re.fullmatch(r"-?\d+", item):
            out.append(int(item))
        else:
            raise StringError(f"bad string item {item!r}")
    return tuple(out)


def format_string(s) -> str:
    return "[" + ",".join(str(a) for a in s) + "]"
