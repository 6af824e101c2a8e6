"""Exact arithmetic on slopes, digit words and scaled remainders.

Digit symbols are the integers 0, 1, 2 standing for the projected digits
0, 1 and p/q.  Values are kept as integers over the denominator ``q`` (a digit
symbol ``s`` has scaled value ``(0, q, p)[s]``), and a word of length ``n``
evaluates to an integer over ``q * 2**n``.  Symbols, not values, identify
words: for p = q = 1 the symbols 1 and 2 share a value but stay distinct.

Two-dimensional binary symbols are pairs ``(bx, by)`` with entries in {0, 1},
listed in the fixed order ``B_SYMBOLS``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import LengthMismatch, NotCoprime, OutOfRange

ZERO, ONE, SLOPE = 0, 1, 2
DIGIT_SYMBOLS = (ZERO, ONE, SLOPE)

B_SYMBOLS = ((0, 0), (1, 0), (0, 1), (1, 1))
B_INDEX = {b: i for i, b in enumerate(B_SYMBOLS)}

# Sierpinski digits in the plane; projection along the slope sends them to
# the digit symbols above in this order.  Kept for reference only.
SIERPINSKI_DIGITS = ((0, 0), (1, 0), (0, 1))


@dataclass(frozen=True, order=True)
class Slope:
    """A validated co-prime pair with ``1 <= p <= q``."""

    p: int
    q: int

    def __post_init__(self) -> None:
        for name, v in (("p", self.p), ("q", self.q)):
            if isinstance(v, bool) or not isinstance(v, int):
                raise OutOfRange(f"{name} must be an integer, got {v!r}")
        if self.p <= 0 or self.q <= 0:
            raise OutOfRange(f"p and q must be positive, got ({self.p}, {self.q})")
        if self.p > self.q:
            raise OutOfRange(f"need p <= q, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise NotCoprime(f"gcd({self.p}, {self.q}) = {math.gcd(self.p, self.q)}")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def theta(self) -> float:
        """Angle of the projection direction, arctan(p/q), in radians."""
        return math.atan2(self.p, self.q)

    @property
    def digit_values(self) -> tuple[int, int, int]:
        """Scaled values of the three digit symbols, over denominator q."""
        return (0, self.q, self.p)

    def value(self, symbol: int) -> int:
        return self.digit_values[symbol]

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def make_slope(p: int, q: int) -> Slope:
    """Validate ``(p, q)``; raises ``NotCoprime`` or ``OutOfRange``."""
    return Slope(p, q)


def coprime_slopes(max_q: int) -> list[Slope]:
    """All valid slopes with ``q <= max_q``, ordered by (q, p)."""
    return [Slope(p, q) for q in range(1, max_q + 1) for p in range(1, q + 1) if math.gcd(p, q) == 1]


def _check_symbols(word: Sequence[int]) -> None:
    for s in word:
        if s not in DIGIT_SYMBOLS:
            raise OutOfRange(f"not a digit symbol: {s!r}")


def scaled_value(word: Sequence[int], slope: Slope) -> int:
    """Integer numerator of the word's value over ``q * 2**len(word)``."""
    _check_symbols(word)
    vals = slope.digit_values
    acc = 0
    for s in word:
        acc = 2 * acc + vals[s]
    return acc


def pi_value(word: Sequence[int], slope: Slope) -> Fraction:
    """Exact value of sum_i d_i 2^-i for a digit word."""
    return Fraction(scaled_value(word, slope), slope.q << len(word))


def line_membership(x: Fraction, y: Fraction, slope: Slope) -> bool:
    """True iff the torus point (x, y) lies on the closed line subgroup p x - q y in Z."""
    return (slope.p * Fraction(x) - slope.q * Fraction(y)).denominator == 1


def r_extend(j: int, x: int, y: int, slope: Slope) -> int:
    """Scaled remainder after appending the digit pair (x, y)."""
    return 2 * j + slope.value(x) - slope.value(y)


def is_recoverable(j: int, slope: Slope) -> bool:
    return abs(j) <= slope.q - 1


class Remainder(NamedTuple):
    j: int
    recoverable: bool


def r_word(a: Sequence[int], b: Sequence[int], slope: Slope) -> Remainder:
    """Fold ``r_extend`` over a pair of words.

    ``recoverable`` is False as soon as any prefix leaves the window
    ``|j| <= q - 1``; the final ``j`` is still reported.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"word lengths differ: {len(a)} != {len(b)}")
    _check_symbols(a)
    _check_symbols(b)
    j = 0
    ok = True
    for x, y in zip(a, b):
        j = r_extend(j, x, y, slope)
        ok = ok and is_recoverable(j, slope)
    return Remainder(j, ok)


def solve_alpha_beta(j: int, slope: Slope) -> tuple[int, int]:
    """Least non-negative (alpha, beta) with ``alpha*p - beta*q == j``.

    ``alpha`` is minimised first; for ``|j| < q`` this gives ``alpha < q``.
    """
    p, q = slope.p, slope.q
    # alpha ranges over one residue class mod q; pick its least member with beta >= 0
    alpha = (j * pow(p, -1, q)) % q if q > 1 else 0
    while alpha * p < j:
        alpha += q
    return alpha, (alpha * p - j) // q


def rtilde_word(a: Sequence[int], b: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Signed binary words (alpha, beta) tracking the remainder symbolically.

    Each digit pair contributes ``alpha_i = [x = p/q] - [y = p/q]`` and
    ``beta_i = [y = 1] - [x = 1]``, so that reading both words as binary
    integers gives ``alpha * p - beta * q == r_word(a, b).j`` for any slope.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"word lengths differ: {len(a)} != {len(b)}")
    _check_symbols(a)
    _check_symbols(b)
    alpha = tuple((x == SLOPE) - (y == SLOPE) for x, y in zip(a, b))
    beta = tuple((y == ONE) - (x == ONE) for x, y in zip(a, b))
    return alpha, beta


def binary_int(word: Sequence[int]) -> int:
    """Read a word over {-1, 0, 1} as a signed binary integer, most significant first."""
    acc = 0
    for d in word:
        acc = 2 * acc + d
    return acc


def rtilde_pairing(a: Sequence[int], b: Sequence[int], slope: Slope) -> int:
    """Pair the (alpha, beta) word with (p, -q) to recover the scaled remainder."""
    alpha, beta = rtilde_word(a, b)
    return slope.p * binary_int(alpha) - slope.q * binary_int(beta)


def b_word_coordinates(z: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Binary integers (X, Y) read off the two rows of a B-word."""
    x = y = 0
    for bx, by in z:
        x = 2 * x + bx
        y = 2 * y + by
    return x, y


def check_b_word(z: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out = tuple(tuple(b) for b in z)
    for b in out:
        if b not in B_INDEX:
            raise OutOfRange(f"not a binary symbol: {b!r}")
    return out
