"""Brute-force ground truth by enumerating every digit word of a given length.

Nothing here is meant to be fast.  Each function enumerates all ``3**n``
words (or, for the self-similarity check, their value histogram) so that the
faster automaton and cocycle methods have something independent to agree
with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import kernels
from .arith import Slope, r_word
from .errors import CapExceeded

BRUTE_CAP = 10
# the histogram path is much lighter than full enumeration
HISTOGRAM_CAP = 18


def _check_cap(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError(f"length must be non-negative, got {n}")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the enumeration cap {cap}")


@dataclass(frozen=True)
class CollisionTable:
    """Partition of all digit words of length ``n`` by exact value.

    Keys are integer numerators over ``q * 2**n``.
    """

    slope: Slope
    n: int
    classes: dict[int, list[tuple[int, ...]]]

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes.values()]

    def total_words(self) -> int:
        return sum(self.sizes())


def collision_classes(slope: Slope, n: int, cap: int = BRUTE_CAP) -> CollisionTable:
    _check_cap(n, cap)
    values = kernels.enumerate_values(slope.digit_values, n)
    classes: dict[int, list[tuple[int, ...]]] = {}
    # words come out of product() in the same lexicographic order as the kernel
    for word, v in zip(product(range(3), repeat=n), values.tolist()):
        classes.setdefault(v, []).append(word)
    return CollisionTable(slope, n, dict(sorted(classes.items())))


def class_sizes(slope: Slope, n: int, cap: int = BRUTE_CAP) -> np.ndarray:
    """Multiplicities of the distinct values, without materialising words."""
    _check_cap(n, cap)
    _, counts = kernels.class_counts(kernels.enumerate_values(slope.digit_values, n))
    return counts


def overlap_count_exact(slope: Slope, n: int, cap: int = BRUTE_CAP) -> int:
    """Number of ordered word pairs with equal value, as the sum of squared class sizes."""
    return sum(c * c for c in class_sizes(slope, n, cap).tolist())


def rw_entropy_term(slope: Slope, n: int, cap: int = BRUTE_CAP) -> float:
    """``n log 3 - sum_c (|c| / 3**n) log |c|`` in nats."""
    counts = class_sizes(slope, n, cap).astype(np.float64)
    return n * math.log(3) - float(np.sum(counts * np.log(counts))) / 3.0**n


def histogram_entropy(slope: Slope, n: int, cap: int = HISTOGRAM_CAP) -> float:
    """Same quantity as ``rw_entropy_term`` computed from the value histogram."""
    _check_cap(n, cap)
    h = kernels.value_histogram(slope.digit_values, n)
    c = h[h > 0].astype(np.float64)
    return n * math.log(3) - float(np.sum(c * np.log(c))) / 3.0**n


def _mass(hist_cum: np.ndarray, lo: Fraction, hi: Fraction, scale: int) -> int:
    """Number of words whose scaled value ``v`` satisfies lo <= v/scale < hi."""
    a = max(math.ceil(lo * scale), 0)
    b = min(math.ceil(hi * scale), hist_cum.size - 1)
    if b <= a:
        return 0
    return int(hist_cum[b] - hist_cum[a])


def empirical_mass(slope: Slope, interval: tuple[Fraction, Fraction], n: int) -> Fraction:
    """Mass of ``[a, b)`` under the uniform measure on the level-``n`` word values."""
    _check_cap(n, HISTOGRAM_CAP)
    h = kernels.value_histogram(slope.digit_values, n)
    cum = np.concatenate(([0], np.cumsum(h)))
    a, b = (Fraction(t) for t in interval)
    return Fraction(_mass(cum, a, b, slope.q << n), 3**n)


def selfsim_residual(
    slope: Slope, interval: tuple[Fraction, Fraction], n: int, cap: int = HISTOGRAM_CAP
) -> float:
    """Defect of the three-map self-similarity relation on a half-open interval.

    Compares the level-``n`` empirical mass of ``A`` with one third of the
    level-``n-1`` masses of ``2A``, ``2A - 1`` and ``2A - p/q``.  Counts are
    exact integers, so the residual is computed exactly and returned as float.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    _check_cap(n, cap)
    a, b = (Fraction(t) for t in interval)
    if b < a:
        raise ValueError(f"empty or reversed interval ({a}, {b})")
    lhs = empirical_mass(slope, (a, b), n)
    rhs = Fraction(0)
    for shift in (Fraction(0), Fraction(1), slope.ratio):
        rhs += empirical_mass(slope, (2 * a - shift, 2 * b - shift), n - 1)
    return float(abs(lhs - rhs / 3))


def remainder_pair_count(slope: Slope, n: int, cap: int = 6) -> int:
    """Count pairs with zero final remainder by folding ``r_word`` over all 9**n pairs."""
    _check_cap(n, cap)
    words = list(product(range(3), repeat=n))
    return sum(1 for a in words for b in words if r_word(a, b, slope).j == 0)
