"""Hilbert projective geometry on the 4-simplex and contractivity of transfer products."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import kernels
from .arith import B_SYMBOLS, check_b_word
from .cocycle import cocycle_product
from .errors import EmptySample, HilbertUndefined, ZeroImage

SUM_TOL = 1e-12


def simplex_point(x) -> np.ndarray:
    """Validate and return ``x`` as a float array on the closed 4-simplex."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (4,):
        raise ValueError(f"need four coordinates, got shape {arr.shape}")
    if np.any(arr < 0) or abs(arr.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"not a point of the simplex: {arr}")
    return arr


def zero_mask(x) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(np.asarray(x) == 0))


def _log_ratio_spread(r: np.ndarray) -> float:
    return float(math.log(r.max()) - math.log(r.min()))


def hilbert_distance(x, y) -> float:
    """Hilbert projective distance between two simplex points.

    Interior points use ``log(max_i x_i/y_i) - log(min_i x_i/y_i)``.  Points
    with the same zero pattern use the same formula on their common support.
    A point of face ``i`` and a point of face ``j != i`` (one zero each) use
    the mixed face formula, which pairs ``x_j`` with ``y_i`` in place of the
    two missing coordinates.  Anything else raises ``HilbertUndefined``.
    """
    x = simplex_point(x)
    y = simplex_point(y)
    mx, my = zero_mask(x), zero_mask(y)
    if mx == my:
        keep = x > 0
        if keep.sum() == 0:
            raise HilbertUndefined("zero vector")
        return _log_ratio_spread(x[keep] / y[keep])
    if len(mx) == 1 and len(my) == 1:
        i, j = mx[0], my[0]
        rest = [k for k in range(4) if k not in (i, j)]
        ratios = np.array([x[k] / y[k] for k in rest] + [x[j] / y[i]])
        return _log_ratio_spread(ratios)
    raise HilbertUndefined(f"incompatible zero patterns {mx} and {my}")


def normalized_action(mat, x) -> np.ndarray:
    """Projective action ``M x / |M x|_1``."""
    image = np.asarray(mat, dtype=np.float64) @ np.asarray(x, dtype=np.float64)
    total = image.sum()
    if total <= 0:
        raise ZeroImage("matrix maps the point to zero")
    return image / total


@dataclass(frozen=True)
class RowProfile:
    pos: int
    zero: int
    zero_index: int | None


def row_profile(mat) -> RowProfile:
    arr = np.asarray(mat)
    positive = np.all(arr > 0, axis=1)
    zero = np.all(arr == 0, axis=1)
    zeros = np.flatnonzero(zero)
    return RowProfile(int(positive.sum()), int(zero.sum()), int(zeros[0]) if zeros.size == 1 else None)


def is_contractive_matrix(mat) -> bool:
    """Every non-zero row strictly positive, and at least two positive rows."""
    prof = row_profile(mat)
    return prof.pos >= 2 and prof.pos + prof.zero == np.asarray(mat).shape[0]


class Contractivity(enum.Enum):
    CONTRACTIVE = "contractive"
    NOT_CONTRACTIVE = "not-contractive"


def classify_word(z: Sequence[tuple[int, int]]) -> Contractivity:
    if is_contractive_matrix(cocycle_product(z)):
        return Contractivity.CONTRACTIVE
    return Contractivity.NOT_CONTRACTIVE


def birkhoff_coefficient(mat) -> float:
    """``tanh(D/4)`` with ``D`` the Hilbert diameter of the normalised columns.

    Columns are restricted to the non-zero rows, where a contractive matrix is
    strictly positive.  Matrices failing the contractivity test get 1.
    """
    arr = np.asarray(mat, dtype=np.float64)
    if not is_contractive_matrix(arr):
        return 1.0
    sub = arr[np.any(arr > 0, axis=1)]
    cols = sub / sub.sum(axis=0)
    diam = 0.0
    for i, j in combinations(range(cols.shape[1]), 2):
        diam = max(diam, _log_ratio_spread(cols[:, i] / cols[:, j]))
    return math.tanh(diam / 4)


@lru_cache(maxsize=None)
def _length3_table() -> tuple[bool, ...]:
    return tuple(
        classify_word(z) is Contractivity.CONTRACTIVE for z in product(B_SYMBOLS, repeat=3)
    )


def contractive_words(length: int = 3) -> list[tuple[tuple[int, int], ...]]:
    """Every word of the given length whose product passes the contractivity test."""
    return [
        z
        for z in product(B_SYMBOLS, repeat=length)
        if classify_word(z) is Contractivity.CONTRACTIVE
    ]


def max_contraction_tau(length: int = 3) -> float:
    """Largest Birkhoff coefficient among contractive words of the given length."""
    return max(birkhoff_coefficient(cocycle_product(z).astype(np.float64)) for z in contractive_words(length))


def contractive_frequency(sample_count: int, length: int = 3, seed: int = 0) -> float:
    """Fraction of uniformly sampled length-3 blocks that are contractive.

    ``length`` is the number of symbols drawn per sample and must be a multiple
    of 3; each sample is cut into consecutive blocks of three symbols.
    """
    if sample_count <= 0:
        raise EmptySample("sample_count must be positive")
    if length <= 0 or length % 3:
        raise ValueError(f"length must be a positive multiple of 3, got {length}")
    rng = np.random.default_rng(seed)
    blocks = rng.integers(0, 4, size=(sample_count * (length // 3), 3))
    table = np.array(_length3_table(), dtype=np.bool_)
    return kernels.count_flagged_blocks(blocks, table) / blocks.shape[0]


def exhaustive_contractive_fraction() -> float:
    table = _length3_table()
    return sum(table) / len(table)


def sample_interior(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform points of the open simplex (flat Dirichlet)."""
    return rng.dirichlet(np.ones(4), size=count)


def contraction_ratios(mat, count: int = 1000, seed: int = 0) -> np.ndarray:
    """Observed ratios ``d(Mx, My) / d(x, y)`` over random interior pairs."""
    if count <= 0:
        raise EmptySample("count must be positive")
    rng = np.random.default_rng(seed)
    xs = sample_interior(rng, count)
    ys = sample_interior(rng, count)
    return kernels.contraction_ratios(np.asarray(mat, dtype=np.float64), xs, ys)


def check_contraction(z: Sequence[tuple[int, int]], count: int = 1000, seed: int = 0, slack: float = 1e-10) -> bool:
    """Monte-Carlo check of ``d(Fx, Fy) <= c d(x, y) + slack`` for the word's product."""
    z = check_b_word(z)
    mat = cocycle_product(z).astype(np.float64)
    coef = birkhoff_coefficient(mat)
    rng = np.random.default_rng(seed)
    xs = sample_interior(rng, count)
    ys = sample_interior(rng, count)
    ratios = kernels.contraction_ratios(mat, xs, ys)
    den = np.array([hilbert_distance(x, y) for x, y in zip(xs, ys)])
    num = ratios * den
    return bool(np.all(num <= coef * den + slack))
