"""The four 4x4 transfer matrices, their products, and overlap counting through them.

Rows and columns are indexed by the binary symbols in ``B_SYMBOLS`` order.
Entry ``[c, c']`` of ``A[b]`` is the number of digit pairs whose signed
difference vector ``d`` (the ``rtilde_word`` symbol) satisfies
``2c + d - b = c'``; the indices ``c, c'`` are carries in {0, 1}^2.  A product
``A[z_1] ... A[z_n]`` therefore counts digit-pair words whose signed binary
integers (alpha, beta) differ from the binary coordinates (X, Y) of ``z`` by a
prescribed carry.

Counting identity
-----------------
A pair of digit words overlaps exactly iff ``alpha p = beta q``.  Since p, q > 0
either ``(alpha, beta) = (X, Y)`` or ``(alpha, beta) = -(X, Y)`` for some
``z`` in the exact-word set, and swapping the two words exchanges the cases.
The first case is counted by ``e1 . A_z e1`` (zero start and end carry), so

    N_n = 2 * sum_z e1 . A_z e1 - 3**n,

where the ``3**n`` removes the double count of ``z = 0``.  Starting instead from
the all-ones row vector over-counts from n = 3 onwards; that variant is kept as
``cocycle_sum(..., start="ones")`` for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .arith import B_SYMBOLS, Slope, check_b_word
from .errors import CapExceeded, DegenerateDenominator, NotConverged

_A_ROWS = {
    (0, 0): ((3, 1, 1, 1), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    (1, 0): ((1, 0, 1, 0), (1, 3, 0, 1), (0, 0, 0, 0), (0, 0, 1, 1)),
    (0, 1): ((1, 1, 0, 0), (0, 0, 0, 0), (1, 0, 3, 1), (0, 1, 0, 1)),
    (1, 1): ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 3)),
}

EXACT_WORD_CAP = 24
COCYCLE_CAP = 512


def _frozen(rows) -> np.ndarray:
    arr = np.array(rows, dtype=np.int64)
    arr.setflags(write=False)
    return arr


A_MATRICES: dict[tuple[int, int], np.ndarray] = {b: _frozen(r) for b, r in _A_ROWS.items()}
# stacked in B_SYMBOLS order, handy for vectorised code
A_STACK = np.stack([A_MATRICES[b] for b in B_SYMBOLS])
A_STACK.setflags(write=False)


def a_matrix(b: tuple[int, int]) -> np.ndarray:
    """The transfer matrix of binary symbol ``b`` (a writable copy)."""
    (b,) = check_b_word([b])
    return A_MATRICES[b].copy()


def cocycle_product(z: Sequence[tuple[int, int]]) -> np.ndarray:
    """Ordered product ``A[z_1] ... A[z_n]`` with exact Python-int entries."""
    z = check_b_word(z)
    out = np.identity(4, dtype=object)
    for b in z:
        out = out.dot(A_MATRICES[b].astype(object))
    return out


def _column_weight(z: Sequence[tuple[int, int]]) -> int:
    """``1 . A_z e1`` in exact arithmetic."""
    col = [1, 0, 0, 0]
    for b in reversed(z):
        rows = _A_ROWS[b]
        col = [sum(r[k] * col[k] for k in range(4)) for r in rows]
    return sum(col)


@dataclass(frozen=True)
class ExactWordSet:
    """Binary words ``z`` of length ``n`` with ``p X = q Y``."""

    slope: Slope
    n: int
    words: tuple[tuple[tuple[int, int], ...], ...]

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def _line_step(slope: Slope, s: int, b: tuple[int, int]) -> int:
    return 2 * s + slope.p * b[0] - slope.q * b[1]


def _viable(slope: Slope, s: int) -> bool:
    # a suffix can only cancel s when -p < s < q
    return -slope.p < s < slope.q


def enumerate_exact_words(slope: Slope, n: int, cap: int = EXACT_WORD_CAP) -> ExactWordSet:
    """All B-words of length ``n`` whose coordinates satisfy ``p X - q Y = 0``."""
    if n < 0:
        raise ValueError(f"length must be non-negative, got {n}")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the exact-word cap {cap}")
    layer: list[tuple[int, tuple]] = [(0, ())]
    for _ in range(n):
        nxt = []
        for s, word in layer:
            for b in B_SYMBOLS:
                t = _line_step(slope, s, b)
                if _viable(slope, t):
                    nxt.append((t, word + (b,)))
        layer = nxt
    words = tuple(w for s, w in layer if s == 0)
    return ExactWordSet(slope, n, words)


def _row_times(vec: list[int], b: tuple[int, int]) -> list[int]:
    rows = _A_ROWS[b]
    return [sum(vec[i] * rows[i][k] for i in range(4)) for k in range(4)]


def cocycle_sum(slope: Slope, n: int, start: str = "e1", cap: int = COCYCLE_CAP) -> int:
    """``sum_{z in Z_n} u . A_z e1`` by a DP over (line state, row vector).

    ``start`` selects ``u``: ``"e1"`` for the first basis vector or ``"ones"``
    for the all-ones vector.
    """
    if n < 0:
        raise ValueError(f"length must be non-negative, got {n}")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the cocycle cap {cap}")
    if start == "e1":
        u = [1, 0, 0, 0]
    elif start == "ones":
        u = [1, 1, 1, 1]
    else:
        raise ValueError(f"unknown start vector {start!r}")
    layer: dict[int, list[int]] = {0: u}
    for _ in range(n):
        nxt: dict[int, list[int]] = {}
        for s, vec in layer.items():
            for b in B_SYMBOLS:
                t = _line_step(slope, s, b)
                if not _viable(slope, t):
                    continue
                add = _row_times(vec, b)
                acc = nxt.get(t)
                nxt[t] = add if acc is None else [x + y for x, y in zip(acc, add)]
        layer = nxt
    return layer.get(0, [0])[0]


def count_via_cocycle(slope: Slope, n: int, cap: int = COCYCLE_CAP) -> int:
    """Exact overlap count ``N_n`` from the transfer matrices (see module docstring)."""
    return 2 * cocycle_sum(slope, n, "e1", cap) - 3**n


def count_via_cocycle_enumerated(slope: Slope, n: int) -> int:
    """Same count, summing ``e1 . A_z e1`` over the explicitly enumerated word set."""
    total = 0
    for z in enumerate_exact_words(slope, n):
        total += int(cocycle_product(z)[0, 0])
    return 2 * total - 3**n


def phi_truncated(z: Sequence[tuple[int, int]]) -> float:
    """``log(1.A_z e1 / 1.A_{sigma z} e1)`` for a finite word ``z``."""
    z = check_b_word(z)
    if not z:
        raise ValueError("phi_truncated needs a non-empty word")
    den = _column_weight(z[1:])
    if den == 0:
        raise DegenerateDenominator(f"tail weight vanishes for {z!r}")
    num = _column_weight(z)
    return math.log(num) - math.log(den)


@dataclass(frozen=True)
class PhiLimit:
    value: float
    symbols_used: int
    # "diameter" when the image cone collapsed, "bracket" when only the ratio did
    certificate: str
    spread: float


def _hilbert_diameter(cols: np.ndarray) -> float:
    # columns of a non-negative matrix, as points of the simplex; finite only
    # when all non-zero columns share one support
    support = cols > 0
    keep = support.any(axis=0)
    cols = cols[:, keep]
    support = support[:, keep]
    if cols.shape[1] <= 1:
        return 0.0
    if not (support == support[:, :1]).all():
        return math.inf
    rows = support[:, 0]
    sub = cols[rows]
    best = 0.0
    for i in range(sub.shape[1]):
        r = sub / sub[:, i : i + 1]
        best = max(best, float(np.max(np.log(r.max(axis=0)) - np.log(r.min(axis=0)))))
    return best


def phi_limit(
    z: Iterable[tuple[int, int]], tol: float = 1e-10, max_symbols: int = 10_000
) -> PhiLimit:
    """Evaluate the limiting potential along a (long or infinite) symbol stream.

    The tail product ``P = A[z_2] ... A[z_k]`` is accumulated in normalised
    floating point.  Any further tail vector lies in the cone spanned by the
    columns of ``P``, so the limit is pinned once that cone is thin.  Two
    certificates are accepted: the Hilbert diameter of the column cone falls
    below ``tol``, or the ratio ``1.A[z_1] x / 1.x`` varies by less than ``tol``
    (in log) across the columns.  The second one covers tails such as the
    constant (0, 0) stream whose cone never becomes thin but whose ratio does
    settle.

    With ``tol = inf`` the call degenerates to ``phi_truncated`` of the first
    symbol.

    Raises
    ------
    NotConverged
        If neither certificate is met within ``max_symbols`` symbols or the
        prefix runs out first.
    """
    it = iter(z)
    try:
        first = check_b_word([next(it)])[0]
    except StopIteration:
        raise NotConverged("empty prefix") from None
    head = np.ones(4) @ A_MATRICES[first]
    if math.isinf(tol):
        return PhiLimit(math.log(head[0]), 1, "bracket", 0.0)
    tail = np.identity(4)
    used = 1
    for b in it:
        (b,) = check_b_word([b])
        used += 1
        tail = tail @ A_MATRICES[b]
        tail /= tail.sum()
        live = tail.sum(axis=0) > 0
        cols = tail[:, live]
        ratios = (head @ cols) / cols.sum(axis=0)
        spread = math.log(ratios.max()) - math.log(ratios.min())
        diam = _hilbert_diameter(tail)
        value = math.log(float(head @ tail[:, 0]) / float(tail[:, 0].sum()))
        if diam < tol:
            return PhiLimit(value, used, "diameter", diam)
        if spread < tol:
            return PhiLimit(value, used, "bracket", spread)
        if used >= max_symbols:
            break
    raise NotConverged(f"potential not pinned to {tol:g} after {used} symbols")
