"""Binary expansions of points on the closed line p x - q y in Z of the 2-torus.

A state ``m`` records the exact value ``p x~ - q y~`` of the unread tail
``(x~, y~)`` of an expansion.  Reading the binary symbol ``(bx, by)`` moves to
``2m - p bx + q by``.  Tails lie in the closed unit square, so every reachable
state satisfies ``-q <= m <= p``; the endpoints are needed for the second
(all-ones) expansion of dyadic points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import perron
from .arith import B_SYMBOLS, Slope, b_word_coordinates, check_b_word
from .automaton import build_overlap_automaton, overlap_growth
from .cocycle import A_MATRICES, _A_ROWS
from .errors import CapExceeded
from .perron import Enclosure

PRESSURE_CAP = 40
MAX_COLUMN_CAP = 14

Symbol = tuple[int, int]


@dataclass(frozen=True)
class SubshiftPresentation:
    slope: Slope
    states: tuple[int, ...]
    transitions: dict[tuple[int, Symbol], int] = field(repr=False)

    def successors(self, m: int) -> list[tuple[Symbol, int]]:
        return [(b, self.transitions[(m, b)]) for b in B_SYMBOLS if (m, b) in self.transitions]

    def step(self, current: Iterable[int], b: Symbol) -> frozenset[int]:
        return frozenset(self.transitions[(m, b)] for m in current if (m, b) in self.transitions)


def build_line_subshift(slope: Slope) -> SubshiftPresentation:
    p, q = slope.p, slope.q
    states = set(range(-q, p + 1))
    while True:
        trans = {
            (m, b): 2 * m - p * b[0] + q * b[1]
            for m in states
            for b in B_SYMBOLS
            if 2 * m - p * b[0] + q * b[1] in states
        }
        has_out = {m for m, _ in trans}
        has_in = set(trans.values())
        trimmed = states & has_out & has_in
        if trimmed == states:
            break
        states = trimmed
    return SubshiftPresentation(slope, tuple(sorted(states)), trans)


def admissible(s: SubshiftPresentation, z: Sequence[Symbol], start: Iterable[int] | None = None) -> bool:
    """True iff ``z`` labels a path from some start state (all states by default)."""
    current = frozenset(s.states if start is None else start)
    for b in check_b_word(z):
        current = s.step(current, b)
        if not current:
            return False
    return True


def admissible_words(s: SubshiftPresentation, n: int) -> list[tuple[Symbol, ...]]:
    """The length-``n`` prefix language, generated by a subset-tracking search."""
    out: list[tuple[Symbol, ...]] = []
    stack: list[tuple[tuple[Symbol, ...], frozenset[int]]] = [((), frozenset(s.states))]
    while stack:
        word, current = stack.pop()
        if len(word) == n:
            out.append(word)
            continue
        for b in B_SYMBOLS:
            nxt = s.step(current, b)
            if nxt:
                stack.append((word + (b,), nxt))
    return sorted(out)


def _square_range(slope: Slope, z: Sequence[Symbol]) -> tuple[int, int, int]:
    """Range of ``2**n (p x - q y)`` over the closed square of ``z``, and ``2**n``."""
    x, y = b_word_coordinates(z)
    corners = [slope.p * (x + dx) - slope.q * (y + dy) for dx in (0, 1) for dy in (0, 1)]
    return min(corners), max(corners), 1 << len(z)


def geometric_cylinder_test(slope: Slope, z: Sequence[Symbol], closed: bool = True) -> bool:
    """Does the closed (or open) binary square of ``z`` meet the line?

    The function ``p x - q y`` is affine, so on the square it ranges over the
    interval spanned by its corner values; the square meets some line
    ``p x - q y = k`` iff an integer ``k`` lies in that interval.
    """
    lo, hi, scale = _square_range(slope, check_b_word(z))
    if closed:
        return math.floor(Fraction(hi, scale)) >= math.ceil(Fraction(lo, scale))
    return math.ceil(Fraction(hi, scale)) - 1 >= math.floor(Fraction(lo, scale)) + 1


def corner_touch(slope: Slope, z: Sequence[Symbol]) -> bool:
    """The line meets the closed square of ``z`` only at corner points."""
    z = check_b_word(z)
    x, y = b_word_coordinates(z)
    scale = 1 << len(z)
    on_corner = any(
        (slope.p * (x + dx) - slope.q * (y + dy)) % scale == 0 for dx in (0, 1) for dy in (0, 1)
    )
    return on_corner and not geometric_cylinder_test(slope, z, closed=False)


def _coordinate_arrays(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    bx = np.array([b[0] for b in B_SYMBOLS])
    by = np.array([b[1] for b in B_SYMBOLS])
    x = np.zeros_like(idx)
    y = np.zeros_like(idx)
    for k in range(n - 1, -1, -1):
        sym = (idx >> (2 * k)) & 3
        x = 2 * x + bx[sym]
        y = 2 * y + by[sym]
    return x, y


def geometric_words(slope: Slope, n: int, closed: bool = True) -> np.ndarray:
    """Boolean mask over all ``4**n`` words (B_SYMBOLS order, first symbol most significant)."""
    x, y = _coordinate_arrays(np.arange(4**n, dtype=np.int64), n)
    p, q = slope.p, slope.q
    lo = p * x - q * (y + 1)
    hi = p * (x + 1) - q * y
    scale = 1 << n
    if closed:
        return np.floor_divide(hi, scale) >= -np.floor_divide(-lo, scale)
    return -np.floor_divide(-hi, scale) - 1 >= np.floor_divide(lo, scale) + 1


def corner_touch_words(slope: Slope, n: int) -> np.ndarray:
    """Boolean mask over all ``4**n`` words of ``corner_touch``, computed in bulk."""
    idx = np.arange(4**n, dtype=np.int64)
    x, y = _coordinate_arrays(idx, n)
    scale = 1 << n
    on_corner = np.zeros(idx.shape, dtype=bool)
    for dx in (0, 1):
        for dy in (0, 1):
            on_corner |= (slope.p * (x + dx) - slope.q * (y + dy)) % scale == 0
    return on_corner & ~geometric_words(slope, n, closed=False)


def word_index(z: Sequence[Symbol]) -> int:
    idx = 0
    for b in z:
        idx = 4 * idx + B_SYMBOLS.index(b)
    return idx


def line_point_words(slope: Slope, n: int) -> list[tuple[Symbol, ...]]:
    """Words whose dyadic corner point ``(X, Y) / 2**n`` lies on the line itself."""
    out = []
    for z in product(B_SYMBOLS, repeat=n):
        x, y = b_word_coordinates(z)
        if (slope.p * x - slope.q * y) % (1 << n) == 0:
            out.append(z)
    return out


@dataclass(frozen=True)
class PressureEstimate:
    """Finite-``n`` pressure approximants (nats).

    ``lower`` weighs each admissible word by ``1.A_z e1``; ``full`` by the
    total entry sum ``1.A_z 1``.
    """

    n: int
    lower: float
    full: float


def _weighted_language_sum(s: SubshiftPresentation, n: int) -> tuple[int, int]:
    """Exact sums of ``1.A_z e1`` and ``1.A_z 1`` over the prefix language.

    The subset construction turns the presentation into a deterministic
    automaton, so each admissible word is counted once.  Row vectors start at
    ``1`` and are pushed through ``A[b]`` as symbols are read.
    """
    layer: dict[frozenset[int], list[int]] = {frozenset(s.states): [1, 1, 1, 1]}
    for _ in range(n):
        nxt: dict[frozenset[int], list[int]] = {}
        for current, vec in layer.items():
            for b in B_SYMBOLS:
                target = s.step(current, b)
                if not target:
                    continue
                rows = _A_ROWS[b]
                add = [sum(vec[i] * rows[i][k] for i in range(4)) for k in range(4)]
                acc = nxt.get(target)
                nxt[target] = add if acc is None else [u + v for u, v in zip(acc, add)]
        layer = nxt
    first = sum(vec[0] for vec in layer.values())
    total = sum(sum(vec) for vec in layer.values())
    return first, total


def pressure_partial(slope: Slope, n: int, cap: int = PRESSURE_CAP) -> PressureEstimate:
    if n < 1:
        raise ValueError("need n >= 1")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the pressure cap {cap}")
    first, total = _weighted_language_sum(build_line_subshift(slope), n)
    return PressureEstimate(n, math.log(first) / n, math.log(total) / n)


def pressure_max_column(slope: Slope, n: int, cap: int = MAX_COLUMN_CAP) -> float:
    """``(1/n) log sum_z max_k (1.A_z)_k`` over the prefix language, by enumeration."""
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the max-column cap {cap}")
    s = build_line_subshift(slope)
    total = 0
    stack: list[tuple[int, frozenset[int], list[int]]] = [(0, frozenset(s.states), [1, 1, 1, 1])]
    while stack:
        depth, current, vec = stack.pop()
        if depth == n:
            total += max(vec)
            continue
        for b in B_SYMBOLS:
            target = s.step(current, b)
            if target:
                rows = _A_ROWS[b]
                stack.append((depth + 1, target, [sum(vec[i] * rows[i][k] for i in range(4)) for k in range(4)]))
    return math.log(total) / n


def transfer_operator(s: SubshiftPresentation) -> np.ndarray:
    """Block matrix on (state, carry) with block ``(m, m')`` = sum of ``A[b]`` over edges m -> m'."""
    pos = {m: i for i, m in enumerate(s.states)}
    k = len(s.states)
    theta = np.zeros((4 * k, 4 * k), dtype=np.int64)
    for (m, b), t in s.transitions.items():
        i, j = pos[m], pos[t]
        theta[4 * i : 4 * i + 4, 4 * j : 4 * j + 4] += A_MATRICES[b]
    return theta


def spectral_pressure(slope: Slope, tol: float = perron.DEFAULT_TOL) -> Enclosure:
    """Enclosure of ``log rho`` of the (state x carry) transfer operator."""
    return perron.log_spectral_radius(transfer_operator(build_line_subshift(slope)), tol)


@dataclass(frozen=True)
class GapCheck:
    N: Enclosure
    P: Enclosure
    ok: bool

    @property
    def gap(self) -> float:
        return self.P.mid - self.N.mid


def pressure_gap_check(slope: Slope, tol: float = perron.DEFAULT_TOL) -> GapCheck:
    n_enc = overlap_growth(build_overlap_automaton(slope), tol)
    p_enc = spectral_pressure(slope, tol)
    return GapCheck(n_enc, p_enc, n_enc.upper <= p_enc.lower + 1e-6)


def to_dot(s: SubshiftPresentation) -> str:
    lines = [f'digraph "line_{s.slope.p}_{s.slope.q}" {{']
    lines += [f'  "{m}";' for m in s.states]
    for m in s.states:
        for b, t in s.successors(m):
            lines.append(f'  "{m}" -> "{t}" [label="{b[0]}{b[1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
