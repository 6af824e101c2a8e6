"""Weighted automaton on scaled remainders whose 0 -> 0 paths count exact overlaps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import perron
from .arith import DIGIT_SYMBOLS, Slope, r_extend
from .errors import NotIrreducible
from .perron import Enclosure


@dataclass(frozen=True)
class OverlapAutomaton:
    """States ``-q+1 .. q-1``; ``weights[i, k]`` counts digit pairs taking state i to k."""

    slope: Slope
    states: tuple[int, ...]
    weights: np.ndarray = field(repr=False)

    def index(self, state: int) -> int:
        return state + self.slope.q - 1

    def weight(self, a: int, b: int) -> int:
        if not (abs(a) < self.slope.q and abs(b) < self.slope.q):
            return 0
        return int(self.weights[self.index(a), self.index(b)])

    def probability(self, a: int, b: int) -> Fraction:
        return Fraction(self.weight(a, b), 9)

    def edges(self) -> list[tuple[int, int, int]]:
        """Positive-weight edges ``(source, target, weight)`` in ascending order."""
        return [
            (a, b, self.weight(a, b))
            for a in self.states
            for b in self.states
            if self.weight(a, b) > 0
        ]


def build_overlap_automaton(slope: Slope) -> OverlapAutomaton:
    q = slope.q
    states = tuple(range(-q + 1, q))
    w = np.zeros((len(states), len(states)), dtype=np.int64)
    for a in states:
        for x, y in product(DIGIT_SYMBOLS, repeat=2):
            b = r_extend(a, x, y, slope)
            if abs(b) < q:
                w[a + q - 1, b + q - 1] += 1
    w.setflags(write=False)
    return OverlapAutomaton(slope, states, w)


def strong_connectivity(aut: OverlapAutomaton) -> bool:
    return perron.is_irreducible(aut.weights)


def count_via_paths(aut: OverlapAutomaton, n: int) -> int:
    """Weighted number of length-``n`` paths from state 0 back to state 0."""
    if n < 0:
        raise ValueError(f"length must be non-negative, got {n}")
    rows = aut.weights.tolist()
    size = len(rows)
    vec = [0] * size
    vec[aut.index(0)] = 1
    for _ in range(n):
        vec = [sum(vec[i] * rows[i][k] for i in range(size) if vec[i]) for k in range(size)]
    return vec[aut.index(0)]


def overlap_growth(aut: OverlapAutomaton, tol: float = perron.DEFAULT_TOL) -> Enclosure:
    """Certified enclosure of the exponential growth rate of the overlap counts (nats)."""
    if not strong_connectivity(aut):
        raise NotIrreducible(f"overlap automaton for {aut.slope} is not strongly connected")
    return perron.log_perron_enclosure(aut.weights, tol)


def equivalence_constants(aut: OverlapAutomaton) -> tuple[Fraction, Fraction]:
    """Comparison constants ``(c_l, c_r)`` between the path measure and the projected measure.

    ``c_l`` is the smallest share that state 0 contributes to the incoming
    weight of any of its successors; ``c_r`` is always 1.
    """
    col = aut.weights.sum(axis=0)
    i0 = aut.index(0)
    shares = [
        Fraction(int(aut.weights[i0, k]), int(col[k]))
        for k in range(len(aut.states))
        if aut.weights[i0, k] > 0
    ]
    return min(shares), Fraction(1)


def to_dot(aut: OverlapAutomaton) -> str:
    """Graphviz rendering with nodes in ascending order and edges labelled ``w=k``."""
    lines = [f'digraph "overlap_{aut.slope.p}_{aut.slope.q}" {{']
    lines += [f'  "{s}";' for s in aut.states]
    lines += [f'  "{a}" -> "{b}" [label="w={k}"];' for a, b, k in aut.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"
