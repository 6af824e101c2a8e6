"""Binary-digit transfer matrices for the projected measure and weak-Gibbs diagnostics.

States are the shifts ``j / q`` for ``j`` in ``-q+1 .. q-1``.  Reading binary
digit ``i`` from shift ``j`` reaches shift ``k`` with multiplicity
``#{d : q i + 2 j - v(d) = k}``, where ``v(d)`` is the scaled digit value.
With ``R_j`` the mass of ``[0, 1) + j/q``, cylinder masses are
``3**-n 1.M_w R / 1.R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from scipy.special import logsumexp

from . import perron
from .arith import Slope
from .errors import DegenerateDenominator, DegenerateEigenvector
from .perron import Enclosure

GIBBS_CAP = 20
DEFAULT_TAIL = 4


@dataclass(frozen=True)
class GibbsSystem:
    slope: Slope
    digits: tuple[int, ...]
    m0: np.ndarray = field(repr=False)
    m1: np.ndarray = field(repr=False)
    # exact Perron vector, normalised to total 1
    R: tuple[Fraction, ...]
    perron_value: Enclosure

    @property
    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return self.m0, self.m1

    @property
    def R_float(self) -> np.ndarray:
        return np.array([float(r) for r in self.R])


def _digit_matrices(slope: Slope) -> tuple[tuple[int, ...], np.ndarray, np.ndarray]:
    q = slope.q
    digits = tuple(range(-q + 1, q))
    mats = []
    for i in (0, 1):
        m = np.zeros((len(digits), len(digits)), dtype=np.int64)
        for a, j in enumerate(digits):
            for v in slope.digit_values:
                k = q * i + 2 * j - v
                if -q < k < q:
                    m[a, k + q - 1] += 1
        m.setflags(write=False)
        mats.append(m)
    return digits, mats[0], mats[1]


def _accessible_from_zero(mat: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(mat.shape[0], dtype=bool)
    seen[start] = True
    frontier = [start]
    while frontier:
        nxt = []
        for a in frontier:
            for b in np.flatnonzero(mat[a] > 0):
                if not seen[b]:
                    seen[b] = True
                    nxt.append(int(b))
        frontier = nxt
    return seen


def build_gibbs_system(slope: Slope) -> GibbsSystem:
    """Build ``M_0``, ``M_1`` and the exact Perron vector of their sum.

    The Perron value is certified (it equals 3 for every slope tried) and the
    right eigenvector is found exactly as a rational null vector of
    ``M_0 + M_1 - 3 I``.
    """
    digits, m0, m1 = _digit_matrices(slope)
    total = m0 + m1
    rho = perron.log_spectral_radius(total)
    if not rho.contains(math.log(3), 1e-9):
        raise DegenerateEigenvector(f"Perron value exp({rho.mid}) differs from 3 for {slope}")
    null = (sympy.Matrix(total.tolist()) - 3 * sympy.eye(len(digits))).nullspace()
    if len(null) != 1:
        raise DegenerateEigenvector(f"eigenvalue 3 has geometric multiplicity {len(null)} for {slope}")
    vec = [Fraction(int(x.p), int(x.q)) for x in null[0]]
    if sum(vec) < 0:
        vec = [-x for x in vec]
    reach = _accessible_from_zero(total, slope.q - 1)
    if any(x < 0 for x in vec) or not all(vec[i] > 0 for i in np.flatnonzero(reach)):
        raise DegenerateEigenvector(f"Perron vector is not positive on the accessible states for {slope}")
    s = sum(vec)
    return GibbsSystem(slope, digits, m0, m1, tuple(x / s for x in vec), rho)


def _apply_word(g: GibbsSystem, w: Sequence[int], vec: list[Fraction]) -> list[Fraction]:
    for i in reversed(w):
        if i not in (0, 1):
            raise ValueError(f"binary digit expected, got {i!r}")
        rows = (g.m0 if i == 0 else g.m1).tolist()
        vec = [sum(r * v for r, v in zip(row, vec)) for row in rows]
    return vec


def cylinder_weight(g: GibbsSystem, w: Sequence[int]) -> Fraction:
    """``1.M_w R`` in exact arithmetic."""
    return sum(_apply_word(g, w, list(g.R)), Fraction(0))


def mu_bar_mass(g: GibbsSystem, w: Sequence[int]) -> Fraction:
    """Mass of the binary cylinder ``w``, exact."""
    return cylinder_weight(g, w) / (Fraction(3) ** len(w) * sum(g.R))


def phi_bar(g: GibbsSystem, w: Sequence[int]) -> float:
    if not w:
        raise ValueError("phi_bar needs a non-empty word")
    den = cylinder_weight(g, w[1:])
    if den == 0:
        raise DegenerateDenominator(f"tail weight vanishes for {tuple(w)}")
    num = cylinder_weight(g, w)
    if num == 0:
        return -math.inf
    return math.log(num / den)


def entry_sum(mat: np.ndarray) -> int:
    return int(np.asarray(mat).sum())


def _integer_R(g: GibbsSystem) -> list[int]:
    den = math.lcm(*(r.denominator for r in g.R))
    return [int(r * den) for r in g.R]


def phi_bar_prefixes(g: GibbsSystem, w: Sequence[int]) -> list[float]:
    """``phi_bar(w[:k])`` for ``k = 1 .. len(w)``, sharing work across truncations.

    Row vectors ``1.M_{w_1..w_k}`` and ``1.M_{w_2..w_k}`` are grown from the
    left in exact integer arithmetic and paired with an integer multiple of R.
    """
    w = tuple(w)
    if not w:
        return []
    mats = [m.tolist() for m in g.matrices]
    r = _integer_R(g)
    size = len(r)

    def grow(row: list[int], i: int) -> list[int]:
        m = mats[i]
        return [sum(row[a] * m[a][b] for a in range(size)) for b in range(size)]

    head = grow([1] * size, w[0])
    tail = [1] * size
    out = []
    for k in range(len(w)):
        if k:
            head = grow(head, w[k])
            tail = grow(tail, w[k])
        num = sum(x * y for x, y in zip(head, r))
        den = sum(x * y for x, y in zip(tail, r))
        if den == 0:
            raise DegenerateDenominator(f"tail weight vanishes for {w[: k + 1]}")
        out.append(math.log(num) - math.log(den) if num else -math.inf)
    return out


def variation_bound_check(g: GibbsSystem, w: Sequence[int], m: int | None = None) -> bool:
    """Check ``|phi_bar(w[:n]) - phi_bar(w[:k])| <= 2 log |M_{w_1}|`` over truncations.

    ``|.|`` is the entry sum.  With ``m`` given only lengths ``m`` and
    ``len(w)`` are compared, otherwise every pair of truncation lengths is.
    """
    w = tuple(w)
    if not w:
        return True
    if m is not None and not 1 <= m <= len(w):
        raise ValueError(f"need 1 <= m <= {len(w)}, got {m}")
    bound = 2 * math.log(entry_sum(g.matrices[w[0]]))
    vals = phi_bar_prefixes(g, w)
    if m is not None:
        vals = [vals[m - 1], vals[-1]]
    return max(vals) - min(vals) <= bound + 1e-12


def _tail_vector(m0: np.ndarray, m1: np.ndarray, R: np.ndarray, t: Sequence[int]) -> np.ndarray:
    v = R.copy()
    for i in reversed(t):
        v = (m0 if i == 0 else m1) @ v
    return v


def weak_gibbs_constants(
    g: GibbsSystem, n_max: int = GIBBS_CAP, tail_length: int = DEFAULT_TAIL
) -> list[tuple[int, float]]:
    """``(n, log C_n / n)`` for ``n = 1 .. n_max``.

    The Birkhoff sum of ``phi_bar`` is evaluated at the points ``w t`` of each
    cylinder ``w``, for every binary tail ``t`` of length ``tail_length``.
    Along such a point the sum telescopes to ``log(1.M_{wt} R / 1.M_t R)``.
    For each tail, ``P_n`` is ``(1/n) log`` of the sum of exponentiated Birkhoff
    sums over all ``2**n`` cylinders, and ``C_n`` is the worst ratio, in either
    direction, between the cylinder mass and ``exp(S_n - n P_n)`` over all
    cylinders and tails.  ``tail_length=0`` reproduces the masses exactly.
    """
    if not 1 <= n_max <= GIBBS_CAP:
        raise ValueError(f"n_max must lie in [1, {GIBBS_CAP}]")
    if tail_length < 0:
        raise ValueError("tail_length must be non-negative")
    m0, m1 = (m.astype(np.float64) for m in g.matrices)
    R = g.R_float
    # columns: M_t R for every tail t
    tails = np.stack([_tail_vector(m0, m1, R, t) for t in product((0, 1), repeat=tail_length)], axis=1)
    rows = np.ones((1, R.size))
    out = []
    for n in range(1, n_max + 1):
        rows = np.concatenate([rows @ m0, rows @ m1])
        with np.errstate(divide="ignore"):
            log_mass = np.log(rows @ R) - n * math.log(3) - math.log(R.sum())
            birkhoff = np.log(rows @ tails) - np.log(tails.sum(axis=0))
        pressure = logsumexp(birkhoff, axis=0) / n
        live = np.isfinite(log_mass)
        dev = np.abs(log_mass[live, None] - birkhoff[live] + n * pressure)
        out.append((n, float(dev.max()) / n))
    return out


def cylinder_mass_table(g: GibbsSystem, n: int) -> list[tuple[str, Fraction]]:
    """Exact masses of all binary cylinders of length ``n``, in binary order."""
    if not 0 <= n <= GIBBS_CAP:
        raise ValueError(f"n must lie in [0, {GIBBS_CAP}]")
    return [("".join(map(str, w)), mu_bar_mass(g, w)) for w in product((0, 1), repeat=n)]
