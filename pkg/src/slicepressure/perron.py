"""Certified bounds on the log spectral radius of non-negative integer matrices.

A floating-point power iterate supplies a positive test vector; the bounds
themselves are the Collatz-Wielandt ratios ``min_i (Av)_i / v_i`` and
``max_i (Av)_i / v_i`` evaluated in exact integer arithmetic on a rounded
copy of that vector, then widened by a few ulps after taking logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .errors import NotConverged, NotIrreducible

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000
_SCALE_BITS = 62


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lower, upper]`` known to contain a real quantity."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower <= self.upper:
            raise ValueError(f"inverted enclosure [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= x <= self.upper + slack

    def as_dict(self) -> dict[str, float]:
        return {"lower": self.lower, "upper": self.upper}


def _widen(lo: float, hi: float, ulps: int = 4) -> tuple[float, float]:
    for _ in range(ulps):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
    return lo, hi


def _log_fraction(x: Fraction) -> float:
    # float(x) is correctly rounded; the caller widens afterwards
    if x <= 0:
        return -math.inf
    f = float(x)
    if f == 0.0 or math.isinf(f):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(f)


def _as_int_rows(mat) -> list[list[int]]:
    arr = np.asarray(mat)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"need a square matrix, got shape {arr.shape}")
    rows = [[int(v) for v in row] for row in arr.tolist()]
    if any(v < 0 for row in rows for v in row):
        raise ValueError("matrix has negative entries")
    return rows


def is_irreducible(mat) -> bool:
    arr = np.asarray(mat)
    n_comp, _ = connected_components(csr_matrix(arr > 0), directed=True, connection="strong")
    if arr.shape[0] == 1:
        return bool(arr[0, 0] > 0)
    return n_comp == 1


def strong_components(mat) -> list[np.ndarray]:
    """Index sets of the strongly connected components of the support graph."""
    arr = np.asarray(mat)
    n_comp, labels = connected_components(csr_matrix(arr > 0), directed=True, connection="strong")
    return [np.flatnonzero(labels == c) for c in range(n_comp)]


def collatz_wielandt_bounds(mat, vec) -> tuple[Fraction, Fraction]:
    """Exact min and max of ``(A v)_i / v_i`` for a positive integer vector ``v``."""
    rows = _as_int_rows(mat)
    v = [int(x) for x in vec]
    if any(x <= 0 for x in v):
        raise ValueError("test vector must be strictly positive")
    ratios = [Fraction(sum(a * b for a, b in zip(row, v)), vi) for row, vi in zip(rows, v)]
    return min(ratios), max(ratios)


def log_perron_enclosure(
    mat, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> Enclosure:
    """Enclosure of ``log rho(A)`` for an irreducible non-negative integer matrix.

    Parameters
    ----------
    mat : array_like
        Square matrix with non-negative integer entries.
    tol : float
        Required width of the returned enclosure (in log units).
    max_iter : int
        Iteration cap for the floating-point power iteration.

    Raises
    ------
    NotIrreducible
        If the support graph is not strongly connected.
    NotConverged
        If the certified width stays above ``tol``.
    """
    rows = _as_int_rows(mat)
    arr = np.array(rows, dtype=np.float64)
    if not is_irreducible(arr):
        raise NotIrreducible("support graph is not strongly connected")
    if len(rows) == 1:
        x = math.log(rows[0][0])
        return Enclosure(x, x)
    v, _, _, _ = kernels.power_iterate(arr, max_iter, max(tol * 1e-2, 1e-14))
    scaled = [max(1, int(round(x / v.max() * (1 << _SCALE_BITS)))) for x in v]
    lo, hi = collatz_wielandt_bounds(rows, scaled)
    if lo == hi:
        x = _log_fraction(lo)
        return Enclosure(*_widen(x, x, 2))
    out = Enclosure(*_widen(_log_fraction(lo), _log_fraction(hi)))
    if out.width > tol:
        raise NotConverged(f"enclosure width {out.width:.3e} exceeds tolerance {tol:.1e}")
    return out


def log_spectral_radius(
    mat, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> Enclosure:
    """Enclosure of ``log rho(A)`` for any non-negative integer matrix.

    The spectral radius of a reducible matrix is the largest radius among its
    diagonal blocks on strongly connected components, so each block is
    certified separately and the maxima are combined.
    """
    arr = np.asarray(mat)
    best: Enclosure | None = None
    for comp in strong_components(arr):
        block = arr[np.ix_(comp, comp)]
        if comp.size == 1 and block[0, 0] == 0:
            continue
        enc = log_perron_enclosure(block, tol, max_iter)
        if best is None:
            best = enc
        else:
            best = Enclosure(max(best.lower, enc.lower), max(best.upper, enc.upper))
    if best is None:
        return Enclosure(-math.inf, -math.inf)
    return best
