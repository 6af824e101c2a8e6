"""Hot numeric kernels with a compiled and a plain-numpy implementation.

The backend is chosen once at import time from the ``SLICEPRESSURE_BACKEND``
environment variable (``numba`` or ``numpy``).  When the variable is unset
the compiled backend is used if numba imports cleanly.  Both backends are
kept bit-compatible on integer outputs; ``get_kernel`` exposes either one
explicitly so tests and the benchmark can compare them.
"""

from __future__ import annotations

import os
from typing import Callable

import numpy as np

try:
    import numba as _numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None
    HAVE_NUMBA = False

BACKEND_ENV = "SLICEPRESSURE_BACKEND"


def _resolve_backend() -> str:
    requested = os.environ.get(BACKEND_ENV, "").strip().lower()
    if requested in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if requested not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAVE_NUMBA:
        raise ImportError(f"{BACKEND_ENV}=numba but numba is not importable")
    return requested


BACKEND = _resolve_backend()


def _jit(fn):
    if not HAVE_NUMBA:
        return None
    return _numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------- numpy ---


def _enumerate_values_np(digits: np.ndarray, n: int) -> np.ndarray:
    vals = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        vals = (2 * vals[:, None] + digits[None, :]).ravel()
    return vals


def _class_counts_np(values: np.ndarray):
    return np.unique(values, return_counts=True)


def _value_histogram_np(digits: np.ndarray, n: int) -> np.ndarray:
    top = int(digits.max())
    hist = np.ones(1, dtype=np.int64)
    for _ in range(n):
        nxt = np.zeros(2 * (hist.size - 1) + top + 1, dtype=np.int64)
        for d in digits:
            nxt[d : d + 2 * hist.size - 1 : 2] += hist
        hist = nxt
    return hist


def _power_iterate_np(mat: np.ndarray, max_iter: int, rtol: float):
    k = mat.shape[0]
    v = np.ones(k)
    lo = hi = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        w = mat @ v + v
        v = w / w.sum()
        av = mat @ v
        ratios = av / v
        lo, hi = ratios.min(), ratios.max()
        if lo > 0 and hi - lo <= rtol * hi:
            break
    return v, it, lo, hi


def _support_hilbert_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # rows of a and b share a zero pattern; distance on the common support
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(a > 0, a / np.where(b > 0, b, 1.0), np.nan)
    return np.log(np.nanmax(r, axis=1)) - np.log(np.nanmin(r, axis=1))


def _contraction_ratios_np(mat: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    fx = xs @ mat.T
    fy = ys @ mat.T
    num = _support_hilbert_np(fx, fy)
    den = _support_hilbert_np(xs, ys)
    out = np.full(xs.shape[0], np.nan)
    ok = den > 0
    out[ok] = num[ok] / den[ok]
    return out


def _count_flagged_blocks_np(blocks: np.ndarray, table: np.ndarray) -> int:
    idx = 16 * blocks[:, 0] + 4 * blocks[:, 1] + blocks[:, 2]
    return int(table[idx].sum())


# ---------------------------------------------------------------- numba ---


def _enumerate_values_nb(digits, n):
    size = 1
    for _ in range(n):
        size *= 3
    out = np.zeros(size, dtype=np.int64)
    cur = 1
    for _ in range(n):
        # expand back to front so entries not yet read are never overwritten
        for idx in range(cur - 1, -1, -1):
            base = 2 * out[idx]
            for k in range(3):
                out[3 * idx + k] = base + digits[k]
        cur *= 3
    return out


def _class_counts_nb(values):
    if values.size == 0:
        return values.copy(), values.copy()
    lo = values.min()
    span = values.max() - lo + 1
    if span <= 4 * values.size + 1024:
        # word values are dense in a short range, so a counting pass beats sorting
        tally = np.zeros(span, dtype=np.int64)
        for v in values:
            tally[v - lo] += 1
        m = 0
        for c in tally:
            if c:
                m += 1
        keys = np.empty(m, dtype=np.int64)
        counts = np.empty(m, dtype=np.int64)
        j = 0
        for i in range(span):
            if tally[i]:
                keys[j] = i + lo
                counts[j] = tally[i]
                j += 1
        return keys, counts
    s = np.sort(values)
    keys = np.empty(s.size, dtype=np.int64)
    counts = np.empty(s.size, dtype=np.int64)
    m = 0
    i = 0
    while i < s.size:
        j = i + 1
        while j < s.size and s[j] == s[i]:
            j += 1
        keys[m] = s[i]
        counts[m] = j - i
        m += 1
        i = j
    return keys[:m], counts[:m]


def _value_histogram_nb(digits, n):
    top = digits.max()
    hist = np.ones(1, dtype=np.int64)
    for _ in range(n):
        nxt = np.zeros(2 * (hist.size - 1) + top + 1, dtype=np.int64)
        for k in range(digits.size):
            d = digits[k]
            for v in range(hist.size):
                nxt[2 * v + d] += hist[v]
        hist = nxt
    return hist


def _power_iterate_nb(mat, max_iter, rtol):
    k = mat.shape[0]
    v = np.ones(k)
    w = np.empty(k)
    lo = 0.0
    hi = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        total = 0.0
        for i in range(k):
            acc = v[i]
            for j in range(k):
                acc += mat[i, j] * v[j]
            w[i] = acc
            total += acc
        for i in range(k):
            v[i] = w[i] / total
        lo = np.inf
        hi = 0.0
        for i in range(k):
            acc = 0.0
            for j in range(k):
                acc += mat[i, j] * v[j]
            r = acc / v[i]
            if r < lo:
                lo = r
            if r > hi:
                hi = r
        if lo > 0 and hi - lo <= rtol * hi:
            break
    return v, it, lo, hi


def _pair_hilbert_nb(a, b):
    big = -np.inf
    small = np.inf
    for i in range(a.size):
        if a[i] > 0:
            r = a[i] / b[i]
            if r > big:
                big = r
            if r < small:
                small = r
    return np.log(big) - np.log(small)


def _contraction_ratios_nb(mat, xs, ys):
    m = xs.shape[0]
    out = np.empty(m)
    fx = np.empty(4)
    fy = np.empty(4)
    for s in range(m):
        for i in range(4):
            ax = 0.0
            ay = 0.0
            for j in range(4):
                ax += mat[i, j] * xs[s, j]
                ay += mat[i, j] * ys[s, j]
            fx[i] = ax
            fy[i] = ay
        den = _pair_hilbert_nb(xs[s], ys[s])
        if den > 0:
            out[s] = _pair_hilbert_nb(fx, fy) / den
        else:
            out[s] = np.nan
    return out


def _count_flagged_blocks_nb(blocks, table):
    total = 0
    for s in range(blocks.shape[0]):
        if table[16 * blocks[s, 0] + 4 * blocks[s, 1] + blocks[s, 2]]:
            total += 1
    return total


_pair_hilbert_nb = _jit(_pair_hilbert_nb) or _pair_hilbert_nb

_NUMPY: dict[str, Callable] = {
    "enumerate_values": _enumerate_values_np,
    "class_counts": _class_counts_np,
    "value_histogram": _value_histogram_np,
    "power_iterate": _power_iterate_np,
    "contraction_ratios": _contraction_ratios_np,
    "count_flagged_blocks": _count_flagged_blocks_np,
}

_NUMBA: dict[str, Callable] = {}
if HAVE_NUMBA:
    _NUMBA = {
        "enumerate_values": _jit(_enumerate_values_nb),
        "class_counts": _jit(_class_counts_nb),
        "value_histogram": _jit(_value_histogram_nb),
        "power_iterate": _jit(_power_iterate_nb),
        "contraction_ratios": _jit(_contraction_ratios_nb),
        "count_flagged_blocks": _jit(_count_flagged_blocks_nb),
    }

KERNEL_NAMES = tuple(_NUMPY)


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def get_kernel(name: str, backend: str | None = None) -> Callable:
    """Return kernel ``name`` for ``backend`` (default: the active backend)."""
    backend = backend or BACKEND
    table = _NUMBA if backend == "numba" else _NUMPY
    if backend not in available_backends():
        raise ValueError(f"backend {backend!r} is not available")
    return table[name]


# Typed wrappers used by the rest of the package.  Inputs are coerced to the
# dtypes the compiled versions expect so that both backends see the same data.


def enumerate_values(digits, n: int) -> np.ndarray:
    """Scaled values of every word of length ``n``, in lexicographic word order."""
    return get_kernel("enumerate_values")(np.asarray(digits, dtype=np.int64), int(n))


def class_counts(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sorted distinct values and their multiplicities."""
    return get_kernel("class_counts")(np.ascontiguousarray(values, dtype=np.int64))


def value_histogram(digits, n: int) -> np.ndarray:
    """Multiplicity of every scaled value ``0..max`` among words of length ``n``."""
    return get_kernel("value_histogram")(np.asarray(digits, dtype=np.int64), int(n))


def power_iterate(mat, max_iter: int = 100_000, rtol: float = 1e-13):
    """Power iteration on ``I + mat``; returns (vector, iterations, lo, hi)."""
    return get_kernel("power_iterate")(
        np.ascontiguousarray(mat, dtype=np.float64), int(max_iter), float(rtol)
    )


def contraction_ratios(mat, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Per-pair ratio d(Mx, My) / d(x, y) in the Hilbert metric (nan when x = y)."""
    return get_kernel("contraction_ratios")(
        np.ascontiguousarray(mat, dtype=np.float64),
        np.ascontiguousarray(xs, dtype=np.float64),
        np.ascontiguousarray(ys, dtype=np.float64),
    )


def count_flagged_blocks(blocks: np.ndarray, table: np.ndarray) -> int:
    """Number of rows of ``blocks`` (triples of B indices) flagged in ``table``."""
    return int(
        get_kernel("count_flagged_blocks")(
            np.ascontiguousarray(blocks, dtype=np.int64),
            np.ascontiguousarray(table, dtype=np.bool_),
        )
    )
