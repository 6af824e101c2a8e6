import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from slicepressure.errors import NotIrreducible
from slicepressure.perron import (
    Enclosure,
    collatz_wielandt_bounds,
    is_irreducible,
    log_perron_enclosure,
    log_spectral_radius,
    strong_components,
)


def test_scalar_is_exact():
    enc = log_perron_enclosure([[5]])
    assert enc.lower == enc.upper == math.log(5)


def test_known_cubic():
    enc = log_perron_enclosure([[2, 1, 0], [2, 3, 2], [0, 1, 2]])
    assert enc.contains(math.log((5 + math.sqrt(17)) / 2))
    assert enc.width < 1e-9


def test_reducible_rejected_by_irreducible_path():
    with pytest.raises(NotIrreducible):
        log_perron_enclosure([[1, 1], [0, 2]])


def test_reducible_spectral_radius_is_block_max():
    enc = log_spectral_radius([[1, 1, 0], [0, 2, 5], [0, 0, 0]])
    assert enc.contains(math.log(2))


def test_collatz_wielandt_exact_fraction():
    lo, hi = collatz_wielandt_bounds([[1, 2], [3, 4]], [1, 1])
    assert (lo, hi) == (3, 7)


def test_enclosure_rejects_inverted():
    with pytest.raises(ValueError):
        Enclosure(1.0, 0.0)


def test_components():
    comps = strong_components(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
    assert sorted(sorted(c.tolist()) for c in comps) == [[0, 1], [2]]
    assert not is_irreducible([[0]])


@given(arrays(np.int64, (4, 4), elements=st.integers(1, 9)))
def test_positive_matrices_enclose_numpy_radius(mat):
    enc = log_perron_enclosure(mat)
    rho = max(abs(np.linalg.eigvals(mat.astype(float))))
    assert enc.contains(math.log(rho), slack=1e-12)
    assert enc.width <= 1e-9
