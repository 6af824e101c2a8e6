import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from slicepressure.arith import pi_value, scaled_value
from slicepressure.errors import CapExceeded
from slicepressure.oracle import (
    class_sizes,
    collision_classes,
    histogram_entropy,
    overlap_count_exact,
    remainder_pair_count,
    rw_entropy_term,
    selfsim_residual,
)

from conftest import SMALL_SLOPES


def test_collision_classes_examples(half, diagonal):
    assert sorted(collision_classes(half, 1).sizes()) == [1, 1, 1]
    assert sorted(collision_classes(half, 2).sizes()) == sorted([1, 2, 1, 2, 1, 1, 1])
    assert sorted(collision_classes(diagonal, 1).sizes()) == [1, 2]


def test_collision_table_keys_are_word_values(half):
    table = collision_classes(half, 4)
    assert table.total_words() == 3**4
    for key, members in table.classes.items():
        for w in members:
            assert pi_value(w, half) == Fraction(key, half.q << 4)
            assert scaled_value(w, half) == key


def test_overlap_count_examples(half, diagonal):
    assert overlap_count_exact(half, 1) == 3
    assert overlap_count_exact(half, 2) == 13
    assert overlap_count_exact(diagonal, 2) == 25


@pytest.mark.parametrize("slope", SMALL_SLOPES, ids=str)
def test_class_sizes_partition_and_diagonal_bound(slope):
    for n in range(1, 8):
        sizes = class_sizes(slope, n)
        assert sizes.sum() == 3**n
        count = overlap_count_exact(slope, n)
        assert count >= 3**n
        assert (count == 3**n) == bool(np.all(sizes == 1))


@pytest.mark.parametrize("slope", SMALL_SLOPES, ids=str)
def test_overlap_count_matches_remainder_fold(slope):
    for n in range(1, 5):
        assert overlap_count_exact(slope, n) == remainder_pair_count(slope, n)


def test_entropy_examples(half, diagonal):
    assert rw_entropy_term(half, 1) == pytest.approx(math.log(3), abs=1e-12)
    assert rw_entropy_term(half, 2) == pytest.approx(2 * math.log(3) - 4 / 9 * math.log(2), abs=1e-12)
    # the quoted decimal 1.889154 is a rounding slip; the closed form is 1.8891592
    assert rw_entropy_term(half, 2) == pytest.approx(1.889154, abs=1e-5)
    assert rw_entropy_term(diagonal, 1) == pytest.approx(0.636514, abs=1e-6)


@pytest.mark.parametrize("slope", SMALL_SLOPES, ids=str)
def test_histogram_entropy_matches_enumeration(slope):
    for n in range(1, 9):
        assert histogram_entropy(slope, n) == pytest.approx(rw_entropy_term(slope, n), abs=1e-10)


@pytest.mark.parametrize("slope", SMALL_SLOPES[:4], ids=str)
def test_entropy_subadditive(slope):
    # the level-(n+m) value histogram is the convolution of scaled level-n and level-m ones
    for n in range(1, 4):
        for m in range(1, 4):
            assert rw_entropy_term(slope, n + m) <= rw_entropy_term(slope, n) + rw_entropy_term(slope, m) + 1e-12


def test_cap_enforced(half):
    with pytest.raises(CapExceeded):
        overlap_count_exact(half, 11)
    with pytest.raises(CapExceeded):
        collision_classes(half, 11)


def test_selfsim_examples(half):
    assert selfsim_residual(half, (Fraction(0), Fraction(1)), 12) == 0
    assert selfsim_residual(half, (Fraction(0), Fraction(1, 2)), 12) <= 2**-10
    assert selfsim_residual(half, (Fraction(0), Fraction(1, 4)), 12) <= 2**-8


@pytest.mark.parametrize("slope", SMALL_SLOPES[:4], ids=str)
def test_selfsim_on_odd_intervals(slope):
    for a, b in product([Fraction(k, 7) for k in range(0, 14, 3)], repeat=2):
        if a < b:
            assert selfsim_residual(slope, (a, b), 9) == 0
