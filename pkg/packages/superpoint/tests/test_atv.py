from __future__ import annotations

import math

import numpy as np
import pytest

from superpoint.atv import (
    ATVector,
    BaseClock,
    BlockLayout,
    counter_dtype,
    estimate_cardinality,
    threshold_weight,
)
from superpoint.exceptions import ParameterError, SaturatedEstimatorError
from superpoint.hashing import bh_array
from superpoint.traces.generators import distinct_addresses


def make_vector(g: int, k: int, c0: int = 0) -> ATVector:
    return ATVector(BlockLayout(g=g, k=k), BaseClock(k=k, c0=c0))


@pytest.mark.parametrize(
    "g,k,a,b",
    [(600, 300, 1, 1), (1200, 300, 2, 2), (1024, 300, 1, 425), (4096, 300, 6, 502)],
)
def test_block_sizes_cover_the_vector(g: int, k: int, a: int, b: int) -> None:
    layout = BlockLayout(g=g, k=k)

    assert (layout.a, layout.b) == (a, b)
    assert layout.a * (2 * k - 1) + layout.b == g
    assert sum(layout.block_size(i) for i in range(2 * k)) == g


def test_layout_rejects_small_vectors() -> None:
    with pytest.raises(ParameterError):
        BlockLayout(g=9, k=5)


def test_tail_indices_belong_to_last_block() -> None:
    layout = BlockLayout(g=1024, k=300)

    assert layout.block_of(598) == 598
    assert layout.block_of(599) == 599
    assert layout.block_of(1023) == 599
    assert layout.index_blocks.tolist() == [layout.block_of(i) for i in range(1024)]


def test_touch_sets_block_clock() -> None:
    atv = make_vector(600, 300)
    atv.touch(5)
    assert atv.values[5] == 5

    atv = make_vector(1200, 300, c0=7)
    atv.touch(3)
    assert atv.values[3] == 8


def test_touch_twice_in_a_slice_is_stable() -> None:
    atv = make_vector(1200, 300, c0=11)
    atv.touch(77)
    first = atv.values.copy()
    atv.touch(77)
    np.testing.assert_array_equal(atv.values, first)


def test_touch_rejects_out_of_range_index() -> None:
    atv = make_vector(64, 5)
    with pytest.raises(ParameterError):
        atv.touch(64)
    with pytest.raises(ParameterError):
        atv.touch_many(np.array([3, -1]))


def test_touch_many_matches_touch() -> None:
    a = make_vector(1024, 300, c0=123)
    b = make_vector(1024, 300, c0=123)
    indices = np.array([0, 5, 599, 600, 1023, 5])

    for i in indices:
        a.touch(int(i))
    b.touch_many(indices)

    np.testing.assert_array_equal(a.values, b.values)


def test_slide_examines_two_blocks() -> None:
    atv = make_vector(1200, 300)
    for _ in range(50):
        atv.clock.advance()
        assert atv.slide() == 4


def test_slide_cost_matches_layout_and_bound() -> None:
    g, k = 1024, 300
    atv = make_vector(g, k)
    layout = atv.layout
    bound = 2 * math.ceil(g / (2 * k)) + (layout.b - layout.a)

    for _ in range(2 * k + 3):
        atv.clock.advance()
        examined = atv.slide()
        assert examined == layout.preserved_per_slide(atv.clock.c0)
        assert examined <= bound


def test_weight_decays_after_full_cycle() -> None:
    k = 5
    atv = make_vector(64, k)
    atv.touch_many(np.arange(64))
    assert atv.weight(1) == 64

    for _ in range(2 * k):
        atv.clock.advance()
        atv.slide()

    assert all(atv.weight(kp) == 0 for kp in range(1, k + 1))
    assert (atv.values == 2 * k).all()


def test_weight_examples() -> None:
    atv = make_vector(64, 5)
    assert atv.weight(5) == 0

    atv.touch_many(np.array([1, 2, 3]))
    assert atv.weight(1) == 3


def test_weight_matches_last_touch_oracle(rng: np.random.Generator) -> None:
    g, k = 64, 5
    atv = make_vector(g, k)
    last = np.full(g, -1)

    for t in range(60):
        if t:
            atv.clock.advance()
            atv.slide()

        touched = rng.choice(g, size=int(rng.integers(0, 8)), replace=False)
        atv.touch_many(touched)
        last[touched] = t

        for kp in range(1, k + 1):
            expected = int(np.count_nonzero((last >= 0) & (t - last <= kp - 1)))
            assert atv.weight(kp) == expected


def test_weight_is_monotone_in_window(rng: np.random.Generator) -> None:
    atv = make_vector(256, 20)
    for _ in range(30):
        atv.clock.advance()
        atv.slide()
        atv.touch_many(rng.integers(0, 256, size=10))

    weights = [atv.weight(kp) for kp in range(1, 21)]
    assert weights == sorted(weights)


def test_estimate_examples() -> None:
    assert estimate_cardinality(0, 4096) == 0
    assert estimate_cardinality(2, 8) == pytest.approx(2.3015, abs=1e-4)
    assert estimate_cardinality(906, 4096) == pytest.approx(1023.9, abs=0.5)


def test_estimate_saturates() -> None:
    with pytest.raises(SaturatedEstimatorError) as info:
        estimate_cardinality(8, 8)
    assert info.value.weight == 8

    with pytest.raises(ParameterError):
        estimate_cardinality(9, 8)


def test_threshold_weight() -> None:
    assert threshold_weight(1024, 4096) == pytest.approx(906.03, abs=0.01)
    assert threshold_weight(1024, 1024) == pytest.approx(647.29, abs=0.01)
    assert estimate_cardinality(math.ceil(threshold_weight(1024, 4096)), 4096) >= 1024


def test_counter_dtype() -> None:
    assert counter_dtype(1) == np.uint8
    assert counter_dtype(300) == np.uint16
    assert counter_dtype(40_000) == np.uint32


def test_linear_counting_is_consistent() -> None:
    g, n = 4096, 1000
    estimates = []

    for seed in range(100):
        rng = np.random.default_rng(seed)
        items = distinct_addresses(rng, n)
        atv = make_vector(g, 300)
        atv.touch_many(bh_array(items, g, seed))
        estimates.append(atv.estimate(300))

    assert abs(np.mean(estimates) - n) <= 0.02 * n
