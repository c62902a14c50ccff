# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import math
from dataclasses import dataclass, field

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import ParameterError, SaturatedEstimatorError
from superpoint.timestamps import check_at_array, init_at, preserve_at_array


def counter_dtype(k: int) -> np.dtype:
    """
    Smallest unsigned dtype holding the sentinel 2k.

    Args:
        k: Window capacity in slices.

    Returns:
        numpy dtype
    """
    if 2 * k <= np.iinfo(np.uint8).max:
        return np.dtype(np.uint8)
    if 2 * k <= np.iinfo(np.uint16).max:
        return np.dtype(np.uint16)
    return np.dtype(np.uint32)


@dataclass(frozen=True)
class BlockLayout:
    """
    Partition of g counters into 2k blocks with staggered clocks.

    The first 2k-1 blocks hold ``a`` counters and the last one holds
    ``b = g - a*(2k-1)`` counters, with ``a = g // (2k)``.

    Args:
        g: Counters per vector.
        k: Window capacity in slices.
    """

    g: int
    k: int

    a: int = field(init=False)
    b: int = field(init=False)
    index_blocks: np.ndarray = field(init=False, repr=False, compare=False)

    _clock_cache: dict[int, np.ndarray] = field(
        init=False, default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.g < 2 * self.k:
            raise ParameterError(f"g must be >= 2k ({2 * self.k}), got {self.g}")

        a = self.g // (2 * self.k)
        blocks = np.minimum(np.arange(self.g) // a, 2 * self.k - 1).astype(np.int32)
        blocks.setflags(write=False)

        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", self.g - a * (2 * self.k - 1))
        object.__setattr__(self, "index_blocks", blocks)


    @property
    def blocks(self) -> int:
        return 2 * self.k


    def block_of(self, index: int) -> int:
        """
        Block holding a counter.

        Args:
            index: Counter index in [0, g).

        Returns:
            Block number in [0, 2k).
        """
        if not 0 <= index < self.g:
            raise ParameterError(f"index must be in [0, {self.g}), got {index}")
        return min(index // self.a, 2 * self.k - 1)


    def block_indices(self, block: int) -> slice:
        """
        Counter indices of one block.

        Args:
            block: Block number in [0, 2k).

        Returns:
            slice over the vector
        """
        start = block * self.a
        stop = self.g if block == 2 * self.k - 1 else start + self.a
        return slice(start, stop)


    def block_size(self, block: int) -> int:
        return self.b if block == 2 * self.k - 1 else self.a


    def block_with_clock(self, c0: int, act: int) -> int:
        """
        Block whose clock equals ``act`` under base clock ``c0``.

        Block i runs on clock (c0 + i) mod 2k.

        Args:
            c0: Base clock.
            act: Wanted clock value.

        Returns:
            Block number.
        """
        return (act - c0) % (2 * self.k)


    def index_clocks(self, c0: int) -> np.ndarray:
        """
        Clock of every counter index under base clock ``c0``.

        Args:
            c0: Base clock in [0, 2k).

        Returns:
            Read-only int32 array of length g.
        """
        cached = self._clock_cache.get(c0)
        if cached is not None:
            return cached

        clocks = ((self.index_blocks + c0) % (2 * self.k)).astype(np.int32)
        clocks.setflags(write=False)

        if len(self._clock_cache) >= 4 * self.k:
            self._clock_cache.clear()
        self._clock_cache[c0] = clocks
        return clocks


    def preserved_per_slide(self, c0: int) -> int:
        """
        Counters examined by one slide arriving at base clock ``c0``.

        Args:
            c0: Base clock after the advance.

        Returns:
            size(block with clock 0) + size(block with clock k)
        """
        return (
            self.block_size(self.block_with_clock(c0, 0))
            + self.block_size(self.block_with_clock(c0, self.k))
        )


@dataclass(slots=True)
class BaseClock:
    """
    Clock of block 0, shared by every vector built on it.

    Args:
        k: Window capacity in slices.
        c0: Base clock in [0, 2k).
        slice_index: Absolute slice number, for reports and diagnostics.
    """

    k: int
    c0: int = 0
    slice_index: int = 0

    def advance(self) -> None:
        """
        Move to the next slice.
        """
        self.c0 = (self.c0 + 1) % (2 * self.k)
        self.slice_index += 1


    def block_clock(self, block: int) -> int:
        return (self.c0 + block) % (2 * self.k)


class ATVector:
    """
    Asynchronous timestamp vector: g counters in 2k staggered blocks.

    A vector may own its storage or be a view over cube storage; in both cases
    it reads the block clocks from the shared ``BaseClock``.
    """

    def __init__(
        self,
        layout: BlockLayout,
        clock: BaseClock,
        values: np.ndarray | None = None,
    ) -> None:
        if clock.k != layout.k:
            raise ParameterError(f"clock k={clock.k} does not match layout k={layout.k}")

        if values is None:
            values = np.full(layout.g, init_at(layout.k), dtype=counter_dtype(layout.k))
        elif values.shape != (layout.g,):
            raise ParameterError(f"values must have shape ({layout.g},), got {values.shape}")

        self.layout = layout
        self.clock = clock
        self.values = values
        self.examined = 0


    @property
    def g(self) -> int:
        return self.layout.g


    @property
    def k(self) -> int:
        return self.layout.k


    def touch(self, index: int) -> None:
        """
        Set one counter to its block clock.

        Args:
            index: Counter index in [0, g).
        """
        block = self.layout.block_of(index)
        self.values[index] = self.clock.block_clock(block)


    def touch_many(self, indices: np.ndarray) -> None:
        """
        Set several counters in the current slice.

        Args:
            indices: Counter indices in [0, g).
        """
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size and (indices.min() < 0 or indices.max() >= self.g):
            raise ParameterError(f"indices must be in [0, {self.g})")

        clocks = self.layout.index_clocks(self.clock.c0)
        self.values[indices] = clocks[indices]


    def slide(self) -> int:
        """
        Maintain the two blocks whose new clock is 0 or k.

        Must run after the base clock advanced.

        Returns:
            Number of counters examined.
        """
        examined = 0
        for act in (0, self.k):
            block = self.layout.block_with_clock(self.clock.c0, act)
            idx = self.layout.block_indices(block)
            self.values[idx] = preserve_at_array(self.values[idx], act, self.k)
            examined += idx.stop - idx.start

        self.examined = examined
        return examined


    def active(self, k_prime: int) -> np.ndarray:
        """
        Active mask over the vector.

        Args:
            k_prime: Query window length.

        Returns:
            Boolean array of length g.
        """
        clocks = self.layout.index_clocks(self.clock.c0)
        return check_at_array(self.values, clocks, self.k, k_prime)


    def weight(self, k_prime: int) -> int:
        """
        Number of counters active in the latest ``k_prime`` slices.

        Args:
            k_prime: Query window length.

        Returns:
            |ATV|^{k'}
        """
        return int(np.count_nonzero(self.active(k_prime)))


    def estimate(self, k_prime: int) -> float:
        """
        Linear-counting cardinality over the latest ``k_prime`` slices.
        """
        return estimate_cardinality(self.weight(k_prime), self.g)


def estimate_cardinality(w: int, g: int) -> float:
    """
    Linear-counting estimate from an active count.

    Args:
        w: Active counters, 0 <= w <= g.
        g: Counters per vector.

    Returns:
        -g * ln((g - w) / g)

    Raises:
        SaturatedEstimatorError: when w == g.
    """
    if not 0 <= w <= g:
        raise ParameterError(f"weight must be in [0, {g}], got {w}")
    if w == g:
        raise SaturatedEstimatorError(weight=w, g=g)

    return -g * math.log1p(-w / g)


def threshold_weight(theta: float, g: int) -> float:
    """
    Active count a vector needs to estimate at least ``theta``.

    Args:
        theta: Super point threshold.
        g: Counters per vector.

    Returns:
        g * (1 - e^{-theta/g})
    """
    return -g * math.expm1(-theta / g)
