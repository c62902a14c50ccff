"""
Asynchronous timestamp counters.

An asynchronous timestamp (AT) holds a value in [0, 2k]. The value 2k marks the
counter inactive; any other value is the clock of its block (ACT) at the slice
the counter was last set. Clocks run over [0, 2k-1] and wrap, so a counter only
needs maintenance every k slices instead of every slice.

The scalar functions work on plain ints; the ``*_array`` variants apply the
same rules to numpy arrays and are used by vectors and the cube.
"""
# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import math
from dataclasses import dataclass

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import ParameterError


@dataclass(frozen=True, slots=True)
class ACTClock:
    """
    Asynchronous current timestamp of one block.

    Args:
        act: Clock value in [0, 2k-1].
        k: Window capacity in slices.
    """

    act: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if not 0 <= self.act < 2 * self.k:
            raise ParameterError(f"act must be in [0, {2 * self.k - 1}], got {self.act}")


    def advance(self) -> "ACTClock":
        """
        Clock of the next slice.

        Returns:
            ACTClock
        """
        return ACTClock(act=(self.act + 1) % (2 * self.k), k=self.k)


def counter_bits(k: int) -> int:
    """
    Bits needed to store one AT for window capacity k.

    Args:
        k: Window capacity in slices.

    Returns:
        ceil(log2(2k+1))
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    return math.ceil(math.log2(2 * k + 1))


def init_at(k: int) -> int:
    """
    Fresh counter value: the inactive sentinel.

    Args:
        k: Window capacity in slices.

    Returns:
        2k
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    return 2 * k


def set_at(act: int, k: int) -> int:
    """
    Counter value after a touch under clock ``act``.

    Args:
        act: Block clock in [0, 2k-1].
        k: Window capacity in slices.

    Returns:
        act
    """
    if not 0 <= act < 2 * k:
        raise ParameterError(f"act must be in [0, {2 * k - 1}], got {act}")
    return act


def check_at(at: int, act: int, k: int, k_prime: int) -> bool:
    """
    Whether a counter was set within the latest ``k_prime`` slices.

    The current slice counts as distance 0.

    Args:
        at: Counter value.
        act: Clock of the counter's block.
        k: Window capacity in slices.
        k_prime: Query window length, 1 <= k_prime <= k.

    Returns:
        True when active.
    """
    _check_k_prime(k_prime, k)

    if at == 2 * k:
        return False

    dis = (act + 2 * k - at) % (2 * k)
    return dis <= k_prime - 1


def preserve_at(at: int, act: int, k: int) -> int:
    """
    Mark a counter inactive when its distance can exceed k.

    Called at the beginning of a slice with the block's new clock. Only clocks 0
    and k do any work.

    Args:
        at: Counter value.
        act: New clock of the counter's block.
        k: Window capacity in slices.

    Returns:
        The maintained counter value.
    """
    if act % k != 0:
        return at

    if act == 0 and 0 <= at <= k:
        return 2 * k

    if act == k and (k <= at <= 2 * k - 1 or at == 0):
        return 2 * k

    return at


def check_at_array(ats: np.ndarray, acts: np.ndarray | int, k: int, k_prime: int) -> np.ndarray:
    """
    Vectorized ``check_at``.

    Args:
        ats: Counter values, any shape.
        acts: Clocks broadcastable against ``ats``.
        k: Window capacity in slices.
        k_prime: Query window length.

    Returns:
        Boolean array shaped like the broadcast of ``ats`` and ``acts``.
    """
    _check_k_prime(k_prime, k)

    values = ats.astype(np.int32, copy=False)
    dis = (np.asarray(acts, dtype=np.int32) + 2 * k - values) % (2 * k)
    return (values != 2 * k) & (dis <= k_prime - 1)


def preserve_at_array(ats: np.ndarray, act: int, k: int) -> np.ndarray:
    """
    Vectorized ``preserve_at`` for counters sharing one clock.

    Args:
        ats: Counter values of one block (or of the same block across vectors).
        act: New clock of that block.
        k: Window capacity in slices.

    Returns:
        A new array with maintained values.
    """
    if act % k != 0:
        return ats

    inactive = 2 * k
    if act == 0:
        stale = ats <= k
    else:
        stale = ((ats >= k) & (ats <= 2 * k - 1)) | (ats == 0)

    return np.where(stale, ats.dtype.type(inactive), ats)


def _check_k_prime(k_prime: int, k: int) -> None:
    if not 1 <= k_prime <= k:
        raise ParameterError(f"k_prime must be in [1, {k}], got {k_prime}")
