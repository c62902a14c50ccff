# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np


MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF

_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def u64(x: int) -> int:
    return x & MASK64


def mix64(x: int) -> int:
    """
    SplitMix64 finalizer.

    Args:
        x: Input value (masked to 64 bits).

    Returns:
        Mixed unsigned 64-bit value.
    """
    z = u64(x)
    z = u64((z ^ (z >> 30)) * _MUL1)
    z = u64((z ^ (z >> 27)) * _MUL2)
    return z ^ (z >> 31)


def derive_seed(master: int, salt: int) -> int:
    """
    Derive an independent 64-bit seed from a master seed.

    Args:
        master: Master seed.
        salt: Per-purpose salt.

    Returns:
        Mixed 64-bit seed.
    """
    return mix64(u64(master) ^ mix64(u64(salt) + _GOLDEN))


def bh(bip: int, g: int, seed: int) -> int:
    """
    Keyed peer hash onto [0, g).

    Mixes the peer address with the seed and reduces the high 32 bits by
    multiply-shift, so g need not be a power of two.

    Args:
        bip: Peer address as a 32-bit int.
        g: Range size, >= 1.
        seed: 64-bit key.

    Returns:
        Counter index in [0, g).
    """
    mixed = mix64((bip & MASK32) ^ seed)
    return ((mixed >> 32) * g) >> 32


def mix64_array(xs: np.ndarray) -> np.ndarray:
    """
    Vectorized ``mix64`` over uint64 arrays.

    Args:
        xs: Values, any integer dtype.

    Returns:
        uint64 array, bit-identical to the scalar form.
    """
    z = np.asarray(xs).astype(np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


def bh_array(bips: np.ndarray, g: int, seed: int) -> np.ndarray:
    """
    Vectorized ``bh``.

    Args:
        bips: Peer addresses.
        g: Range size, >= 1.
        seed: 64-bit key.

    Returns:
        int64 array of counter indices in [0, g).
    """
    keyed = np.asarray(bips).astype(np.uint64) & np.uint64(MASK32)
    mixed = mix64_array(keyed ^ np.uint64(u64(seed)))
    with np.errstate(over="ignore"):
        reduced = ((mixed >> np.uint64(32)) * np.uint64(g)) >> np.uint64(32)
    return reduced.astype(np.int64)
