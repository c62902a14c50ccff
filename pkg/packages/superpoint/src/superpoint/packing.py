"""
Bit-packed counter layout of the cube's frames and snapshots.

Counter i of a vector occupies bits [i*w, (i+1)*w) of that vector's bit stream.
Stream bit j lives in word j // 32 at bit j % 32, so counters may span two words.
Each vector is padded to whole 32-bit words.
"""
# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import ParameterError
from superpoint.timestamps import counter_bits


WORD_BITS = 32

__all__ = [
    "WORD_BITS",
    "counter_bits",
    "gather_counters",
    "pack_counters",
    "scatter_counters",
    "unpack_counters",
    "words_per_vector",
]


def words_per_vector(g: int, bits: int) -> int:
    return -(-g * bits // WORD_BITS)


def pack_counters(values: np.ndarray, bits: int) -> np.ndarray:
    """
    Pack counter vectors into little-endian 32-bit words.

    Args:
        values: Counters shaped (n_vectors, g).
        bits: Width of one counter, 1..32.

    Returns:
        uint32 array shaped (n_vectors, words_per_vector(g, bits)).

    Raises:
        ParameterError: when a value does not fit in ``bits``.
    """
    if not 1 <= bits <= WORD_BITS:
        raise ParameterError(f"bits must be in [1, {WORD_BITS}], got {bits}")

    values = np.atleast_2d(np.asarray(values))
    n, g = values.shape
    if values.size and int(values.max()) >= 1 << bits:
        raise ParameterError(f"counter value {int(values.max())} does not fit in {bits} bits")

    shifts = np.arange(bits, dtype=np.uint64)
    stream = ((values.astype(np.uint64)[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)
    stream = stream.reshape(n, g * bits)

    n_words = words_per_vector(g, bits)
    padded = np.zeros((n, n_words * WORD_BITS), dtype=np.uint8)
    padded[:, : g * bits] = stream

    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u4").astype(np.uint32).reshape(n, n_words)


def unpack_counters(words: np.ndarray, g: int, bits: int) -> np.ndarray:
    """
    Inverse of ``pack_counters``.

    Args:
        words: uint32 array shaped (n_vectors, W).
        g: Counters per vector.
        bits: Width of one counter.

    Returns:
        uint32 array shaped (n_vectors, g).
    """
    if not 1 <= bits <= WORD_BITS:
        raise ParameterError(f"bits must be in [1, {WORD_BITS}], got {bits}")

    words = np.atleast_2d(np.asarray(words, dtype=np.uint32))
    n, n_words = words.shape
    if n_words < words_per_vector(g, bits):
        raise ParameterError(
            f"{n_words} words cannot hold {g} counters of {bits} bits"
        )

    raw = np.ascontiguousarray(words.astype("<u4")).view(np.uint8).reshape(n, n_words * 4)
    stream = np.unpackbits(raw, axis=-1, bitorder="little")[:, : g * bits]

    weights = np.uint64(1) << np.arange(bits, dtype=np.uint64)
    counters = (stream.reshape(n, g, bits).astype(np.uint64) * weights).sum(axis=-1)
    return counters.astype(np.uint32)


def _locate(indices: np.ndarray, bits: int) -> tuple[np.ndarray, np.ndarray]:
    offsets = indices.astype(np.int64) * bits
    return offsets // WORD_BITS, (offsets % WORD_BITS).astype(np.uint64)


def gather_counters(words: np.ndarray, vectors: np.ndarray, indices: np.ndarray, bits: int) -> np.ndarray:
    """
    Read counters straight from packed words.

    Args:
        words: uint32 array shaped (n_vectors, W).
        vectors: Vector rows, broadcastable against ``indices``.
        indices: Counter indices within each vector.
        bits: Width of one counter.

    Returns:
        uint32 array shaped like the broadcast of ``vectors`` and ``indices``.
    """
    vectors = np.asarray(vectors, dtype=np.int64)
    q, shift = _locate(np.asarray(indices), bits)
    # A counter that fits in its last word ignores whatever the clipped next word holds.
    nxt = np.minimum(q + 1, words.shape[-1] - 1)

    lo = words[vectors, q].astype(np.uint64)
    hi = words[vectors, nxt].astype(np.uint64)
    mask = np.uint64((1 << bits) - 1)
    return ((((hi << np.uint64(WORD_BITS)) | lo) >> shift) & mask).astype(np.uint32)


def scatter_counters(
    words: np.ndarray,
    vectors: np.ndarray,
    indices: np.ndarray,
    values: np.ndarray,
    bits: int,
) -> None:
    """
    Write counters into packed words in place.

    Counters sharing a word are merged bit by bit, so one call may touch any
    number of neighbours. A counter repeated in one call must carry the same
    value each time. Not safe against concurrent writers of the same array.

    Args:
        words: uint32 array shaped (n_vectors, W), modified in place.
        vectors: Vector rows, broadcastable against ``indices`` and ``values``.
        indices: Counter indices within each vector.
        values: New counter values, each below 2**bits.
        bits: Width of one counter.
    """
    vectors, indices, values = (
        a.ravel() for a in np.broadcast_arrays(np.asarray(vectors), np.asarray(indices), np.asarray(values))
    )
    if vectors.size == 0:
        return

    q, shift = _locate(indices, bits)
    mask = np.uint64((1 << bits) - 1)
    wide_mask = mask << shift
    wide_values = (values.astype(np.uint64) & mask) << shift

    low = np.uint64(0xFFFFFFFF)
    np.bitwise_and.at(words, (vectors, q), (~(wide_mask & low)).astype(np.uint32))
    np.bitwise_or.at(words, (vectors, q), (wide_values & low).astype(np.uint32))

    spans = (wide_mask >> np.uint64(WORD_BITS)) != 0
    if spans.any():
        high_mask = (wide_mask[spans] >> np.uint64(WORD_BITS)).astype(np.uint32)
        high_values = (wide_values[spans] >> np.uint64(WORD_BITS)).astype(np.uint32)
        at = (vectors[spans], q[spans] + 1)
        np.bitwise_and.at(words, at, ~high_mask)
        np.bitwise_or.at(words, at, high_values)
