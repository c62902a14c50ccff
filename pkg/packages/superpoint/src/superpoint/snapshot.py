# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import struct
from pathlib import Path

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np
from logger.logger import Logger

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.cube import ATVCube
from superpoint.exceptions import SnapshotError
from superpoint.packing import unpack_counters, words_per_vector
from superpoint.rrh import RRHParams
from superpoint.timestamps import counter_bits


MAGIC = b"ATVC"
VERSION = 1

# magic, version, g, k, c, r, u, s, theta, a, a_inv, bh_seed, mode, prime, c0, slice_index
_HEADER = struct.Struct("<4sBIIBBBBdQQQBQIq")
HEADER_SIZE = _HEADER.size
_MODES = {"odd": 0, "prime": 1}


def save_snapshot(cube: ATVCube, path: str | Path, *, logger: Logger | None = None) -> int:
    """
    Write the cube to a binary file.

    Layout: fixed header, frame presence mask (one bit per frame, little-endian
    bit order), then the packed words of every allocated frame in frame order.

    Args:
        cube: ATVCube at a slice boundary.
        path: Output file.
        logger: Optional logger instance.

    Returns:
        Bytes written.
    """
    params = cube.params
    allocated = cube.allocated_frames()

    presence = np.zeros(params.frames, dtype=np.uint8)
    presence[allocated] = 1

    header = _HEADER.pack(
        MAGIC,
        VERSION,
        cube.g,
        cube.k,
        params.c,
        params.r,
        params.u,
        params.s,
        cube.theta,
        params.a,
        params.a_inv,
        params.bh_seed,
        _MODES[params.mode],
        params.prime or 0,
        cube.clock.c0,
        cube.clock.slice_index,
    )

    chunks = [header, np.packbits(presence, bitorder="little").tobytes()]
    for z in allocated:
        chunks.append(cube.frame_words(z).astype("<u4").tobytes())

    payload = b"".join(chunks)
    Path(path).write_bytes(payload)

    if logger is not None:
        logger.bind("save_snapshot").info(
            f"snapshot.saved | path: {path}, frames: {len(allocated)}, bytes: {len(payload)}"
        )
    return len(payload)


def load_snapshot(
    path: str | Path,
    *,
    params: RRHParams,
    g: int,
    k: int,
    theta: float,
    cap: int = 1_000_000,
    logger: Logger | None = None,
) -> ATVCube:
    """
    Rebuild a cube written by ``save_snapshot``.

    The stored geometry and hashing parameters must match the expected ones.
    ``theta`` and ``cap`` are query settings and are taken from the caller.

    Args:
        path: Snapshot file.
        params: Expected hashing parameters.
        g: Expected counters per vector.
        k: Expected window capacity.
        theta: Detection threshold of the rebuilt cube.
        cap: Candidate cap of the rebuilt cube.
        logger: Optional logger instance.

    Returns:
        ATVCube

    Raises:
        SnapshotError: on unreadable data, bad magic or version, or any mismatch.
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise SnapshotError(f"cannot read snapshot {path}: {e}") from e

    if len(raw) < _HEADER.size:
        raise SnapshotError(f"snapshot {path} is truncated")

    (
        magic, version, s_g, s_k, s_c, s_r, s_u, s_s, _theta,
        s_a, s_a_inv, s_seed, s_mode, s_prime, c0, slice_index,
    ) = _HEADER.unpack_from(raw)

    if magic != MAGIC:
        raise SnapshotError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise SnapshotError(f"unsupported snapshot version {version}")

    stored = {"g": s_g, "k": s_k, "c": s_c, "r": s_r, "u": s_u, "s": s_s}
    expected = {"g": g, "k": k, "c": params.c, "r": params.r, "u": params.u, "s": params.s}
    mismatched = [f"{name}: {stored[name]} != {expected[name]}" for name in stored if stored[name] != expected[name]]

    if (s_a, s_a_inv, s_seed) != (params.a, params.a_inv, params.bh_seed):
        mismatched.append("hashing keys differ")
    if s_mode != _MODES[params.mode] or s_prime != (params.prime or 0):
        mismatched.append("mangle mode differs")
    if mismatched:
        raise SnapshotError(f"snapshot {path} does not match: {', '.join(mismatched)}")

    cube = ATVCube(
        params=params,
        g=g,
        k=k,
        theta=theta,
        cap=cap,
        preallocate=False,
        start_slice=slice_index,
        logger=logger,
    )
    if not 0 <= c0 < 2 * k:
        raise SnapshotError(f"base clock {c0} out of range for k={k}")
    cube.clock.c0 = c0

    offset = _HEADER.size
    mask_bytes = -(-params.frames // 8)
    if len(raw) < offset + mask_bytes:
        raise SnapshotError(f"snapshot {path} is truncated in the frame mask")
    presence = np.unpackbits(
        np.frombuffer(raw, dtype=np.uint8, count=mask_bytes, offset=offset),
        bitorder="little",
    )[: params.frames]
    offset += mask_bytes

    bits = counter_bits(k)
    vectors = params.r * params.columns
    n_words = words_per_vector(g, bits)
    frame_bytes = vectors * n_words * 4

    for z in np.flatnonzero(presence):
        if offset + frame_bytes > len(raw):
            raise SnapshotError(f"snapshot {path} is truncated at frame {int(z)}")
        words = np.frombuffer(raw, dtype="<u4", count=vectors * n_words, offset=offset)
        values = unpack_counters(words.reshape(vectors, n_words), g, bits)
        if values.size and int(values.max()) > 2 * k:
            raise SnapshotError(f"frame {int(z)} holds counters above 2k")
        cube.install_frame(int(z), values.reshape(params.r, params.columns, g))
        offset += frame_bytes

    if offset != len(raw):
        raise SnapshotError(f"snapshot {path} has {len(raw) - offset} trailing bytes")

    if logger is not None:
        logger.bind("load_snapshot").info(
            f"snapshot.loaded | path: {path}, frames: {int(presence.sum())}, slice: {slice_index}"
        )
    return cube
