# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import asdict
from typing import Iterator

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np
from logger.logger import Logger

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.atv import ATVector, BaseClock, BlockLayout, counter_dtype, threshold_weight
from superpoint.context import SliceContext
from superpoint.domain.reports import SuperPointReport
from superpoint.exceptions import (
    CubeOverloadError,
    FrameOverflowError,
    InvalidParamsError,
    ParameterError,
    PhaseError,
    SaturatedEstimatorError,
)
from superpoint.hashing import bh_array
from superpoint.packing import WORD_BITS, gather_counters, pack_counters, scatter_counters, words_per_vector
from superpoint.rrh import (
    RRHParams,
    consistent_tuples,
    digest,
    digest_array,
    peer_index,
    require_valid,
    restore_ip,
)
from superpoint.settings import SketchSettings
from superpoint.timestamps import check_at_array, counter_bits, init_at, preserve_at_array


UP_EPSILON = 1e-9


def bias_corrected_estimate(nat: int, g: int, up: float) -> float:
    """
    Cardinality from a joint active count with the false-active rate removed.

    Args:
        nat: Indices active in all rows, 0 <= nat < g.
        g: Counters per vector.
        up: Probability that one index is active in all rows, 0 <= up < 1.

    Returns:
        -g * ln((g - nat) / (g * (1 - up))), floored at 0.
    """
    estimate = -g * (math.log1p(-nat / g) - math.log1p(-up))
    return max(0.0, estimate)


class ATVCube:
    """
    Cube of 2^c x r x 2^u asynchronous timestamp vectors shared by all hosts.

    Storage is one (r, 2^c, W) array of uint32 words per frame, each vector
    packed as in ``superpoint.packing``: counter i at bits [i*w, (i+1)*w) of
    the vector's little-endian word stream, w = ceil(log2(2k+1)). Frames are
    allocated up front unless ``preallocate`` is False, in which case a frame is
    created by the first scan that lands in it; an unallocated frame only holds
    inactive counters.

    Two-phase contract:
    - open slice: ``scan_pair`` / ``scan_pairs`` only, from any number of threads
    - boundary: ``tick`` and every query, with no scan in flight
    """

    def __init__(
        self,
        *,
        params: RRHParams,
        g: int,
        k: int,
        theta: float,
        cap: int = 1_000_000,
        preallocate: bool = True,
        start_slice: int = 0,
        logger: Logger | None = None,
    ) -> None:
        require_valid(params)
        if theta <= 0:
            raise ParameterError(f"theta must be > 0, got {theta}")
        if cap < 1:
            raise ParameterError(f"cap must be >= 1, got {cap}")

        self.params = params
        self.layout = BlockLayout(g=g, k=k)
        self.clock = BaseClock(k=k, c0=0, slice_index=start_slice)
        self.theta = float(theta)
        self.cap = cap
        self.logger = logger

        self.last_examined = 0

        self._dtype = counter_dtype(k)
        self._bits = counter_bits(k)
        self._words = words_per_vector(g, self._bits)
        self._frames: list[np.ndarray | None] = [None] * params.frames
        self._weights: dict[tuple[int, int], np.ndarray] = {}

        self._lock = threading.Lock()
        # Neighbouring counters share words, so writes are serialized.
        self._write_lock = threading.Lock()
        self._active_scans = 0

        if preallocate:
            for z in range(params.frames):
                self._allocate(z)


    @classmethod
    def from_settings(
        cls,
        settings: SketchSettings,
        *,
        preallocate: bool = True,
        start_slice: int = 0,
        logger: Logger | None = None,
    ) -> "ATVCube":
        """
        Build a cube from sketch settings.

        Args:
            settings: SketchSettings
            preallocate: Allocate every frame now.
            start_slice: Absolute index of the first slice.
            logger: Optional logger instance. If None, no logs are emitted.

        Returns:
            ATVCube

        Raises:
            InvalidParamsError: when the settings are inconsistent.
        """
        violations = settings.violations()
        if violations:
            raise InvalidParamsError(violations=violations)

        return cls(
            params=settings.rrh_params(),
            g=settings.g,
            k=settings.k,
            theta=settings.theta,
            cap=settings.cap,
            preallocate=preallocate,
            start_slice=start_slice,
            logger=logger,
        )

    # -----------------------------------------------------------------
    # Geometry
    # -----------------------------------------------------------------

    @property
    def g(self) -> int:
        return self.layout.g


    @property
    def k(self) -> int:
        return self.layout.k


    @property
    def vector_count(self) -> int:
        return self.params.columns * self.params.r * self.params.frames


    @property
    def threshold(self) -> float:
        """
        Weight a vector needs to count as a super ATV.
        """
        return threshold_weight(self.theta, self.g)


    @property
    def bits(self) -> int:
        return self._bits


    def memory_bits(self) -> int:
        """
        Size of the fully allocated cube in packed words.
        """
        return self.vector_count * self._words * WORD_BITS


    def resident_bits(self) -> int:
        """
        Size of the frames allocated so far.
        """
        return sum(int(arr.nbytes) * 8 for arr in self._frames if arr is not None)


    def allocated_frames(self) -> list[int]:
        return [z for z, arr in enumerate(self._frames) if arr is not None]


    def frame_words(self, frame: int) -> np.ndarray | None:
        """
        Packed (r, 2^c, W) uint32 words of a frame, None when unallocated.
        """
        return self._frames[frame]


    def frame_storage(self, frame: int) -> np.ndarray | None:
        """
        Decoded copy of a frame's counters shaped (r, 2^c, g), None when unallocated.
        """
        storage = self._frames[frame]
        if storage is None:
            return None
        values = self._decode(storage.reshape(-1, self._words))
        return values.reshape(self.params.r, self.params.columns, self.g).astype(self._dtype)


    def install_frame(self, frame: int, values: np.ndarray) -> None:
        """
        Replace the counters of one frame, e.g. when loading a snapshot.

        Args:
            frame: Frame index.
            values: Array shaped (r, 2^c, g).
        """
        expected = (self.params.r, self.params.columns, self.g)
        if values.shape != expected:
            raise ParameterError(f"frame values must have shape {expected}, got {values.shape}")

        self._require_quiescent()
        words = pack_counters(values.reshape(-1, self.g), self._bits)
        self._frames[frame] = words.reshape(self.params.r, self.params.columns, self._words)
        self._weights.clear()


    def vector(self, x: int, y: int, z: int) -> ATVector:
        """
        Decoded copy of one vector on the cube's clock.

        Touching the copy does not write back to the cube.

        Args:
            x: Column.
            y: Row.
            z: Frame.

        Returns:
            ATVector
        """
        storage = self._frames[z]
        if storage is None:
            return ATVector(self.layout, self.clock)
        values = self._decode(storage[y, x][None, :])[0].astype(self._dtype)
        return ATVector(self.layout, self.clock, values)

    # -----------------------------------------------------------------
    # Open slice
    # -----------------------------------------------------------------

    def scan_pair(self, aip: int, bip: int) -> None:
        """
        Record one pair: touch the peer's counter in each of the host's r vectors.

        Args:
            aip: Monitored host.
            bip: Peer.
        """
        d = digest(aip, self.params)
        index = peer_index(bip, self.g, self.params)

        rows = np.arange(self.params.r, dtype=np.int64)
        vectors = rows * self.params.columns + np.asarray(d.columns, dtype=np.int64)

        with self._scanning():
            frame = self._allocate(d.frame)
            value = self.clock.block_clock(self.layout.block_of(index))
            with self._write_lock:
                scatter_counters(frame.reshape(-1, self._words), vectors, index, value, self._bits)


    def scan_pairs(self, aips: np.ndarray, bips: np.ndarray) -> None:
        """
        Record a batch of pairs of the current slice.

        Writes of the same counter within a slice carry the same value, so
        duplicate targets in one batch (or across concurrent batches) are benign.

        Args:
            aips: Monitored hosts.
            bips: Peers, aligned with ``aips``.
        """
        aips = np.asarray(aips)
        bips = np.asarray(bips)
        if aips.shape != bips.shape:
            raise ParameterError(f"aips {aips.shape} and bips {bips.shape} must align")
        if aips.size == 0:
            return

        frames, columns = digest_array(aips, self.params)
        indices = bh_array(bips, self.g, self.params.bh_seed)

        row_offsets = np.arange(self.params.r, dtype=np.int64)[:, None] * self.params.columns

        with self._scanning():
            values = self.layout.index_clocks(self.clock.c0)[indices]

            for z in np.unique(frames):
                sel = frames == z
                storage = self._allocate(int(z))
                vectors = row_offsets + columns[:, sel]
                with self._write_lock:
                    scatter_counters(
                        storage.reshape(-1, self._words),
                        vectors,
                        indices[sel][None, :],
                        values[sel][None, :],
                        self._bits,
                    )

    # -----------------------------------------------------------------
    # Boundary
    # -----------------------------------------------------------------

    def tick(self) -> int:
        """
        Open the next slice: advance the base clock and maintain the two
        blocks whose new clock is 0 or k in every vector.

        Returns:
            Counters examined.
        """
        self._require_quiescent()
        self.clock.advance()

        examined = 0
        for act in (0, self.k):
            block = self.layout.block_with_clock(self.clock.c0, act)
            span = self.layout.block_indices(block)
            idx = np.arange(span.start, span.stop, dtype=np.int64)[None, :]
            for storage in self._frames:
                if storage is None:
                    continue
                flat = storage.reshape(-1, self._words)
                vectors = np.arange(flat.shape[0], dtype=np.int64)[:, None]
                part = gather_counters(flat, vectors, idx, self._bits)
                kept = preserve_at_array(part, act, self.k)
                changed = kept != part
                if changed.any():
                    rows, cols = np.nonzero(changed)
                    scatter_counters(flat, rows, idx[0, cols], kept[rows, cols], self._bits)
                examined += part.size

        self.last_examined = examined
        self._weights.clear()
        return examined


    def expected_examined(self) -> int:
        """
        Closed-form examination count of the latest tick over allocated frames.
        """
        vectors = len(self.allocated_frames()) * self.params.r * self.params.columns
        return vectors * self.layout.preserved_per_slide(self.clock.c0)


    def frame_weights(self, frame: int, k_prime: int) -> np.ndarray:
        """
        Weight of every vector of a frame.

        Args:
            frame: Frame index.
            k_prime: Query window length.

        Returns:
            Read-only int64 array shaped (r, 2^c).
        """
        self._require_quiescent()
        key = (frame, k_prime)
        cached = self._weights.get(key)
        if cached is not None:
            return cached

        storage = self._frames[frame]
        weights = np.zeros((self.params.r, self.params.columns), dtype=np.int64)

        if storage is not None:
            clocks = self.layout.index_clocks(self.clock.c0)
            for row in range(self.params.r):
                active = check_at_array(self._decode(storage[row]), clocks, self.k, k_prime)
                weights[row] = np.count_nonzero(active, axis=-1)

        weights.setflags(write=False)
        self._weights[key] = weights
        return weights


    def weight(self, x: int, y: int, z: int, k_prime: int) -> int:
        return int(self.frame_weights(z, k_prime)[y, x])


    def super_atvs(self, row: int, frame: int, k_prime: int) -> set[int]:
        """
        Columns of a row whose weight reaches the super ATV threshold.

        Args:
            row: Row index.
            frame: Frame index.
            k_prime: Query window length.

        Returns:
            Column indices.
        """
        weights = self.frame_weights(frame, k_prime)[row]
        return {int(x) for x in np.flatnonzero(weights >= self.threshold)}


    def restore_candidates(self, k_prime: int) -> list[int]:
        """
        Hosts whose r vectors are all super ATVs with consistent duplicate bits.

        Args:
            k_prime: Query window length.

        Returns:
            Candidate hosts, ascending.

        Raises:
            FrameOverflowError: when a frame's candidate product exceeds the cap.
        """
        candidates: set[int] = set()

        for z in self.allocated_frames():
            rows = [self.super_atvs(row, z, k_prime) for row in range(self.params.r)]
            if not all(rows):
                continue

            tuples = math.prod(len(cols) for cols in rows)
            if tuples > self.cap:
                if self.logger is not None:
                    self.logger.bind("restore_candidates").warning(
                        f"detect.overflow | frame: {z}, tuples: {tuples}, cap: {self.cap}"
                    )
                raise FrameOverflowError(frame=z, tuples=tuples, cap=self.cap)

            for lbs in consistent_tuples(rows, self.params):
                candidates.add(restore_ip(lbs, z, self.params))

        return sorted(candidates)


    def nat(self, aip: int, k_prime: int) -> int:
        """
        Counter indices active in all r vectors of a host.

        Args:
            aip: Host.
            k_prime: Query window length.

        Returns:
            NAT(aip)
        """
        self._require_quiescent()
        d = digest(aip, self.params)
        storage = self._frames[d.frame]
        if storage is None:
            return 0

        clocks = self.layout.index_clocks(self.clock.c0)
        rows = self._decode(storage[np.arange(self.params.r), np.asarray(d.columns)])
        active = check_at_array(rows, clocks, self.k, k_prime)
        return int(np.count_nonzero(active.all(axis=0)))


    def row_set_probability(self, row: int, frame: int, k_prime: int) -> float:
        """
        Fraction of active counters over all vectors of one row of a frame.
        """
        weights = self.frame_weights(frame, k_prime)[row]
        return float(weights.sum()) / (self.g * self.params.columns)


    def up(self, frame: int, k_prime: int) -> float:
        """
        Probability that a counter index is active in every row of a frame.
        """
        return math.prod(
            self.row_set_probability(row, frame, k_prime)
            for row in range(self.params.r)
        )


    def estimate_superpoint(self, aip: int, k_prime: int) -> float:
        """
        Cardinality of a host with the false-active bias removed.

        Args:
            aip: Host.
            k_prime: Query window length.

        Returns:
            -g * ln((g - NAT) / (g * (1 - UP))), floored at 0.

        Raises:
            CubeOverloadError: when UP >= 1 - epsilon.
            SaturatedEstimatorError: when NAT == g.
        """
        frame = digest(aip, self.params).frame
        up = self.up(frame, k_prime)
        if up >= 1.0 - UP_EPSILON:
            raise CubeOverloadError(frame=frame, up=up)

        nat = self.nat(aip, k_prime)
        if nat >= self.g:
            raise SaturatedEstimatorError(weight=nat, g=self.g)

        return bias_corrected_estimate(nat, self.g, up)


    def detect(self, k_prime: int) -> list[SuperPointReport]:
        """
        Restore candidates and report those estimated at or above theta.

        Args:
            k_prime: Query window length.

        Returns:
            Reports ordered by host.
        """
        end = self.clock.slice_index
        candidates = self.restore_candidates(k_prime)
        reports: list[SuperPointReport] = []

        for ip in candidates:
            try:
                estimate = self.estimate_superpoint(ip, k_prime)
            except SaturatedEstimatorError:
                reports.append(SuperPointReport(
                    ip=ip,
                    estimate=math.inf,
                    window_end_slice=end,
                    k_prime=k_prime,
                    saturated=True,
                ))
                continue

            if estimate >= self.theta:
                reports.append(SuperPointReport(
                    ip=ip,
                    estimate=estimate,
                    window_end_slice=end,
                    k_prime=k_prime,
                ))

        if self.logger is not None:
            ctx = SliceContext(
                window_end_slice=end,
                k_prime=k_prime,
                candidates=len(candidates),
                reported=len(reports),
            )
            self.logger.bind("detect").info(f"detect.window | {asdict(ctx)}")

        return reports

    # -----------------------------------------------------------------
    # Internal helpers
    # -----------------------------------------------------------------

    def _allocate(self, frame: int) -> np.ndarray:
        storage = self._frames[frame]
        if storage is not None:
            return storage

        with self._lock:
            storage = self._frames[frame]
            if storage is None:
                idle = pack_counters(np.full((1, self.g), init_at(self.k)), self._bits)[0]
                shape = (self.params.r, self.params.columns, self._words)
                storage = np.ascontiguousarray(np.broadcast_to(idle, shape))
                self._frames[frame] = storage
        return storage


    def _decode(self, words: np.ndarray) -> np.ndarray:
        """
        Every counter of (n, W) packed vectors as an (n, g) array.
        """
        vectors = np.arange(words.shape[0], dtype=np.int64)[:, None]
        indices = np.arange(self.g, dtype=np.int64)[None, :]
        return gather_counters(words, vectors, indices, self._bits)


    @contextmanager
    def _scanning(self) -> Iterator[None]:
        with self._lock:
            self._active_scans += 1
            self._weights.clear()
        try:
            yield
        finally:
            with self._lock:
                self._active_scans -= 1


    def _require_quiescent(self) -> None:
        if self._active_scans:
            raise PhaseError(f"{self._active_scans} scan(s) in flight; finish the slice first")
