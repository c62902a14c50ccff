"""
Exact reference counts over sliding windows.

Nothing here touches the sketch hashing; counts come from explicit peer sets.
"""
# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import csv
from collections import defaultdict, deque
from pathlib import Path
from typing import Iterable

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.domain.events import PairEvent
from superpoint.domain.reports import DetectionMetrics, MeanMetrics, WindowTruth
from superpoint.exceptions import ParameterError, UndefinedMetricsError


TRUTH_HEADER = ("end_slice", "ip", "exact_count")


def window_start(end_slice: int, k_prime: int) -> int:
    return end_slice - k_prime + 1


def exact_cardinalities(
    trace: Iterable[PairEvent],
    end_slice: int,
    k_prime: int,
) -> WindowTruth:
    """
    Distinct peers of every host over slices end-k'+1 .. end.

    Args:
        trace: Events sorted by slice.
        end_slice: Last slice of the window.
        k_prime: Window length, >= 1.

    Returns:
        WindowTruth
    """
    if k_prime < 1:
        raise ParameterError(f"k_prime must be >= 1, got {k_prime}")

    start = window_start(end_slice, k_prime)
    peers: dict[int, set[int]] = defaultdict(set)

    for event in trace:
        if event.slice > end_slice:
            break
        if event.slice >= start:
            peers[event.aip].add(event.bip)

    return WindowTruth(
        window_end_slice=end_slice,
        k_prime=k_prime,
        cardinalities={ip: len(seen) for ip, seen in peers.items()},
    )


def exact_superpoints(truth: WindowTruth, theta: float) -> set[int]:
    """
    Hosts with at least ``theta`` distinct peers.
    """
    return {ip for ip, count in truth.cardinalities.items() if count >= theta}


def metrics(detected: Iterable[int], truth_supers: Iterable[int]) -> DetectionMetrics:
    """
    False positive and false negative counts of a detection.

    Args:
        detected: Reported hosts.
        truth_supers: Exact super points.

    Returns:
        DetectionMetrics

    Raises:
        UndefinedMetricsError: when there is no true super point.
    """
    detected = set(detected)
    truth = set(truth_supers)
    if not truth:
        raise UndefinedMetricsError("no true super point in the window; ratios are undefined")

    return DetectionMetrics(
        n=len(truth),
        n_plus=len(detected - truth),
        n_minus=len(truth - detected),
    )


def mean_metrics(results: Iterable[DetectionMetrics]) -> MeanMetrics:
    """
    Average detection ratios over windows.

    Args:
        results: One DetectionMetrics per window with N > 0.

    Returns:
        MeanMetrics

    Raises:
        UndefinedMetricsError: when ``results`` is empty.
    """
    rows = np.array([(m.fpr, m.fnr, m.tfr) for m in results], dtype=np.float64)
    if rows.size == 0:
        raise UndefinedMetricsError("no window with a true super point to average")

    fpr, fnr, tfr = rows.mean(axis=0)
    return MeanMetrics(windows=len(rows), fpr=float(fpr), fnr=float(fnr), tfr=float(tfr))


def sort_unique_cardinalities(
    trace: Iterable[PairEvent],
    end_slice: int,
    k_prime: int,
) -> dict[int, int]:
    """
    Recount window cardinalities with a sort-and-unique pass.

    Args:
        trace: Events.
        end_slice: Last slice of the window.
        k_prime: Window length.

    Returns:
        host -> distinct peer count
    """
    start = window_start(end_slice, k_prime)
    pairs = np.array(
        [(e.aip, e.bip) for e in trace if start <= e.slice <= end_slice],
        dtype=np.uint64,
    ).reshape(-1, 2)
    if pairs.size == 0:
        return {}

    keys = np.unique((pairs[:, 0] << np.uint64(32)) | pairs[:, 1])
    hosts, counts = np.unique(keys >> np.uint64(32), return_counts=True)
    return {int(h): int(n) for h, n in zip(hosts, counts)}


class SlidingOracle:
    """
    Incremental window truth for sweeping every window end of a trace.

    Slices are fed in increasing order; each pair keeps the last slice it was
    seen in and is dropped once that slice leaves the window.
    """

    def __init__(self, k_prime: int) -> None:
        if k_prime < 1:
            raise ParameterError(f"k_prime must be >= 1, got {k_prime}")

        self.k_prime = k_prime
        self.end_slice: int | None = None

        self._last_seen: dict[tuple[int, int], int] = {}
        self._counts: dict[int, int] = defaultdict(int)
        self._slices: deque[tuple[int, list[tuple[int, int]]]] = deque()


    def add_slice(self, slice_index: int, pairs: Iterable[tuple[int, int]]) -> None:
        """
        Advance the window to end at ``slice_index``.

        Args:
            slice_index: New window end, greater than the previous one.
            pairs: (aip, bip) pairs of that slice.
        """
        if self.end_slice is not None and slice_index <= self.end_slice:
            raise ParameterError(
                f"slices must increase, got {slice_index} after {self.end_slice}"
            )
        self.end_slice = slice_index
        self._expire(window_start(slice_index, self.k_prime))

        batch: list[tuple[int, int]] = []
        for aip, bip in pairs:
            key = (aip, bip)
            if key not in self._last_seen:
                self._counts[aip] += 1
            self._last_seen[key] = slice_index
            batch.append(key)

        self._slices.append((slice_index, batch))


    def truth(self) -> WindowTruth:
        """
        Exact cardinalities of the window ending at the latest slice.
        """
        if self.end_slice is None:
            raise ParameterError("no slice added yet")

        return WindowTruth(
            window_end_slice=self.end_slice,
            k_prime=self.k_prime,
            cardinalities={ip: n for ip, n in self._counts.items() if n > 0},
        )


    def _expire(self, start: int) -> None:
        while self._slices and self._slices[0][0] < start:
            old_slice, batch = self._slices.popleft()
            for key in batch:
                if self._last_seen.get(key) == old_slice:
                    del self._last_seen[key]
                    aip = key[0]
                    self._counts[aip] -= 1
                    if self._counts[aip] == 0:
                        del self._counts[aip]


def write_truth_csv(truths: Iterable[WindowTruth], path: str | Path) -> int:
    """
    Write window truths as ``end_slice,ip,exact_count`` rows.

    Args:
        truths: Window truths in output order.
        path: CSV file.

    Returns:
        Rows written, header excluded.
    """
    written = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRUTH_HEADER)
        for truth in truths:
            for row in truth.rows():
                writer.writerow(row)
                written += 1
    return written
