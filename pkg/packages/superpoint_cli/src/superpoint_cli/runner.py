"""
Detection and benchmark runs over a trace file.

Per slice: open the slice (ticking the cube), scan its events, then, at a
reporting boundary, query the window that ends with it.
"""
# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Iterator

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np
from logger.logger import Logger

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint import SlidingDetector
from superpoint.domain.reports import MeanMetrics, WindowTruth
from superpoint.oracle import (
    SlidingOracle,
    exact_superpoints,
    mean_metrics,
    metrics,
    write_truth_csv,
)
from superpoint.snapshot import save_snapshot
from superpoint.traces import coarsen, events_to_arrays, iter_slices, parse_trace, read_header
from superpoint_cli.context import RunContext, TickContext
from superpoint_cli.lifecycle import OutputManager, lifespan
from superpoint_cli.settings import RunConfig


REPORT_HEADER = ("window_end_slice", "ip", "estimate")
METRICS_HEADER = ("window_end_slice", "fpr", "fnr", "tfr")
BENCH_HEADER = (
    "slice",
    "events",
    "tick_seconds",
    "examined",
    "expected_examined",
    "scan_seconds",
    "events_per_second",
    "detect_seconds",
)


@dataclass(frozen=True, slots=True)
class DetectSummary:
    """
    Outcome of a detection run.

    Args:
        slices: Slices processed, empty ones included.
        windows: Windows queried.
        reported: Report rows written.
        mean: Mean detection ratios (None without oracle or true super points).
        mean_relative_error: Mean |estimate - exact| / exact over reported true
            super points (None when there is none).
    """

    slices: int
    windows: int
    reported: int
    mean: MeanMetrics | None = None
    mean_relative_error: float | None = None


@dataclass(frozen=True, slots=True)
class BenchSummary:
    """
    Outcome of a benchmark run.

    Args:
        slices: Slices processed.
        events: Events scanned.
        ticks: Ticks instrumented.
        mismatched_ticks: Ticks whose examination count differs from the closed form.
        slice_seconds: Trace time covered by one processed slice.
        tick_seconds: Total tick time.
        scan_seconds: Total scan time.
        detect_seconds: Total query time.
    """

    slices: int
    events: int
    ticks: int
    mismatched_ticks: int
    slice_seconds: float
    tick_seconds: float
    scan_seconds: float
    detect_seconds: float

    @property
    def events_per_second(self) -> float:
        return self.events / self.scan_seconds if self.scan_seconds > 0 else 0.0

    @property
    def realtime_ratio(self) -> float:
        """
        Trace time processed per second of work; above 1 keeps up with live traffic.
        """
        busy = self.tick_seconds + self.scan_seconds + self.detect_seconds
        return self.slices * self.slice_seconds / busy if busy > 0 else math.inf


def format_estimate(estimate: float) -> str:
    return "inf" if math.isinf(estimate) else f"{estimate:.3f}"


def run_detect(config: RunConfig, *, logger: Logger | None = None) -> DetectSummary:
    """
    Slide a window over the trace and report super points at every reporting boundary.

    Writes the report CSV and, with the oracle enabled, the metrics and truth CSVs.
    Windows without a true super point get empty metric fields.

    Args:
        config: RunConfig with ``trace`` and ``report`` set.
        logger: Optional logger instance.

    Returns:
        DetectSummary

    Raises:
        ConfigError: invalid configuration.
        TraceParseError, TraceOrderError: bad trace.
        FrameOverflowError: candidate explosion in a frame.
    """
    config.require("trace", "report")
    settings = config.sketch
    k_prime = settings.k_prime
    _log_start("detect", config, logger)

    oracle = SlidingOracle(k_prime) if config.oracle else None
    truths: list[WindowTruth] = []
    scored = []
    errors: list[float] = []
    slices = windows = reported = 0
    detector: SlidingDetector | None = None

    with lifespan(OutputManager()) as outputs:
        report_out = outputs.open("report", config.report, REPORT_HEADER)
        metrics_out = outputs.open("metrics", config.metrics, METRICS_HEADER) if config.metrics else None

        try:
            for idx, aips, bips in _slices(config):
                if detector is None:
                    detector = SlidingDetector.from_settings(
                        settings, start_slice=idx, workers=config.workers, logger=logger,
                    )
                examined = detector.open_slice(idx)
                detector.scan(aips, bips)
                slices += 1
                if oracle is not None:
                    oracle.add_slice(idx, zip(aips.tolist(), bips.tolist()))

                if not _reporting(idx, detector, config):
                    continue

                if logger is not None:
                    ctx = TickContext(idx, examined, detector.cube.expected_examined())
                    logger.bind("run_detect").info(f"cube.tick | {asdict(ctx)}")

                reports = detector.detect()
                windows += 1
                for rep in reports:
                    report_out.write((idx, rep.ip_text, format_estimate(rep.estimate)))
                reported += len(reports)

                if oracle is None:
                    continue

                truth = oracle.truth()
                supers = exact_superpoints(truth, settings.theta)
                for rep in reports:
                    exact = truth.cardinalities.get(rep.ip)
                    if rep.ip in supers and not rep.saturated:
                        errors.append(abs(rep.estimate - exact) / exact)

                if config.truth is not None:
                    truths.append(WindowTruth(idx, k_prime, {ip: truth.cardinalities[ip] for ip in supers}))

                if metrics_out is not None:
                    if supers:
                        m = metrics({rep.ip for rep in reports}, supers)
                        scored.append(m)
                        metrics_out.write((idx, f"{m.fpr:.6f}", f"{m.fnr:.6f}", f"{m.tfr:.6f}"))
                    else:
                        metrics_out.write((idx, "", "", ""))

            if config.truth is not None:
                write_truth_csv(truths, config.truth)
            if config.snapshot is not None and detector is not None:
                save_snapshot(detector.cube, config.snapshot, logger=logger)
        finally:
            if detector is not None:
                detector.close()

    summary = DetectSummary(
        slices=slices,
        windows=windows,
        reported=reported,
        mean=mean_metrics(scored) if scored else None,
        mean_relative_error=float(np.mean(errors)) if errors else None,
    )
    if logger is not None:
        logger.bind("run_detect").info(f"run.done | {asdict(summary)}")
    return summary


def run_bench(config: RunConfig, *, logger: Logger | None = None) -> BenchSummary:
    """
    Time every slice of a detection run.

    One CSV row per slice: tick time and examined counters (with the closed
    form next to it), scan time and throughput, and query latency at
    reporting boundaries (empty elsewhere).

    Args:
        config: RunConfig with ``trace`` and ``bench`` set.
        logger: Optional logger instance.

    Returns:
        BenchSummary
    """
    config.require("trace", "bench")
    settings = config.sketch
    slice_seconds = _log_start("bench", config, logger)

    slices = events = ticks = mismatched = 0
    tick_total = scan_total = detect_total = 0.0
    detector: SlidingDetector | None = None

    with lifespan(OutputManager()) as outputs:
        bench_out = outputs.open("bench", config.bench, BENCH_HEADER)

        try:
            for idx, aips, bips in _slices(config):
                if detector is None:
                    detector = SlidingDetector.from_settings(
                        settings, start_slice=idx, workers=config.workers, logger=logger,
                    )

                ticked = idx > detector.current_slice
                t0 = time.perf_counter()
                examined = detector.open_slice(idx)
                t1 = time.perf_counter()
                expected = detector.cube.expected_examined() if ticked else 0
                if ticked:
                    ticks += 1
                    mismatched += examined != expected

                n = detector.scan(aips, bips)
                t2 = time.perf_counter()
                scan_seconds = t2 - t1
                throughput = n / scan_seconds if n and scan_seconds > 0 else 0.0

                detect_cell = ""
                if _reporting(idx, detector, config):
                    t3 = time.perf_counter()
                    detector.detect()
                    latency = time.perf_counter() - t3
                    detect_total += latency
                    detect_cell = f"{latency:.6f}"

                bench_out.write((
                    idx,
                    n,
                    f"{t1 - t0:.6f}",
                    examined,
                    expected,
                    f"{scan_seconds:.6f}",
                    f"{throughput:.1f}",
                    detect_cell,
                ))
                slices += 1
                events += n
                tick_total += t1 - t0
                scan_total += scan_seconds
        finally:
            if detector is not None:
                detector.close()

    summary = BenchSummary(
        slices=slices,
        events=events,
        ticks=ticks,
        mismatched_ticks=mismatched,
        slice_seconds=slice_seconds,
        tick_seconds=tick_total,
        scan_seconds=scan_total,
        detect_seconds=detect_total,
    )
    if logger is not None:
        logger.bind("run_bench").info(f"run.done | {asdict(summary)}")
    return summary

# ---------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------

def _slices(config: RunConfig) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    events = parse_trace(config.trace)
    if config.coarsen > 1:
        events = coarsen(events, config.coarsen)

    for idx, batch in iter_slices(events):
        aips, bips = events_to_arrays(batch)
        yield idx, aips, bips


def _reporting(idx: int, detector: SlidingDetector, config: RunConfig) -> bool:
    anchor = detector.first_slice
    if config.full_windows_only:
        anchor += config.sketch.k_prime - 1
    return idx >= anchor and (idx - anchor) % config.cadence == 0


def _log_start(command: str, config: RunConfig, logger: Logger | None) -> float:
    """
    Log the run settings; returns the trace time of one processed slice.
    """
    slice_seconds = read_header(config.trace).slice_seconds * config.coarsen
    if logger is None:
        return slice_seconds
    ctx = RunContext(
        command=command,
        trace=str(config.trace),
        slice_seconds=slice_seconds,
        preset=config.preset,
        k=config.sketch.k,
        k_prime=config.sketch.k_prime,
        g=config.sketch.g,
        theta=config.sketch.theta,
        cadence=config.cadence,
        workers=config.workers,
    )
    logger.bind(f"run_{command}").info(f"run.start | {asdict(ctx)}")
    return slice_seconds
