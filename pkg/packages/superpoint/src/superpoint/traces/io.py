"""
Trace text format.

One event per line, ``slice,aip,bip`` with dotted-quad addresses. Lines starting
with ``#`` are comments; a leading ``# slice_seconds=N`` comment carries the
slice duration.
"""
# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, TextIO

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.domain.events import PairEvent, TraceHeader, ip_to_int
from superpoint.exceptions import ParameterError, TraceOrderError, TraceParseError


HEADER_KEY = "slice_seconds"

TraceSource = str | Path | Iterable[str]


def _lines(source: TraceSource) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        try:
            fh = open(source, "rb")
        except OSError as e:
            raise TraceParseError(line_no=0, message=f"cannot read {source}: {e.strerror}") from e
        with fh:
            for line_no, raw in enumerate(fh, start=1):
                try:
                    yield raw.decode("utf-8")
                except UnicodeDecodeError as e:
                    raise TraceParseError(line_no=line_no, message=f"not valid UTF-8 at byte {e.start}") from e
    else:
        yield from source


def parse_event(line: str, line_no: int) -> PairEvent:
    """
    Parse one ``slice,aip,bip`` line.

    Raises:
        TraceParseError
    """
    fields = [f.strip() for f in line.split(",")]
    if len(fields) != 3:
        raise TraceParseError(line_no=line_no, message=f"expected 3 fields, got {len(fields)}")

    raw_slice, raw_aip, raw_bip = fields
    if not (raw_slice.isascii() and raw_slice.isdigit()):
        raise TraceParseError(line_no=line_no, message=f"slice must be a non-negative integer: {raw_slice!r}")

    try:
        aip = ip_to_int(raw_aip)
        bip = ip_to_int(raw_bip)
    except ValueError as e:
        raise TraceParseError(line_no=line_no, message=str(e)) from e

    return PairEvent(slice=int(raw_slice), aip=aip, bip=bip)


def parse_trace(source: TraceSource) -> Iterator[PairEvent]:
    """
    Stream events from a trace.

    Args:
        source: Path or iterable of lines.

    Yields:
        PairEvent in file order.

    Raises:
        TraceParseError: malformed line.
        TraceOrderError: slice lower than the previous event's.
    """
    previous: int | None = None

    for line_no, line in enumerate(_lines(source), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue

        event = parse_event(text, line_no)
        if previous is not None and event.slice < previous:
            raise TraceOrderError(line_no=line_no, previous=previous, current=event.slice)

        previous = event.slice
        yield event


def read_header(source: TraceSource) -> TraceHeader:
    """
    Metadata from the leading comment lines of a trace.

    Args:
        source: Path or iterable of lines.

    Returns:
        TraceHeader (defaults when absent)
    """
    for line_no, line in enumerate(_lines(source), start=1):
        text = line.strip()
        if not text:
            continue
        if not text.startswith("#"):
            break

        key, sep, value = text.lstrip("#").partition("=")
        if sep and key.strip() == HEADER_KEY:
            try:
                seconds = float(value)
            except ValueError as e:
                raise TraceParseError(line_no=line_no, message=f"bad {HEADER_KEY}: {value.strip()!r}") from e
            if seconds <= 0:
                raise TraceParseError(line_no=line_no, message=f"{HEADER_KEY} must be > 0")
            return TraceHeader(slice_seconds=seconds)

    return TraceHeader()


def write_trace(
    events: Iterable[PairEvent],
    path: str | Path | TextIO,
    slice_seconds: float = 1.0,
) -> int:
    """
    Write events in the trace format.

    Args:
        events: Events in slice order.
        path: Output path or open text stream.
        slice_seconds: Slice duration for the header.

    Returns:
        Events written.
    """
    if isinstance(path, (str, Path)):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            return write_trace(events, fh, slice_seconds)

    path.write(f"# {HEADER_KEY}={slice_seconds:g}\n")
    written = 0
    for event in events:
        path.write(event.to_line() + "\n")
        written += 1
    return written


def iter_slices(
    events: Iterable[PairEvent],
    start: int | None = None,
    end: int | None = None,
) -> Iterator[tuple[int, list[PairEvent]]]:
    """
    Group events by slice, yielding every slice in the range, empty ones included.

    Args:
        events: Events in slice order.
        start: First slice to yield (defaults to the first event's slice, or 0).
        end: Last slice to yield (defaults to the last event's slice).

    Yields:
        (slice, events of that slice)
    """
    current = start
    bucket: list[PairEvent] = []

    for event in events:
        if current is None:
            current = event.slice
        if event.slice < current:
            raise ParameterError(f"event slice {event.slice} before start {current}")

        while event.slice > current:
            yield current, bucket
            bucket = []
            current += 1
        bucket.append(event)

    if current is None:
        if end is None:
            return
        current = 0

    if bucket:
        yield current, bucket
        current += 1

    if end is not None:
        while current <= end:
            yield current, []
            current += 1


def coarsen(events: Iterable[PairEvent], factor: int) -> Iterator[PairEvent]:
    """
    Merge every ``factor`` slices into one.

    Args:
        events: Events.
        factor: Slices per coarse slice, >= 1.

    Yields:
        PairEvent with slice // factor.
    """
    if factor < 1:
        raise ParameterError(f"coarsen factor must be >= 1, got {factor}")

    for event in events:
        yield PairEvent(slice=event.slice // factor, aip=event.aip, bip=event.bip)


def events_to_arrays(events: Iterable[PairEvent]) -> tuple[np.ndarray, np.ndarray]:
    """
    Host and peer columns of a batch.

    Returns:
        (aips, bips) as uint32 arrays.
    """
    pairs = np.array([(e.aip, e.bip) for e in events], dtype=np.uint32).reshape(-1, 2)
    return pairs[:, 0], pairs[:, 1]
