# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class RunContext:
    """
    Structured log context of a CLI run.

    Args:
        command: Subcommand name.
        trace: Input trace path.
        slice_seconds: Trace time of one processed slice.
        preset: Preset the configuration started from.
        k: Window capacity in slices.
        k_prime: Query window length.
        g: Counters per vector.
        theta: Super point threshold.
        cadence: Slices between reported windows.
        workers: Scan threads.
    """

    command: str
    trace: str
    slice_seconds: float
    preset: str
    k: int
    k_prime: int
    g: int
    theta: float
    cadence: int
    workers: int


@dataclass(frozen=True, slots=True)
class TickContext:
    """
    Structured log context of the tick that opened a reported slice.
    """

    slice_index: int
    examined: int
    expected: int
