# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class SliceContext:
    """
    Structured log context of one window query.

    Args:
        window_end_slice: Last slice of the window.
        k_prime: Window length in slices.
        candidates: Restored candidate hosts.
        reported: Hosts reported at or above the threshold.
    """

    window_end_slice: int
    k_prime: int
    candidates: int = 0
    reported: int = 0
