# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass, field

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.domain.events import int_to_ip


@dataclass(frozen=True, slots=True)
class SuperPointReport:
    """
    One host detected at a window end.

    Args:
        ip: Host address, 32-bit int.
        estimate: Estimated cardinality (inf when saturated).
        window_end_slice: Last slice of the window.
        k_prime: Window length in slices.
        saturated: True when the host's counters were all active.
    """

    ip: int
    estimate: float
    window_end_slice: int
    k_prime: int
    saturated: bool = False

    @property
    def ip_text(self) -> str:
        return int_to_ip(self.ip)


@dataclass(frozen=True, slots=True)
class WindowTruth:
    """
    Exact per-host cardinalities over one window.

    Args:
        window_end_slice: Last slice of the window.
        k_prime: Window length in slices.
        cardinalities: host -> number of distinct peers.
    """

    window_end_slice: int
    k_prime: int
    cardinalities: dict[int, int] = field(default_factory=dict)

    def rows(self) -> list[tuple[int, str, int]]:
        """
        CSV rows ``end_slice, ip, exact_count`` ordered by host.

        Returns:
            list of rows
        """
        return [
            (self.window_end_slice, int_to_ip(ip), count)
            for ip, count in sorted(self.cardinalities.items())
        ]


@dataclass(frozen=True, slots=True)
class DetectionMetrics:
    """
    False positive/negative ratios of one detection against the truth.

    Args:
        n: True super points.
        n_plus: Reported hosts that are not super points.
        n_minus: Super points that were not reported.
    """

    n: int
    n_plus: int
    n_minus: int

    @property
    def fpr(self) -> float:
        return self.n_plus / self.n


    @property
    def fnr(self) -> float:
        return self.n_minus / self.n


    @property
    def tfr(self) -> float:
        return self.fpr + self.fnr


@dataclass(frozen=True, slots=True)
class MeanMetrics:
    """
    Detection ratios averaged over the windows where they are defined.

    Args:
        windows: Windows averaged.
        fpr: Mean false positive ratio.
        fnr: Mean false negative ratio.
        tfr: Mean total false ratio.
    """

    windows: int
    fpr: float
    fnr: float
    tfr: float
