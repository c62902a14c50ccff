# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import ipaddress
from dataclasses import dataclass


def ip_to_int(text: str) -> int:
    """
    Dotted quad to a 32-bit int.

    Args:
        text: e.g. "10.0.0.1"

    Returns:
        int

    Raises:
        ValueError: when the text is not an IPv4 address.
    """
    return int(ipaddress.IPv4Address(text.strip()))


def int_to_ip(value: int) -> str:
    """
    32-bit int to a dotted quad.
    """
    return str(ipaddress.IPv4Address(value))


@dataclass(frozen=True, slots=True)
class PairEvent:
    """
    One observed communication between a monitored host and a peer.

    Args:
        slice: Absolute slice index.
        aip: Monitored-side host, 32-bit int.
        bip: Opposite host, 32-bit int.
    """

    slice: int
    aip: int
    bip: int

    def to_line(self) -> str:
        """
        Render in the trace format ``slice,aip,bip``.

        Returns:
            str
        """
        return f"{self.slice},{int_to_ip(self.aip)},{int_to_ip(self.bip)}"


@dataclass(frozen=True, slots=True)
class TraceHeader:
    """
    Metadata carried in trace comment lines.

    Args:
        slice_seconds: Duration of one slice.
    """

    slice_seconds: float = 1.0
