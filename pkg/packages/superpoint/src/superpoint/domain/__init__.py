# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.domain.events import PairEvent, TraceHeader, int_to_ip, ip_to_int
from superpoint.domain.reports import DetectionMetrics, MeanMetrics, SuperPointReport, WindowTruth
from superpoint.domain.synthetic import (
    BackgroundSpec,
    BoundarySpec,
    PlantedHost,
    SyntheticSpec,
    load_spec,
)

__all__ = [
    "BackgroundSpec",
    "BoundarySpec",
    "DetectionMetrics",
    "MeanMetrics",
    "PairEvent",
    "PlantedHost",
    "SuperPointReport",
    "SyntheticSpec",
    "TraceHeader",
    "WindowTruth",
    "int_to_ip",
    "ip_to_int",
    "load_spec",
]
