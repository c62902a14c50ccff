# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.traces.generators import boundary_spanner, distinct_addresses, generate_synthetic
from superpoint.traces.io import (
    coarsen,
    events_to_arrays,
    iter_slices,
    parse_trace,
    read_header,
    write_trace,
)
from superpoint.traces.registry import GeneratorRegistry, GeneratorSpec

__all__ = [
    "GeneratorRegistry",
    "GeneratorSpec",
    "boundary_spanner",
    "coarsen",
    "distinct_addresses",
    "events_to_arrays",
    "generate_synthetic",
    "iter_slices",
    "parse_trace",
    "read_header",
    "write_trace",
]
