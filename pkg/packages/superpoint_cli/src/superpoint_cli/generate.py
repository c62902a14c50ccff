# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from pathlib import Path

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
from logger.logger import Logger
from pydantic import ValidationError

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.domain.synthetic import load_spec
from superpoint.exceptions import SpecError
from superpoint.plugin_loader import load_generator_plugins
from superpoint.traces import GeneratorRegistry, write_trace


def run_generate(
    out: str | Path,
    *,
    spec: str | Path | None = None,
    generator: str = "synthetic",
    registry: GeneratorRegistry | None = None,
    logger: Logger | None = None,
) -> int:
    """
    Generate a trace file from a JSON trace spec.

    Args:
        out: Output trace file.
        spec: JSON trace spec; generators whose model has all-default
            fields (e.g. "boundary") may omit it.
        generator: Registered generator name.
        registry: Generator registry; plugins are loaded into a fresh one when None.
        logger: Optional logger instance.

    Returns:
        Events written.

    Raises:
        GeneratorNotFoundError: unknown generator.
        SpecError: invalid or missing trace spec.
    """
    if registry is None:
        registry = GeneratorRegistry()
        load_generator_plugins(registry, logger=logger)

    entry = registry.get(generator)

    if spec is not None:
        model = load_spec(spec, entry.model)
    else:
        try:
            model = entry.model()
        except ValidationError as e:
            raise SpecError(f"generator {generator!r} needs a spec file: {e}") from e

    events = entry.generate(model)
    slice_seconds = getattr(model, "slice_seconds", 1.0)
    written = write_trace(events, out, slice_seconds=slice_seconds)

    if logger is not None:
        logger.bind("run_generate").info(
            f"trace.generated | generator: {generator}, path: {out}, events: {written}"
        )
    return written
