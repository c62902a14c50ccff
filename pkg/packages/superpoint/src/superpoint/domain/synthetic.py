# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import json
from ipaddress import IPv4Address
from pathlib import Path
from typing import Literal

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import SpecError


DegreeDistribution = Literal["uniform", "pareto"]


class PlantedHost(BaseModel):
    """
    A host given an exact number of distinct peers within a slice span.

    Args:
        ip: Host address.
        cardinality: Distinct peers contacted within [start, end).
        start: First slice of the span.
        end: Slice after the last one of the span.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    ip: IPv4Address
    cardinality: int = Field(ge=1)
    start: int = Field(ge=0)
    end: int

    @model_validator(mode="after")
    def _span(self) -> "PlantedHost":
        if self.end <= self.start:
            raise ValueError(f"span end {self.end} must be after start {self.start}")
        return self


class BackgroundSpec(BaseModel):
    """
    Low-cardinality hosts filling the trace.

    Args:
        hosts: Number of background hosts.
        min_degree: Smallest distinct-peer count per host.
        max_degree: Largest distinct-peer count per host.
        distribution: Degree distribution, "uniform" or "pareto" (capped).
        pareto_shape: Tail index of the pareto distribution.
        span: Slices over which one host spreads its peers.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    hosts: int = Field(default=0, ge=0)
    min_degree: int = Field(default=1, ge=1)
    max_degree: int = Field(default=100, ge=1)
    distribution: DegreeDistribution = "uniform"
    pareto_shape: float = Field(default=1.5, gt=0)
    span: int = Field(default=50, ge=1)

    @model_validator(mode="after")
    def _degrees(self) -> "BackgroundSpec":
        if self.max_degree < self.min_degree:
            raise ValueError(
                f"max_degree {self.max_degree} must be >= min_degree {self.min_degree}"
            )
        return self


class SyntheticSpec(BaseModel):
    """
    Synthetic trace with planted super points.

    Args:
        slices: Number of slices in the trace.
        seed: Master seed.
        slice_seconds: Slice duration written to the header.
        repeat_rate: Extra events re-contacting already seen peers, as a fraction.
        background: Background host population.
        planted: Planted hosts.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    slices: int = Field(ge=1)
    seed: int = 0
    slice_seconds: float = Field(default=1.0, gt=0)
    repeat_rate: float = Field(default=0.0, ge=0.0, lt=1.0)
    background: BackgroundSpec = BackgroundSpec()
    planted: list[PlantedHost] = Field(default_factory=list)

    @model_validator(mode="after")
    def _spans_fit(self) -> "SyntheticSpec":
        for host in self.planted:
            if host.end > self.slices:
                raise ValueError(
                    f"planted host {host.ip} ends at {host.end} beyond {self.slices} slices"
                )
        return self


class BoundarySpec(BaseModel):
    """
    A host whose peers straddle one slice boundary.

    Peers are split in two bursts of ``burst`` slices on each side of
    ``boundary``, ``per_side`` fresh peers per burst.

    Args:
        ip: Host address.
        boundary: First slice of the second half.
        burst: Slices per half.
        per_side: Distinct peers per half.
        slices: Number of slices in the trace.
        seed: Master seed.
        slice_seconds: Slice duration written to the header.
        background: Optional background population.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    ip: IPv4Address = IPv4Address("10.0.0.1")
    boundary: int = Field(default=600, ge=1)
    burst: int = Field(default=10, ge=1)
    per_side: int = Field(default=512, ge=1)
    slices: int = Field(default=1200, ge=1)
    seed: int = 0
    slice_seconds: float = Field(default=1.0, gt=0)
    background: BackgroundSpec = BackgroundSpec()

    @model_validator(mode="after")
    def _bursts_fit(self) -> "BoundarySpec":
        if self.boundary - self.burst < 0 or self.boundary + self.burst > self.slices:
            raise ValueError(
                f"bursts [{self.boundary - self.burst}, {self.boundary + self.burst}) "
                f"must fit in [0, {self.slices})"
            )
        return self


def load_spec(path: str | Path, model: type[BaseModel] = SyntheticSpec) -> BaseModel:
    """
    Read a JSON trace spec file.

    Args:
        path: JSON file.
        model: Trace spec model to validate against.

    Returns:
        The validated model.

    Raises:
        SpecError: when the file is unreadable or invalid.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return model.model_validate(raw)
    except (OSError, json.JSONDecodeError) as e:
        raise SpecError(f"cannot read spec {path}: {e}") from e
    except ValidationError as e:
        raise SpecError(f"invalid spec {path}: {e}") from e
