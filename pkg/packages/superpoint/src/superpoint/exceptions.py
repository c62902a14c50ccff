# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass, field


class SuperPointError(Exception):
    """Base exception for super point detection errors."""


class ParameterError(SuperPointError):
    """Raised when an argument or a parameter set is out of range."""


@dataclass(slots=True)
class InvalidParamsError(ParameterError):
    """
    Raised when a parameter set fails validation.

    Args:
        violations: Every violated attribute, human readable.
    """

    violations: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        return f"InvalidParamsError(violations={self.violations})"


@dataclass(slots=True)
class SaturatedEstimatorError(SuperPointError):
    """
    Raised when every counter of an estimator is active.

    The cardinality is unbounded; callers report ">= capacity".

    Args:
        weight: Active counter count.
        g: Estimator size.
    """

    weight: int
    g: int

    def __str__(self) -> str:
        return f"SaturatedEstimatorError(weight={self.weight}, g={self.g})"


@dataclass(slots=True)
class CubeOverloadError(SuperPointError):
    """
    Raised when the false-active probability of a frame is too close to 1.

    Args:
        frame: Frame index.
        up: Probability that one counter index is active in all rows.
    """

    frame: int
    up: float

    def __str__(self) -> str:
        return f"CubeOverloadError(frame={self.frame}, up={self.up})"


@dataclass(slots=True)
class FrameOverflowError(SuperPointError):
    """
    Raised when the candidate column tuples of a frame exceed the cap.

    Args:
        frame: Frame index.
        tuples: Size of the Cartesian product of super columns.
        cap: Configured cap.
    """

    frame: int
    tuples: int
    cap: int

    def __str__(self) -> str:
        return f"FrameOverflowError(frame={self.frame}, tuples={self.tuples}, cap={self.cap})"


class PhaseError(SuperPointError):
    """Raised when maintenance or a query overlaps in-flight scans."""


@dataclass(slots=True)
class TraceParseError(SuperPointError):
    """
    Raised when a trace line is malformed.

    Args:
        line_no: 1-based line number.
        message: What is wrong with the line.
    """

    line_no: int
    message: str

    def __str__(self) -> str:
        return f"TraceParseError(line_no={self.line_no}, message={self.message})"


@dataclass(slots=True)
class TraceOrderError(SuperPointError):
    """
    Raised when slices go backwards in a trace.

    Args:
        line_no: 1-based line number of the offending event.
        previous: Slice of the previous event.
        current: Slice of the offending event.
    """

    line_no: int
    previous: int
    current: int

    def __str__(self) -> str:
        return (
            f"TraceOrderError(line_no={self.line_no}, previous={self.previous}, "
            f"current={self.current})"
        )


class SpecError(SuperPointError):
    """Raised when a synthetic trace spec is invalid."""


class SnapshotError(SuperPointError):
    """Raised when a cube snapshot cannot be read back."""


class UndefinedMetricsError(SuperPointError):
    """Raised when detection ratios are requested with no true super points."""


class GeneratorNotFoundError(SuperPointError):
    """Raised when a trace generator is not registered."""


@dataclass(slots=True)
class InvalidGeneratorError(SuperPointError):
    """
    Raised when a trace generator cannot be registered.

    Args:
        name: Generator name.
        problems: What is wrong with it.
    """

    name: str
    problems: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        return f"InvalidGeneratorError(name={self.name}, problems={self.problems})"


@dataclass(slots=True)
class ConfigError(SuperPointError):
    """
    Raised when a run configuration is inconsistent.

    Args:
        violations: Every problem found, human readable.
    """

    violations: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        return f"ConfigError(violations={self.violations})"
