# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
from pydantic import BaseModel

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.domain.events import PairEvent
from superpoint.domain.synthetic import BoundarySpec, SyntheticSpec
from superpoint.exceptions import GeneratorNotFoundError, InvalidGeneratorError
from superpoint.traces.generators import boundary_spanner, generate_synthetic


GenerateFn = Callable[[BaseModel], list[PairEvent]]

_NAME = re.compile(r"[a-z][a-z0-9_-]*")


@dataclass(slots=True)
class GeneratorSpec:
    """
    Trace generator stored in the registry.

    Args:
        name: Generator name.
        model: Trace spec model the generator accepts.
        generate: Builds the events from a validated trace spec.
    """

    name: str
    model: type[BaseModel]
    generate: GenerateFn


def generator_problems(spec: GeneratorSpec) -> list[str]:
    """
    Everything that keeps a generator from being registered.

    Args:
        spec: GeneratorSpec

    Returns:
        Problems, empty when the generator is usable.
    """
    problems: list[str] = []
    if not isinstance(spec.name, str) or not _NAME.fullmatch(spec.name):
        problems.append(f"name must match {_NAME.pattern}, got {spec.name!r}")
    if not (isinstance(spec.model, type) and issubclass(spec.model, BaseModel)):
        problems.append("model must be a pydantic model class")
    if not callable(spec.generate):
        problems.append("generate must be callable")
    return problems


class GeneratorRegistry:
    """
    Registry of trace generators.

    Builtins are registered on construction; others come from plugins.
    """

    def __init__(self, *, builtins: bool = True) -> None:
        self._generators: dict[str, GeneratorSpec] = {}

        if builtins:
            self.register(GeneratorSpec("synthetic", SyntheticSpec, generate_synthetic))
            self.register(GeneratorSpec("boundary", BoundarySpec, boundary_spanner))


    def register(self, spec: GeneratorSpec) -> None:
        """
        Add a generator, replacing any previous one with the same name.

        Raises:
            InvalidGeneratorError
        """
        problems = generator_problems(spec)
        if problems:
            raise InvalidGeneratorError(name=str(spec.name), problems=problems)
        self._generators[spec.name] = spec


    def get(self, name: str) -> GeneratorSpec:
        """
        Get generator spec by name.

        Args:
            name: Generator name.

        Returns:
            GeneratorSpec

        Raises:
            GeneratorNotFoundError
        """
        if name not in self._generators:
            raise GeneratorNotFoundError(f"Generator not registered: {name}")
        return self._generators[name]


    def __contains__(self, name: object) -> bool:
        return name in self._generators


    def list_generators(self) -> list[str]:
        return sorted(self._generators)
