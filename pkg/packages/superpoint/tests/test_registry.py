from __future__ import annotations

from dataclasses import dataclass
from importlib.metadata import EntryPoint
from typing import Any

import pytest

from superpoint import plugin_loader
from superpoint.domain.events import PairEvent
from superpoint.domain.synthetic import BoundarySpec, SyntheticSpec
from superpoint.exceptions import GeneratorNotFoundError, InvalidGeneratorError
from superpoint.plugin_loader import GENERATOR_GROUP, load_generator_plugins
from superpoint.traces.registry import GeneratorRegistry, GeneratorSpec, generator_problems


def constant_trace(spec: Any) -> list[PairEvent]:
    return [PairEvent(0, 1, 2)]


@dataclass
class FakeEntryPoint:
    name: str
    target: Any

    def load(self) -> Any:
        if isinstance(self.target, Exception):
            raise self.target
        return self.target


class FakeEntryPoints:
    def __init__(self, eps: list[FakeEntryPoint]) -> None:
        self.eps = eps
        self.groups: list[str] = []

    def select(self, *, group: str) -> list[FakeEntryPoint]:
        self.groups.append(group)
        return self.eps


def test_builtin_generators() -> None:
    registry = GeneratorRegistry()

    assert registry.list_generators() == ["boundary", "synthetic"]
    assert registry.get("synthetic").model is SyntheticSpec
    assert registry.get("boundary").model is BoundarySpec


def test_unknown_generator() -> None:
    with pytest.raises(GeneratorNotFoundError):
        GeneratorRegistry(builtins=False).get("synthetic")


def test_register_replaces_by_name() -> None:
    registry = GeneratorRegistry()
    registry.register(GeneratorSpec("synthetic", SyntheticSpec, constant_trace))

    spec = registry.get("synthetic")
    assert spec.generate(SyntheticSpec(slices=1)) == [PairEvent(0, 1, 2)]


@pytest.mark.parametrize(
    "spec",
    [
        GeneratorSpec("Bad Name", SyntheticSpec, constant_trace),
        GeneratorSpec("plain", dict, constant_trace),
        GeneratorSpec("inert", SyntheticSpec, None),
    ],
)
def test_invalid_generators_are_refused(spec: GeneratorSpec) -> None:
    registry = GeneratorRegistry()

    assert len(generator_problems(spec)) == 1
    with pytest.raises(InvalidGeneratorError) as info:
        registry.register(spec)
    assert info.value.problems == generator_problems(spec)
    assert spec.name not in registry


def register_constant(registry: GeneratorRegistry) -> None:
    registry.register(GeneratorSpec("constant", SyntheticSpec, constant_trace))


def register_shadow(registry: GeneratorRegistry) -> None:
    registry.register(GeneratorSpec("synthetic", SyntheticSpec, constant_trace))


def register_half_valid(registry: GeneratorRegistry) -> None:
    registry.register(GeneratorSpec("alpha", SyntheticSpec, constant_trace))
    registry.register(GeneratorSpec("Beta!", SyntheticSpec, constant_trace))


def test_plugins_register_generators(monkeypatch: pytest.MonkeyPatch, recording_logger) -> None:
    eps = FakeEntryPoints([
        FakeEntryPoint("constant", register_constant),
        EntryPoint(name="missing", value="superpoint_no_such_plugin:register", group=GENERATOR_GROUP),
        FakeEntryPoint("not_callable", 42),
        FakeEntryPoint("shadow", register_shadow),
        FakeEntryPoint("empty", lambda registry: None),
        FakeEntryPoint("half_valid", register_half_valid),
    ])
    monkeypatch.setattr(plugin_loader, "entry_points", lambda: eps)
    registry = GeneratorRegistry()

    result = load_generator_plugins(registry, logger=recording_logger)

    assert eps.groups == [GENERATOR_GROUP]
    assert result.loaded == ["constant"]
    assert result.generators == {"constant": ["constant"]}
    assert set(result.failed) == {"missing", "not_callable", "shadow", "empty", "half_valid"}
    assert "ModuleNotFoundError" in result.failed["missing"]
    assert "already registered: synthetic" in result.failed["shadow"]
    assert "registered no generator" in result.failed["empty"]
    assert "Beta!" in result.failed["half_valid"]

    assert registry.list_generators() == ["boundary", "constant", "synthetic"]
    assert registry.get("synthetic").generate is not constant_trace
    assert registry.get("constant").generate(SyntheticSpec(slices=1)) == [PairEvent(0, 1, 2)]
    assert recording_logger.events() == ["plugins.rejected"] * 5 + ["plugins.loaded"]


def test_plugins_cannot_shadow_each_other(monkeypatch: pytest.MonkeyPatch) -> None:
    eps = FakeEntryPoints([
        FakeEntryPoint("first", register_constant),
        FakeEntryPoint("second", register_constant),
    ])
    monkeypatch.setattr(plugin_loader, "entry_points", lambda: eps)

    result = load_generator_plugins(GeneratorRegistry())

    assert result.loaded == ["first"]
    assert list(result.failed) == ["second"]
