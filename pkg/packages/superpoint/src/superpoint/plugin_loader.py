"""
Trace generator plugins.

A plugin is an entry point in the ``superpoint.generators`` group that
resolves to ``register(registry: GeneratorRegistry) -> None``. It registers
into a staging registry first; its generators reach the caller's registry
only when every one of them is valid and none shadows a generator that is
already there. A plugin that fails any check contributes nothing.
"""
# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass, field
from importlib.metadata import EntryPoint, entry_points

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
from logger.logger import Logger

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import InvalidGeneratorError
from superpoint.traces.registry import GeneratorRegistry, GeneratorSpec


GENERATOR_GROUP = "superpoint.generators"


@dataclass(frozen=True)
class PluginLoadResult:
    """
    Outcome of loading generator plugins.

    Args:
        generators: Generator names contributed by each accepted plugin.
        failed: Rejected plugins with the reason.
    """

    generators: dict[str, list[str]] = field(default_factory=dict)
    failed: dict[str, str] = field(default_factory=dict)

    @property
    def loaded(self) -> list[str]:
        return list(self.generators)


def stage_plugin(ep: EntryPoint, registry: GeneratorRegistry) -> list[GeneratorSpec]:
    """
    Run one plugin against a staging registry and check what it registered.

    Args:
        ep: Entry point of the plugin.
        registry: Registry the generators are meant for; only read here.

    Returns:
        The plugin's generators, ready to merge.

    Raises:
        InvalidGeneratorError: the plugin registered nothing, an invalid
            generator, or one whose name is already taken.
    """
    register = ep.load()
    if not callable(register):
        raise InvalidGeneratorError(name=ep.name, problems=["entrypoint is not callable"])

    staging = GeneratorRegistry(builtins=False)
    register(staging)

    staged = [staging.get(name) for name in staging.list_generators()]
    if not staged:
        raise InvalidGeneratorError(name=ep.name, problems=["registered no generator"])

    taken = [spec.name for spec in staged if spec.name in registry]
    if taken:
        raise InvalidGeneratorError(name=ep.name, problems=[f"already registered: {', '.join(taken)}"])
    return staged


def load_generator_plugins(
    registry: GeneratorRegistry,
    *,
    logger: Logger | None = None,
) -> PluginLoadResult:
    """
    Load trace generator plugins from entrypoints into ``registry``.

    Args:
        registry: GeneratorRegistry
        logger: Optional logger instance.

    Returns:
        PluginLoadResult
    """
    generators: dict[str, list[str]] = {}
    failed: dict[str, str] = {}

    for ep in entry_points().select(group=GENERATOR_GROUP):
        try:
            staged = stage_plugin(ep, registry)
        except Exception as e:
            failed[ep.name] = str(e) if isinstance(e, InvalidGeneratorError) else repr(e)
            if logger is not None:
                logger.bind("load_generator_plugins").warning(
                    f"plugins.rejected | plugin: {ep.name}, reason: {failed[ep.name]}"
                )
            continue

        for spec in staged:
            registry.register(spec)
        generators[ep.name] = [spec.name for spec in staged]

    if logger is not None:
        logger.bind("load_generator_plugins").info(
            f"plugins.loaded | generators: {generators}, failed: {sorted(failed)}"
        )
    return PluginLoadResult(generators=generators, failed=failed)
