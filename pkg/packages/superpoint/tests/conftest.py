from __future__ import annotations

import numpy as np
import pytest

from superpoint.rrh import RRHParams
from superpoint.settings import SketchSettings


@pytest.fixture
def desk_settings() -> SketchSettings:
    return SketchSettings(g=1024, c=10, r=4, u=2, s=7, k=300, k_prime=300, theta=1024.0, seed=1)


@pytest.fixture
def desk_params(desk_settings: SketchSettings) -> RRHParams:
    return desk_settings.rrh_params()


@pytest.fixture
def small_settings() -> SketchSettings:
    """Small cube: 256 columns, 4 rows, 4 frames, k=5."""
    return SketchSettings(g=64, c=8, r=4, u=2, s=8, k=5, k_prime=5, theta=40.0, seed=7)


@pytest.fixture
def small_params(small_settings: SketchSettings) -> RRHParams:
    return small_settings.rrh_params()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


class RecordingLogger:
    """Stands in for ``logger.logger.Logger``; keeps (operation, level, message)."""

    def __init__(self) -> None:
        self.records: list[tuple[str, str, str]] = []
        self._op = ""

    def bind(self, op: str) -> "RecordingLogger":
        self._op = op
        return self

    def info(self, message: str) -> None:
        self.records.append((self._op, "info", message))

    def warning(self, message: str) -> None:
        self.records.append((self._op, "warning", message))

    def events(self) -> list[str]:
        return [message.split(" | ")[0] for _, _, message in self.records]


@pytest.fixture
def recording_logger() -> RecordingLogger:
    return RecordingLogger()
