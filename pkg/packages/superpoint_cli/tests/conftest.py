from __future__ import annotations

from pathlib import Path

import pytest

from superpoint.domain.synthetic import BackgroundSpec, PlantedHost, SyntheticSpec
from superpoint.settings import SketchSettings
from superpoint.traces import generate_synthetic, write_trace
from superpoint_cli.settings import RunConfig, load_run_config


PLANTED_IP = "10.0.0.1"

SMALL_SKETCH = {"g": 256, "c": 8, "r": 4, "u": 2, "s": 8, "k": 5, "k_prime": 5, "theta": 60.0, "seed": 7}


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in [*RunConfig.model_fields, *SketchSettings.model_fields]:
        monkeypatch.delenv(f"SUPERPOINT_{name.upper()}", raising=False)


@pytest.fixture
def small_trace(tmp_path: Path) -> Path:
    """30 slices; one host contacts 200 peers over slices 10-14, 50 quiet hosts around it."""
    spec = SyntheticSpec(
        slices=30,
        seed=1,
        planted=[
            PlantedHost(ip=PLANTED_IP, cardinality=200, start=10, end=15),
            # Pin the first and last slices of the trace.
            PlantedHost(ip="10.0.0.2", cardinality=1, start=0, end=1),
            PlantedHost(ip="10.0.0.3", cardinality=1, start=29, end=30),
        ],
        background=BackgroundSpec(hosts=50, max_degree=5, span=3),
    )
    path = tmp_path / "trace.txt"
    write_trace(generate_synthetic(spec), path)
    return path


@pytest.fixture
def small_config(small_trace: Path, tmp_path: Path):
    def build(**overrides) -> RunConfig:
        flags = {
            **SMALL_SKETCH,
            "trace": small_trace,
            "report": tmp_path / "report.csv",
            "log": False,
            **overrides,
        }
        return load_run_config(flags)

    return build


def read_rows(path: Path) -> list[list[str]]:
    return [line.split(",") for line in path.read_text(encoding="utf-8").splitlines()]


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
