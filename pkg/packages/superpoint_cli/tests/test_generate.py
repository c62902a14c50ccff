from __future__ import annotations

import json
from pathlib import Path

import pytest

from superpoint.domain.events import ip_to_int
from superpoint.exceptions import GeneratorNotFoundError, SpecError
from superpoint.oracle import exact_cardinalities, exact_superpoints
from superpoint.traces import GeneratorRegistry, parse_trace, read_header
from superpoint_cli.generate import run_generate


def write_spec(path: Path, **spec) -> Path:
    path.write_text(json.dumps(spec), encoding="utf-8")
    return path


def test_three_planted_hosts(tmp_path: Path) -> None:
    planted = [
        {"ip": "10.5.0.1", "cardinality": 500, "start": 0, "end": 10},
        {"ip": "10.5.0.2", "cardinality": 800, "start": 5, "end": 20},
        {"ip": "10.5.0.3", "cardinality": 300, "start": 20, "end": 25},
    ]
    spec = write_spec(
        tmp_path / "spec.json",
        slices=30,
        seed=4,
        slice_seconds=60,
        planted=planted,
        background={"hosts": 100, "max_degree": 40, "span": 5},
    )
    out = tmp_path / "trace.txt"

    written = run_generate(out, spec=spec, registry=GeneratorRegistry())
    events = list(parse_trace(out))

    assert written == len(events)
    assert read_header(out).slice_seconds == 60
    truth = exact_cardinalities(events, 29, 30)
    assert exact_superpoints(truth, 300) == {ip_to_int(p["ip"]) for p in planted}


def test_span_ending_before_start_is_rejected(tmp_path: Path) -> None:
    spec = write_spec(
        tmp_path / "spec.json",
        slices=10,
        planted=[{"ip": "10.5.0.1", "cardinality": 5, "start": 6, "end": 2}],
    )
    with pytest.raises(SpecError, match="invalid spec"):
        run_generate(tmp_path / "trace.txt", spec=spec, registry=GeneratorRegistry())


def test_boundary_preset_needs_no_spec(tmp_path: Path, recording_logger) -> None:
    out = tmp_path / "boundary.txt"
    run_generate(out, generator="boundary", logger=recording_logger)

    events = list(parse_trace(out))
    host = ip_to_int("10.0.0.1")
    assert exact_cardinalities(events, 609, 300).cardinalities[host] == 1024
    assert exact_cardinalities(events, 599, 300).cardinalities[host] == 512
    assert recording_logger.events() == ["plugins.loaded", "trace.generated"]


def test_synthetic_without_spec(tmp_path: Path) -> None:
    with pytest.raises(SpecError, match="needs a spec file"):
        run_generate(tmp_path / "trace.txt", registry=GeneratorRegistry())


def test_unknown_generator(tmp_path: Path) -> None:
    with pytest.raises(GeneratorNotFoundError):
        run_generate(tmp_path / "trace.txt", generator="pcap", registry=GeneratorRegistry())
