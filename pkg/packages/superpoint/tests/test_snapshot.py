from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from superpoint.cube import ATVCube
from superpoint.exceptions import SnapshotError
from superpoint.settings import SketchSettings
from superpoint.snapshot import HEADER_SIZE, MAGIC, load_snapshot, save_snapshot


def busy_cube(settings: SketchSettings, *, preallocate: bool = True) -> ATVCube:
    cube = ATVCube.from_settings(settings, preallocate=preallocate, start_slice=40)
    rng = np.random.default_rng(3)
    for _ in range(7):
        cube.tick()
        cube.scan_pairs(
            np.full(60, 0xC0A80001, dtype=np.uint64),
            rng.integers(0, 1 << 32, size=60, dtype=np.uint64),
        )
        cube.scan_pairs(
            rng.integers(0, 1 << 32, size=200, dtype=np.uint64),
            rng.integers(0, 1 << 32, size=200, dtype=np.uint64),
        )
    return cube


def load(path: Path, settings: SketchSettings, **overrides) -> ATVCube:
    kwargs = dict(params=settings.rrh_params(), g=settings.g, k=settings.k, theta=settings.theta)
    kwargs.update(overrides)
    return load_snapshot(path, **kwargs)


def test_round_trip_preserves_state_and_answers(
    small_settings: SketchSettings,
    tmp_path: Path,
    recording_logger,
) -> None:
    cube = busy_cube(small_settings)
    path = tmp_path / "cube.atvc"

    written = save_snapshot(cube, path, logger=recording_logger)
    restored = load(path, small_settings)

    assert written == path.stat().st_size
    assert path.read_bytes()[:4] == MAGIC
    assert restored.clock.c0 == cube.clock.c0
    assert restored.clock.slice_index == cube.clock.slice_index
    assert restored.allocated_frames() == cube.allocated_frames()
    for z in cube.allocated_frames():
        np.testing.assert_array_equal(restored.frame_storage(z), cube.frame_storage(z))

    assert restored.detect(3) == cube.detect(3)
    assert "snapshot.saved" in recording_logger.events()


def test_restored_cube_keeps_sliding(small_settings: SketchSettings, tmp_path: Path) -> None:
    cube = busy_cube(small_settings)
    path = tmp_path / "cube.atvc"
    save_snapshot(cube, path)
    restored = load(path, small_settings)

    for c in (cube, restored):
        c.tick()
        c.scan_pair(0x0A000001, 0x08080808)
        c.tick()

    for z in cube.allocated_frames():
        np.testing.assert_array_equal(restored.frame_storage(z), cube.frame_storage(z))


def test_lazy_cube_stores_only_allocated_frames(small_settings: SketchSettings, tmp_path: Path) -> None:
    cube = ATVCube.from_settings(small_settings, preallocate=False)
    cube.scan_pair(0x0A000001, 0x08080808)
    path = tmp_path / "lazy.atvc"

    save_snapshot(cube, path)
    restored = load(path, small_settings)

    assert restored.allocated_frames() == cube.allocated_frames()
    assert len(restored.allocated_frames()) == 1


def test_bad_magic(small_settings: SketchSettings, tmp_path: Path) -> None:
    path = tmp_path / "cube.atvc"
    save_snapshot(busy_cube(small_settings), path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"NOPE"
    path.write_bytes(bytes(raw))

    with pytest.raises(SnapshotError, match="magic"):
        load(path, small_settings)


def test_unsupported_version(small_settings: SketchSettings, tmp_path: Path) -> None:
    path = tmp_path / "cube.atvc"
    save_snapshot(busy_cube(small_settings), path)
    raw = bytearray(path.read_bytes())
    raw[4] = 9
    path.write_bytes(bytes(raw))

    with pytest.raises(SnapshotError, match="version"):
        load(path, small_settings)


def test_geometry_mismatch(small_settings: SketchSettings, tmp_path: Path) -> None:
    path = tmp_path / "cube.atvc"
    save_snapshot(busy_cube(small_settings), path)

    with pytest.raises(SnapshotError, match="k: 5 != 6"):
        load(path, small_settings, k=6, g=64)


def test_key_mismatch(small_settings: SketchSettings, tmp_path: Path) -> None:
    path = tmp_path / "cube.atvc"
    save_snapshot(busy_cube(small_settings), path)
    other = small_settings.model_copy(update={"seed": 8})

    with pytest.raises(SnapshotError, match="hashing keys"):
        load(path, small_settings, params=other.rrh_params())


@pytest.mark.parametrize("keep", [HEADER_SIZE - 3, HEADER_SIZE, HEADER_SIZE + 1, -10])
def test_truncated_file(small_settings: SketchSettings, tmp_path: Path, keep: int) -> None:
    path = tmp_path / "cube.atvc"
    save_snapshot(busy_cube(small_settings), path)
    path.write_bytes(path.read_bytes()[:keep])

    with pytest.raises(SnapshotError, match="truncated"):
        load(path, small_settings)


def test_trailing_bytes(small_settings: SketchSettings, tmp_path: Path) -> None:
    path = tmp_path / "cube.atvc"
    save_snapshot(busy_cube(small_settings), path)
    path.write_bytes(path.read_bytes() + b"\0\0")

    with pytest.raises(SnapshotError, match="trailing"):
        load(path, small_settings)


def test_missing_file(small_settings: SketchSettings, tmp_path: Path) -> None:
    with pytest.raises(SnapshotError, match="cannot read"):
        load(tmp_path / "absent.atvc", small_settings)
