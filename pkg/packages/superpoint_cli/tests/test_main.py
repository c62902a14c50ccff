from __future__ import annotations

from pathlib import Path

import pytest

from superpoint_cli.__main__ import main

from conftest import PLANTED_IP, SMALL_SKETCH, read_rows


def sketch_flags() -> list[str]:
    flags = []
    for name, value in SMALL_SKETCH.items():
        flag = "--kprime" if name == "k_prime" else f"--{name}"
        flags += [flag, str(value)]
    return flags


def test_detect_exits_zero(tmp_path: Path, small_trace: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code = main([
        "detect", "--no-log", "--trace", str(small_trace),
        "--report", str(tmp_path / "r.csv"),
        "--metrics", str(tmp_path / "m.csv"), "--oracle",
        *sketch_flags(),
    ])

    assert code == 0
    assert "windows=26" in capsys.readouterr().out
    assert any(row[1] == PLANTED_IP for row in read_rows(tmp_path / "r.csv")[1:])


def test_config_file_and_flag_override(tmp_path: Path, small_trace: Path) -> None:
    conf = tmp_path / "run.conf"
    conf.write_text(
        "\n".join(f"{name}={value}" for name, value in SMALL_SKETCH.items())
        + f"\ntrace={small_trace}\nreport={tmp_path / 'from_file.csv'}\ncadence=100\n"
    )

    code = main(["detect", "--no-log", "--config", str(conf), "--report", str(tmp_path / "from_flag.csv")])

    assert code == 0
    assert (tmp_path / "from_flag.csv").exists()
    assert not (tmp_path / "from_file.csv").exists()
    assert len(read_rows(tmp_path / "from_flag.csv")) >= 1


def test_invalid_parameters_exit_one(tmp_path: Path, small_trace: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code = main([
        "detect", "--no-log", "--trace", str(small_trace),
        "--report", str(tmp_path / "r.csv"), "--s", "6",
    ])

    err = capsys.readouterr().err
    assert code == 1
    assert err.startswith("superpoint: error: ConfigError")
    assert "completeness" in err
    assert not (tmp_path / "r.csv").exists()


def test_parse_error_exits_one(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    bad = tmp_path / "bad.txt"
    bad.write_text("0,10.0.0.1,8.8.8.8\n1,not-an-ip,8.8.8.8\n")

    code = main(["detect", "--no-log", "--trace", str(bad), "--report", str(tmp_path / "r.csv"), *sketch_flags()])

    assert code == 1
    assert "TraceParseError(line_no=2" in capsys.readouterr().err


def test_undecodable_trace_exits_one(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"0,10.0.0.1,8.8.8.8\n\xff\xfe,10.0.0.1,8.8.8.8\n")

    code = main(["detect", "--no-log", "--trace", str(bad), "--report", str(tmp_path / "r.csv"), *sketch_flags()])

    assert code == 1
    assert "TraceParseError(line_no=2" in capsys.readouterr().err


def test_usage_errors_exit_two() -> None:
    with pytest.raises(SystemExit) as info:
        main(["detect", "--k", "many"])
    assert info.value.code == 2

    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_generate_and_bench(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    trace = tmp_path / "boundary.txt"
    assert main(["generate", "--no-log", "--boundary", "--out", str(trace)]) == 0
    assert "events=1024" in capsys.readouterr().out

    code = main([
        "bench", "--no-log", "--trace", str(trace), "--bench", str(tmp_path / "b.csv"),
        "--k", "20", "--kprime", "20", "--g", "64", "--theta", "100", "--cadence", "50",
    ])

    assert code == 0
    assert "mismatched_ticks=0" in capsys.readouterr().out
