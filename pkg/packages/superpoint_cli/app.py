from pathlib import Path

from logger.logger import Logger

from superpoint.domain import BoundarySpec
from superpoint.traces import boundary_spanner, write_trace
from superpoint_cli import load_run_config, run_detect

Logger().configure()
logger = Logger()


def main() -> None:
    out = Path("out")
    out.mkdir(exist_ok=True)
    write_trace(boundary_spanner(BoundarySpec(per_side=640)), out / "boundary.txt")

    for preset in ("desk", "discrete"):
        config = load_run_config({
            "preset": preset,
            "trace": out / "boundary.txt",
            "report": out / f"{preset}_report.csv",
            "full_windows_only": False,
            "cadence": 10 if preset == "desk" else 1,
        })
        summary = run_detect(config, logger=logger)
        print(preset, summary)


if __name__ == "__main__":
    main()
