# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint_cli.generate import run_generate
from superpoint_cli.runner import BenchSummary, DetectSummary, run_bench, run_detect
from superpoint_cli.settings import PRESETS, RunConfig, load_run_config

__all__ = [
    "PRESETS",
    "BenchSummary",
    "DetectSummary",
    "RunConfig",
    "load_run_config",
    "run_bench",
    "run_detect",
    "run_generate",
]
