# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.cube import ATVCube
from superpoint.detector import SlidingDetector
from superpoint.settings import SketchSettings, load_settings

__all__ = ["ATVCube", "SketchSettings", "SlidingDetector", "load_settings"]
