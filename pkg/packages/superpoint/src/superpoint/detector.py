# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, wait
from dataclasses import dataclass, field

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np
from logger.logger import Logger

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.cube import ATVCube
from superpoint.domain.reports import SuperPointReport
from superpoint.exceptions import ParameterError
from superpoint.settings import SketchSettings, load_settings


@dataclass(slots=True)
class SlidingDetector:
    """
    Main entry point: feeds slices into a cube and queries windows.

    Responsibilities:
    - Slice bookkeeping (one tick per slice, empty slices included)
    - Fan-out of a slice's scans over worker threads, joined before the next tick
    - Window queries at slice ends
    """

    cube: ATVCube
    settings: SketchSettings
    workers: int = 1
    logger: Logger | None = None

    first_slice: int = field(init=False)
    _pool: ThreadPoolExecutor | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")
        self.first_slice = self.cube.clock.slice_index
        if self.workers > 1:
            self._pool = ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix="scan")


    @classmethod
    def default(cls, logger: Logger | None = None) -> "SlidingDetector":
        """
        Build a detector from environment settings.

        Returns:
            SlidingDetector
        """
        return cls.from_settings(load_settings(), logger=logger)


    @classmethod
    def from_settings(
        cls,
        settings: SketchSettings,
        *,
        start_slice: int = 0,
        workers: int = 1,
        preallocate: bool = True,
        logger: Logger | None = None,
    ) -> "SlidingDetector":
        """
        Build a detector from settings.

        Args:
            settings: SketchSettings
            start_slice: Absolute index of the first slice.
            workers: Scan threads per slice.
            preallocate: Allocate every cube frame up front.
            logger: Optional logger instance.

        Returns:
            SlidingDetector
        """
        cube = ATVCube.from_settings(
            settings,
            preallocate=preallocate,
            start_slice=start_slice,
            logger=logger,
        )
        return cls(cube=cube, settings=settings, workers=workers, logger=logger)

    # -----------------------------------------------------------------
    # Public API
    # -----------------------------------------------------------------

    @property
    def current_slice(self) -> int:
        return self.cube.clock.slice_index


    def open_slice(self, slice_index: int) -> int:
        """
        Tick the cube until ``slice_index`` is the open slice.

        Args:
            slice_index: Slice to open, not before the current one.

        Returns:
            Counters examined by the last tick (0 when no tick ran).
        """
        if slice_index < self.current_slice:
            raise ParameterError(
                f"slice {slice_index} is before the open slice {self.current_slice}"
            )

        examined = 0
        while self.current_slice < slice_index:
            examined = self.cube.tick()
        return examined


    def scan(self, aips: np.ndarray, bips: np.ndarray) -> int:
        """
        Scan pairs of the open slice.

        Args:
            aips: Hosts.
            bips: Peers.

        Returns:
            Pairs scanned.
        """
        aips = np.asarray(aips)
        bips = np.asarray(bips)
        n = int(aips.size)

        if self._pool is None or n < 2 * self.workers:
            self.cube.scan_pairs(aips, bips)
            return n

        bounds = np.linspace(0, n, self.workers + 1, dtype=np.int64)
        futures = [
            self._pool.submit(self.cube.scan_pairs, aips[lo:hi], bips[lo:hi])
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        wait(futures)
        for f in futures:
            f.result()
        return n


    def window_full(self, k_prime: int | None = None) -> bool:
        """
        True once the open slice ends a window lying entirely inside the trace.
        """
        k_prime = k_prime or self.settings.k_prime
        return self.current_slice >= self.first_slice + k_prime - 1


    def detect(self, k_prime: int | None = None) -> list[SuperPointReport]:
        """
        Super points of the window ending at the open slice.

        Args:
            k_prime: Window length, defaults to the settings'.

        Returns:
            list[SuperPointReport]
        """
        return self.cube.detect(k_prime or self.settings.k_prime)


    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None


    def __enter__(self) -> "SlidingDetector":
        return self


    def __exit__(self, *exc: object) -> None:
        self.close()
