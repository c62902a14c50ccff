from logger.logger import Logger

from superpoint import SketchSettings, SlidingDetector
from superpoint.domain import BoundarySpec
from superpoint.traces import boundary_spanner, events_to_arrays, iter_slices

Logger().configure()
logger = Logger()


def main() -> None:
    settings = SketchSettings(k=300, k_prime=300)
    events = boundary_spanner(BoundarySpec(per_side=640))

    with SlidingDetector.from_settings(settings, logger=logger) as detector:
        for slice_index, batch in iter_slices(events, start=0):
            detector.open_slice(slice_index)
            detector.scan(*events_to_arrays(batch))

            if detector.window_full():
                for report in detector.detect():
                    print(report.window_end_slice, report.ip_text, round(report.estimate))


if __name__ == "__main__":
    main()
