# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import csv
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Sequence, TextIO


@dataclass(slots=True)
class CsvOutput:
    """
    One open CSV file and its writer.
    """

    path: Path
    handle: TextIO
    writer: Any
    rows: int = 0

    def write(self, row: Sequence[object]) -> None:
        self.writer.writerow(row)
        self.rows += 1


@dataclass(frozen=True)
class OutputManager:
    """
    Tracks the CSV outputs of a run and closes them on shutdown.

    Each path gets a single writer; asking again for an open name returns it.
    """

    _outputs: dict[str, CsvOutput] = field(default_factory=dict)

    def open(self, name: str, path: str | Path, header: Sequence[str]) -> CsvOutput:
        """
        Open (or return the already open) CSV output.

        Args:
            name: Output name, e.g. "report".
            path: File to write.
            header: Header row, written once on open.

        Returns:
            CsvOutput
        """
        cached = self._outputs.get(name)
        if cached is not None:
            return cached

        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        handle = open(path, "w", newline="", encoding="utf-8")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)

        out = CsvOutput(path=path, handle=handle, writer=writer)
        self._outputs[name] = out
        return out


    def get(self, name: str) -> CsvOutput | None:
        return self._outputs.get(name)


    def close(self) -> None:
        """
        Flush and close every output.
        """
        for out in self._outputs.values():
            out.handle.close()

        self._outputs.clear()


@contextmanager
def lifespan(manager: OutputManager) -> Iterator[OutputManager]:
    """
    Context manager closing every output of a run.

    Args:
        manager: OutputManager

    Yields:
        manager
    """
    try:
        yield manager
    finally:
        manager.close()
