from dataclasses import dataclass, field
from time import perf_counter
from typing import Any, Dict, List
import logging

from peeratt.io.writers import write_json

logger = logging.getLogger(__name__)


@dataclass
class RunReport:
    """
    Summary of one command run: configuration, drop and exclusion counts,
    warnings, written files and wall-clock time.
    """
    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)
    wall_time: float = 0.0
    _start: float = field(default_factory=perf_counter, repr=False)

    def add_output(self, path: str) -> None:
        self.outputs.append(path)

    def add_warning(self, message: str) -> None:
        # Already logged where it was raised
        self.warnings.append(message)

    def add_counts(self, counts: Dict[str, int]) -> None:
        self.counts.update(counts)

    def finish(self) -> "RunReport":
        self.wall_time = perf_counter() - self._start
        return self

    def as_dict(self) -> Dict[str, Any]:
        return {"command": self.command, "config": self.config, "counts": self.counts,
                "warnings": self.warnings, "outputs": self.outputs, "wall_time": self.wall_time}

    def log(self) -> None:
        logger.info(f"{self.command}: wrote {len(self.outputs)} file(s) in {self.wall_time:.3f} s, "
                    f"counts {self.counts}, {len(self.warnings)} warning(s).")

    def to_file(self, path: str) -> str:
        return write_json(self.as_dict(), path)
