"""Exception hierarchy shared by all modules.

Every error that can escape the library carries a small machine-readable
class tag so the CLI can map it to an exit code.
"""

from __future__ import annotations


class ChowregError(Exception):
    """Base class for all library errors."""

    tag = "internal"
    exit_code = 1


class CycleParseError(ChowregError):
    """Cycle-definition text could not be parsed."""

    tag = "parse"
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class PropernessError(ChowregError):
    """A precycle fails a face-properness requirement."""

    tag = "properness"
    exit_code = 3


class ScheduleError(ChowregError):
    """No usable phase schedule: non-generic phase, tangency, or search exhausted."""

    tag = "schedule"
    exit_code = 4


class ConvergenceError(ChowregError):
    """An iterative numeric routine failed to reach its target accuracy."""

    tag = "convergence"
    exit_code = 5


class PrecisionError(ChowregError):
    """A value straddles a cut or a comparison is undecidable at the working precision."""

    tag = "precision"
    exit_code = 6
