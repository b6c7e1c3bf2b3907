from typing import Optional


class BoseqError(Exception):
    pass


class ArgumentError(BoseqError):
    pass


class NormalizationError(BoseqError):
    pass


class DimensionError(BoseqError):
    pass


class DimensionCapError(BoseqError):
    pass


class DuplicateSiteError(BoseqError):
    pass


class NonHermitianError(BoseqError):
    pass


class ZeroProbabilityError(BoseqError):
    pass


class StepSizeError(BoseqError):
    pass


class FitError(BoseqError):
    pass


class NegativeEigenvalueError(BoseqError):
    pass


class CutoffError(BoseqError):
    pass


class IoError(BoseqError):
    pass


class NoPeakError(BoseqError):
    pass


class AmbiguousOutcomeError(BoseqError):
    def __init__(self, message: str, overlap_plus: float, overlap_minus: float):
        super().__init__(message)
        self.overlap_plus = overlap_plus
        self.overlap_minus = overlap_minus


class ScheduleError(BoseqError):
    """Schedule diagnostics; carries the source location when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        self.detail = message
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message)


class ScheduleSyntaxError(ScheduleError):
    pass


class UnknownSiteError(ScheduleError):
    pass


class ScheduleDuplicateSiteError(ScheduleError, DuplicateSiteError):
    pass


class OrderError(ScheduleError):
    pass


class CompileError(ScheduleError):
    pass
