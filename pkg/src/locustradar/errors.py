"""Exception hierarchy shared by every stage of the pipeline."""


class LocustRadarError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(LocustRadarError, ValueError):
    """A value violates a data-model invariant."""


class ParseError(LocustRadarError):
    """Malformed input file.

    Parameters
    ----------
    reason : str
        Human readable description of the problem.
    offset : int, optional
        Byte offset into a binary file where the problem was found.
    row : int, optional
        1-based line number for text formats.
    """

    def __init__(self, reason, offset=None, row=None):
        self.reason = reason
        self.offset = offset
        self.row = row
        where = []
        if offset is not None:
            where.append(f"byte {offset}")
        if row is not None:
            where.append(f"row {row}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + reason)


class IrregularGridError(ParseError):
    """Gridded extract is not a dense regular lattice."""


class CeilingBelowAntenna(LocustRadarError, ValueError):
    pass


class DimensionMismatch(LocustRadarError, ValueError):
    pass


class EmptyVolume(LocustRadarError, ValueError):
    pass


class NonMonotonicTime(LocustRadarError, ValueError):
    pass


class InsufficientObservations(LocustRadarError, ValueError):
    pass


class LatitudeOutOfCoverage(LocustRadarError, ValueError):
    pass


class OutOfCoverage(LocustRadarError, ValueError):
    pass


class SpecError(LocustRadarError, ValueError):
    """Scene specification violates an invariant."""


class TimeMismatch(LocustRadarError, ValueError):
    pass


class ConfigError(LocustRadarError, ValueError):
    pass
