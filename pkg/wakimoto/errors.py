class WakimotoError(Exception):
    """Base class for every error raised by the library."""


# A multi-index or vector does not have the configured number of coordinates.
class DimensionError(WakimotoError):
    pass


# An algebra index (row, column, generator number, variable) is out of range.
class IndexRangeError(WakimotoError):
    pass


# An operator was built or applied against its contract
# (two flexible factors, y-derivative at a non-positive mode, ...).
class ContractViolation(WakimotoError):
    pass


# κ data does not satisfy the cocycle conditions. Carries the validator report.
class KappaValidationError(WakimotoError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# Bad run configuration (unknown suite, malformed number list, ...).
class ConfigError(WakimotoError):
    pass
