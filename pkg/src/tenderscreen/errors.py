"""Domain errors raised across the package.

Every error callers are expected to handle derives from ScreeningError so
the CLI and the HTTP service can map them to exit code 1 / HTTP 422 in one
place. The class name doubles as the wire-level error code.
"""


class ScreeningError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class MissingColumn(ScreeningError):
    pass


class UnparsableRow(ScreeningError):
    def __init__(self, row_index: int, reason: str):
        super().__init__(f"row {row_index}: {reason}")
        self.row_index = row_index
        self.reason = reason


class NonPositiveBid(ScreeningError):
    def __init__(self, row_index: int, value: str):
        super().__init__(f"row {row_index}: bid_value {value!r} is not > 0")
        self.row_index = row_index
        self.value = value


class TooFewBids(ScreeningError):
    pass


class DegenerateTender(ScreeningError):
    pass


class UndefinedScreen(ScreeningError):
    pass


class SingleClassData(ScreeningError):
    pass


class SchemaMismatch(ScreeningError):
    pass


class EmptyClass(ScreeningError):
    pass


class EmptyInput(ScreeningError):
    pass


class InvalidThresholds(ScreeningError):
    pass


class TooManyFirms(ScreeningError):
    pass


class InvalidConfig(ScreeningError):
    pass


class UnknownId(ScreeningError):
    pass
