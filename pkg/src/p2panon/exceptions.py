"""Exception hierarchy shared by every module."""


class AnonymityError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(AnonymityError, ValueError):
    pass


class EmptyTopologyError(AnonymityError, ValueError):
    pass


class SnapshotParseError(AnonymityError, ValueError):
    """A snapshot document is malformed; the message names the offending record."""


class DuplicateRecordError(SnapshotParseError):
    pass


class ImpossibleObservationError(AnonymityError, ValueError):
    """No honest node could have produced the observation."""


class InvariantViolationError(AnonymityError, ValueError):
    pass


class EmptyInputError(AnonymityError, ValueError):
    pass


class InsufficientDataError(AnonymityError, ValueError):
    pass


class ConfigError(AnonymityError, ValueError):
    """Configuration rejected; ``violations`` lists every ``(path, message)`` found."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{path}: {msg}" for path, msg in self.violations]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))


class RunError(AnonymityError, RuntimeError):
    def __init__(self, run_index, cause):
        self.run_index = run_index
        self.cause = cause
        super().__init__(f"run {run_index}: {type(cause).__name__}: {cause}")
