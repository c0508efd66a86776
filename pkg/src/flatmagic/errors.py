"""Exception types shared across the package.

The CLI maps these onto exit codes: CapacityError -> 3, every other
ValidationError-like failure -> 2.
"""


class FlatmagicError(Exception):
    """Base class for all package errors."""


class ValidationError(FlatmagicError):
    """An input value violates a documented precondition.

    ``field`` names the offending config key / argument when known, so the
    CLI can report it.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class CapacityError(FlatmagicError):
    """A size limit was exceeded (qubit cap, brute-force Pauli-sweep cap)."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


class PartitionError(FlatmagicError):
    """A bipartition is empty, covers the full system, or is out of range."""


class UnsupportedError(FlatmagicError):
    """The requested operation is deliberately out of scope."""


class UnavailableError(FlatmagicError):
    """A golden exact value was requested where none has been derived."""


class NumericalConsistencyError(FlatmagicError):
    """A numerically computed quantity violates an exact identity by more
    than tolerance, indicating a bug or catastrophic round-off."""
