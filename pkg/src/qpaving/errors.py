"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: :class:`ResourceCapError` exits with 3,
any other :class:`QPavingError` raised by a computation exits with 2.
"""


class QPavingError(Exception):
    """Base class for every error raised by the package."""


class InvalidLatticeError(QPavingError):
    """Basis is singular, non-square, non-finite or otherwise unusable."""


class DimensionError(QPavingError):
    """Operation is not defined (or not supported) in the given dimension."""


class ResourceCapError(QPavingError):
    """A configured point-count or radius cap would be exceeded."""

    def __init__(self, message, cap=None, needed=None):
        super().__init__(message)
        self.cap = cap
        self.needed = needed


class CatalogError(QPavingError):
    """Unknown named lattice, or a shipped table failed validation."""


class NotAFrameError(QPavingError):
    """The Gaussian Gabor system over the lattice is not a frame."""


class NumericError(QPavingError):
    """An iterative or spectral routine failed to converge."""


class DomainTruncationError(QPavingError):
    """Sampled function does not decay at the edges of its grid."""


class ConsistencyError(QPavingError):
    """An internal identity that must hold by symmetry was violated."""


class ParseError(QPavingError):
    """Malformed input file; carries the offending line and column."""

    def __init__(self, message, path=None, line=None, column=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
                if column is not None:
                    where += f":{column}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line
        self.column = column


class TruncationWarning(UserWarning):
    """A finite table could not meet the requested tail tolerance."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound
