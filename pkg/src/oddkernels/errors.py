"""Exception types shared across the package."""


class OddKernelError(Exception):
    """Base class for all errors raised by this package."""


class LoadError(OddKernelError):
    """A dataset could not be loaded (missing file, unreadable directory)."""


class FormatError(OddKernelError):
    """A dataset file is present but malformed."""


class InternError(OddKernelError):
    """The code interner detected an internal inconsistency."""
