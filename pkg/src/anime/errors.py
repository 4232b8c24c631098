"""Exception types shared across the package."""


class AnimeError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(AnimeError, ValueError):
    """Invalid arguments: wrong feature, empty input, malformed label, ..."""


class SigmaOverflow(AnimeError):
    """Raised when materializing a represented set would exceed its cap."""

    def __init__(self, cap, size=None):
        self.cap = cap
        self.size = size
        msg = f"represented set exceeds cap {cap}"
        if size is not None:
            msg += f" (size {size})"
        super().__init__(msg)


class GenerationError(AnimeError):
    """A dataset generator could not satisfy its specification."""


class BudgetExceeded(UsageError):
    """An oracle instance is larger than its configured budget."""
