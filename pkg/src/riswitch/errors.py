"""Shared exception types."""
from __future__ import annotations


class ConfigError(ValueError):
    """Invalid configuration or pattern data.

    Carries the full list of violations so callers can report them
    all at once instead of failing on the first one.
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class SearchSpaceError(RuntimeError):
    """Refusal to enumerate a search space larger than the configured cap."""

    def __init__(self, required: int, cap: int, what: str = "search space"):
        self.required = required
        self.cap = cap
        super().__init__(
            f"refusing to enumerate {what}: {required} evaluations required, cap is {cap}"
        )
