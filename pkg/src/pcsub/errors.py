"""Shared exception types."""


class ConfigurationError(ValueError):
    """Invalid sizes, shapes, or parameter values at construction time."""


class CheckpointError(ValueError):
    """Malformed, truncated, or mismatched checkpoint file."""


class ConfigParseError(ValueError):
    """Config text failed validation; ``errors`` lists (line, message)."""

    def __init__(self, errors):
        self.errors = list(errors)
        msg = "; ".join(f"line {ln}: {m}" for ln, m in self.errors)
        super().__init__(msg or "invalid config")
