class ConsistencyError(RuntimeError):
    """A numerical self-check failed; indicates a bug or a broken convention, not bad input."""


class ConfigError(ValueError):
    """Scenario configuration is malformed or out of range."""
