"""Error types shared across the package."""


class ConfigError(ValueError):
    """Bad experiment configuration: unknown key, type mismatch, missing section."""


class FormatError(ValueError):
    """Malformed data or model file."""


class NumericsError(RuntimeError):
    """Non-finite values encountered during simulation or training."""
