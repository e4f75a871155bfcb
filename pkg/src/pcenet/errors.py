"""Exception types shared across the package."""


class PcenetError(Exception):
    """Base class for all package-specific errors."""


class FormatError(PcenetError, ValueError):
    """Unsupported or malformed file/payload (CMYK, 16-bit, bad labels, ...)."""


class DimensionError(PcenetError, ValueError):
    """Array shapes violate an operation's contract."""


class ParameterError(PcenetError, ValueError):
    """Scalar argument outside its valid range."""


class ConfigError(PcenetError, ValueError):
    """Inconsistent or unusable configuration."""


class TrainingError(PcenetError, RuntimeError):
    """Training aborted (non-finite loss, bad checkpoint, ...)."""
