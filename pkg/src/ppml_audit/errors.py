"""Exception types shared across the toolkit."""


class PpmlAuditError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(PpmlAuditError):
    """Invalid model or experiment configuration."""


class ShapeError(PpmlAuditError):
    """Array shape does not match what an operation requires."""


class InputError(PpmlAuditError):
    """Invalid argument value or malformed input data."""


class NumericError(PpmlAuditError):
    """Non-finite values where finite numbers are required."""


class FormatError(PpmlAuditError):
    """Malformed file content (IDX, container, image)."""


class CodecError(PpmlAuditError):
    """Image encoder failure."""


class CalibrationError(PpmlAuditError):
    """Noise calibration could not reach the target budget."""


class EvaluationError(PpmlAuditError):
    """Attack or utility evaluation is ill-posed for the given inputs."""


class ExperimentError(PpmlAuditError):
    """A pipeline stage failed; the run manifest records which one."""
