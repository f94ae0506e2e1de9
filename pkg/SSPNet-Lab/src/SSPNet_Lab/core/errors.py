"""
Exception types raised across the lab.

Every error derives from ``LabError`` and from the closest builtin, so
callers can catch either.
"""


class LabError(Exception):
    """Base class for all lab failures."""


class ShapeError(LabError, ValueError):
    pass


class GradientError(LabError, ArithmeticError):
    pass


class BlockError(LabError, ValueError):
    pass


class AttackError(LabError, ArithmeticError):
    pass


class TrainingError(LabError, RuntimeError):
    def __init__(self, message: str, epoch: int | None = None, batch: int | None = None):
        where = ""
        if epoch is not None:
            where = f" (epoch {epoch}" + (f", batch {batch})" if batch is not None else ")")
        super().__init__(message + where)
        self.epoch = epoch
        self.batch = batch


class OptimizerError(LabError, ArithmeticError):
    def __init__(self, parameter: str, message: str = "non-finite gradient"):
        super().__init__(f"{message} for parameter '{parameter}'")
        self.parameter = parameter


class CheckpointError(LabError, ValueError):
    pass


class IdxFormatError(LabError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class InsufficientSamplesError(LabError, ValueError):
    pass


class SchemeError(LabError, ArithmeticError):
    pass


class MetricError(LabError, ValueError):
    pass


class ConfigError(LabError, ValueError):
    pass


class LabelError(LabError, ValueError):
    pass
