"""Exception taxonomy. The CLI maps each class to an exit code."""

from __future__ import annotations


class LabError(Exception):
    """Base class for every error raised by gnnlab."""

    exit_code: int = 3


class InputError(LabError, ValueError):
    """Malformed input: bad parameters, shape mismatch, corrupt graph file."""

    exit_code = 1


class CapacityError(LabError):
    """A dense tuple table would exceed the configured entry budget."""


class GenerationError(LabError):
    """A random generator ran out of retries."""


class TrainingError(LabError):
    """Training diverged."""

    def __init__(self, message: str, epoch: int):
        super().__init__(f"{message} (epoch {epoch})")
        self.epoch = epoch


class PropertyViolation(LabError):
    """A theorem-backed property failed on real data."""

    exit_code = 2
