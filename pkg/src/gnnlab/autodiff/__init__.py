"""Minimal dense-tensor numerics with reverse-mode differentiation and Adam."""

from gnnlab.autodiff import ops
from gnnlab.autodiff.checkpoint import load_checkpoint, save_checkpoint
from gnnlab.autodiff.gradcheck import finite_diff_check
from gnnlab.autodiff.optim import AdamState, adam_step
from gnnlab.autodiff.tensor import Tape, Tensor, backward, parameter

__all__ = [
    "AdamState",
    "Tape",
    "Tensor",
    "adam_step",
    "backward",
    "finite_diff_check",
    "load_checkpoint",
    "ops",
    "parameter",
    "save_checkpoint",
]
