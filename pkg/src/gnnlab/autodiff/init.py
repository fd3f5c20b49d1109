"""Parameter initialization."""

from __future__ import annotations

import zlib

import numpy as np

from gnnlab.autodiff.tensor import Tensor, parameter


def param_rng(seed: int, name: str) -> np.random.Generator:
    """Independent stream per parameter name, derived from the run seed."""
    entropy = [seed, zlib.crc32(name.encode())]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def glorot_uniform(fan_in: int, fan_out: int, seed: int, name: str) -> Tensor:
    a = np.sqrt(6.0 / (fan_in + fan_out))
    return parameter(param_rng(seed, name).uniform(-a, a, size=(fan_in, fan_out)), name=name)


def zeros(shape: tuple[int, ...], name: str) -> Tensor:
    return parameter(np.zeros(shape), name=name)
