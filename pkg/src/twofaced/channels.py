"""Memoryless erasure and binary symmetric channels.

Whether position ``k`` is hit depends only on ``(seed, trial, k)``, so a
channel output can be regenerated independently of how the word was split
up or which worker produced it.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .core import ERASED, as_bits
from .errors import ParameterError

KINDS = ("ec", "bsc")


def _check_pi(pi):
    if not 0.0 <= pi < 0.5:
        raise ParameterError(f"channel error probability must lie in [0, 1/2), got {pi}")


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    pi: float

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in KINDS:
            raise ParameterError(f"channel kind must be 'ec' or 'bsc', got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        _check_pi(self.pi)
        object.__setattr__(self, "pi", float(self.pi))


def _hits(n, pi, stream):
    return stream.uniforms(rng.TAG_CHANNEL, n) < pi


def transmit_ec(v, pi: float, stream: rng.Stream) -> np.ndarray:
    """Replace each symbol by :data:`ERASED` with probability ``pi``."""
    _check_pi(pi)
    v = as_bits(v)
    return np.where(_hits(len(v), pi, stream), ERASED, v).astype(np.uint8)


def transmit_bsc(v, pi: float, stream: rng.Stream) -> np.ndarray:
    """Complement each symbol with probability ``pi``."""
    _check_pi(pi)
    v = as_bits(v)
    return v ^ _hits(len(v), pi, stream).astype(np.uint8)


def transmit(v, channel: ChannelSpec, stream: rng.Stream) -> np.ndarray:
    if channel.kind == "ec":
        return transmit_ec(v, channel.pi, stream)
    return transmit_bsc(v, channel.pi, stream)
