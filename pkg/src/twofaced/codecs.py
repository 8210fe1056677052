"""Erasure-channel and BSC decoders for scrambled two-faced words.

Both decoders first repair the received word ``v*`` into ``v'`` using only
``v*`` itself (never previously repaired symbols), then descramble ``v'``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend, rng
from .core import ERASED, CodeParams, descramble, parse_received, scramble
from .errors import BitFormatError, ConfigurationError, ParameterError

EC_BRANCHES = ("pass", "ml", "coin")
BSC_BRANCHES = ("kept", "flipped", "tail")

DELTA_TOL = 1e-12


@dataclass(frozen=True)
class DecodeReport:
    corrected: np.ndarray
    decoded: np.ndarray
    counts: dict = field(default_factory=dict)
    delta: int | None = None


def as_received(word) -> np.ndarray:
    if isinstance(word, str):
        return parse_received(word)
    arr = np.asarray(word)
    if arr.ndim != 1:
        raise BitFormatError("received word must be one-dimensional")
    if arr.size and (arr.min() < 0 or arr.max() > ERASED):
        raise BitFormatError("received word may only contain 0, 1 and ERASED")
    return np.ascontiguousarray(arr, dtype=np.uint8)


def _check_length(n, l):
    if n <= l:
        raise ParameterError(f"received word length {n} must exceed memory length l={l}")


def encode(x, params: CodeParams, backend=None) -> np.ndarray:
    """Sender side of the scheme: just the scrambler."""
    return scramble(x, params, backend=backend)


def decode_ec(vstar, params: CodeParams, stream: rng.Stream, backend=None) -> DecodeReport:
    """Fill erasures, then descramble.

    An erased position ``i`` whose neighbours ``i-l .. i+l`` are all received
    (and with ``i + l`` inside the word) gets the more likely symbol: guessing
    1 wins when the descrambled window ``(1, v*_{i+1..i+l})`` under context
    ``v*_{i-l..i-1}`` holds at least ``(l+1)/2`` zeros. Every other erasure is
    filled with a fair coin from ``stream``.
    """
    vstar = as_received(vstar)
    n, l = len(vstar), params.l
    _check_length(n, l)
    coins = stream.bits(rng.TAG_COIN, n, 0.5)
    vp, counts = _backend.get(backend).decode_ec(vstar, params.w_bits, coins)
    return DecodeReport(vp, descramble(vp, params, backend=backend),
                        dict(zip(EC_BRANCHES, (int(c) for c in counts))))


def compute_delta(l: int, p: float, pi: float) -> int:
    """Smallest zero count ``s`` in [1, l+1] at which keeping a BSC symbol is
    at least as likely as a channel flip:
    (1-pi) p^s q^(l+1-s) >= pi q^s p^(l+1-s), compared in log form."""
    if l < 1:
        raise ParameterError(f"memory length l must be positive, got {l}")
    if not 0.5 < p < 1:
        raise ParameterError(f"p must lie in (1/2, 1), got {p}")
    if not 0 <= pi < 1:
        raise ParameterError(f"pi must lie in [0, 1), got {pi}")
    rhs = -math.inf if pi == 0 else math.log(pi / (1 - pi))
    step = math.log(p / (1 - p))
    for s in range(1, l + 2):
        if (2 * s - (l + 1)) * step >= rhs - DELTA_TOL:
            return s
    raise ConfigurationError(f"no BSC threshold exists for l={l}, p={p}, pi={pi}")


def decode_bsc(vstar, params: CodeParams, pi: float, backend=None) -> DecodeReport:
    """Flip ``v*_i`` when the descrambled window ``v*_{i..i+l}`` (context
    ``v*_{i-l..i-1}``) has fewer than ``compute_delta`` zeros. The last ``l``
    positions have no full window and pass through."""
    vstar = as_received(vstar)
    if np.any(vstar == ERASED):
        raise BitFormatError("erasure symbol in a BSC received word")
    n, l = len(vstar), params.l
    _check_length(n, l)
    delta = compute_delta(l, params.p, pi)
    vp, counts = _backend.get(backend).decode_bsc(vstar, params.w_bits, delta)
    return DecodeReport(vp, descramble(vp, params, backend=backend),
                        dict(zip(BSC_BRANCHES, (int(c) for c in counts))), delta)


def decode(vstar, params: CodeParams, channel, stream: rng.Stream | None = None,
           backend=None) -> DecodeReport:
    """Dispatch on ``channel.kind``; the EC decoder needs ``stream`` for coin flips."""
    if channel.kind == "ec":
        if stream is None:
            raise ParameterError("erasure decoding needs a random stream for coin flips")
        return decode_ec(vstar, params, stream, backend=backend)
    return decode_bsc(vstar, params, channel.pi, backend=backend)
