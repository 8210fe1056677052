"""Two-faced processes: transition tables, sampling and the scrambling pair.

Bit words are numpy ``uint8`` arrays holding 0/1 (received words may also
hold :data:`ERASED`). Positions are 0-based in code; the shared context word
``w`` plays the role of the ``l`` symbols that precede position 0 and is never
part of a transmitted word.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from . import _backend, rng
from .errors import BitFormatError, ParameterError

ERASED = 2

_WS = re.compile(r"\s+")


def parse_bits(text: str) -> np.ndarray:
    """Parse bit text: '0'/'1' characters, whitespace ignored."""
    s = _WS.sub("", text)
    bad = set(s) - {"0", "1"}
    if bad:
        raise BitFormatError(f"invalid bit characters: {''.join(sorted(bad))!r}")
    return np.frombuffer(s.encode("ascii"), dtype=np.uint8) - np.uint8(48)


def parse_received(text: str) -> np.ndarray:
    """Parse received-word text: '0', '1' or '*' (erased), whitespace ignored."""
    s = _WS.sub("", text)
    bad = set(s) - {"0", "1", "*"}
    if bad:
        raise BitFormatError(f"invalid received symbols: {''.join(sorted(bad))!r}")
    raw = np.frombuffer(s.encode("ascii"), dtype=np.uint8)
    return np.where(raw == ord("*"), ERASED, raw - 48).astype(np.uint8)


def format_bits(word) -> str:
    arr = np.asarray(word, dtype=np.uint8)
    return "".join("01*"[b] for b in arr.tolist())


def as_bits(word) -> np.ndarray:
    """Coerce a bit string, sequence or array to a validated uint8 array."""
    if isinstance(word, str):
        return parse_bits(word)
    arr = np.asarray(word)
    if arr.ndim != 1:
        raise BitFormatError(f"bit word must be one-dimensional, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise BitFormatError("bit word may only contain 0 and 1")
    return np.ascontiguousarray(arr, dtype=np.uint8)


def _check_p(p, lo=0.0):
    if not lo < p < 1:
        raise ParameterError(f"p must lie in ({lo:g}, 1), got {p}")


@dataclass(frozen=True)
class CodeParams:
    """Memory length ``l``, shared context word ``w`` and source P(0) ``p``."""

    l: int
    w: tuple
    p: float

    def __post_init__(self):
        if not isinstance(self.l, (int, np.integer)) or self.l < 1:
            raise ParameterError(f"memory length l must be a positive integer, got {self.l!r}")
        w = tuple(int(b) for b in as_bits(self.w))
        if len(w) != self.l:
            raise ParameterError(f"context word has length {len(w)}, expected l={self.l}")
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "w", w)
        _check_p(self.p, 0.5)
        object.__setattr__(self, "p", float(self.p))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def w_bits(self) -> np.ndarray:
        return np.array(self.w, dtype=np.uint8)

    @classmethod
    def with_random_context(cls, l: int, p: float, stream: rng.Stream) -> "CodeParams":
        """Draw ``w`` uniformly from ``stream``."""
        if l < 1:
            raise ParameterError(f"memory length l must be a positive integer, got {l!r}")
        return cls(l, stream.bits(rng.TAG_CONTEXT, l, 0.5), p)


@dataclass(frozen=True)
class TransitionTable:
    """P(next symbol = 0 | last ``order`` symbols) for a two-faced process.

    ``prob_zero[c]`` is indexed by the context read as a binary number with the
    oldest symbol as the most significant bit, i.e. in lexicographic order.
    """

    order: int
    p: float
    prob_zero: tuple

    def __getitem__(self, context):
        if isinstance(context, str):
            context = int(context, 2) if context else 0
        return self.prob_zero[context]

    def contexts(self):
        return [format(c, f"0{self.order}b") for c in range(1 << self.order)]

    def as_dict(self) -> dict:
        return dict(zip(self.contexts(), self.prob_zero))

    def swapped(self) -> "TransitionTable":
        """The table with p and q exchanged (the barred matrix)."""
        return TransitionTable(self.order, 1.0 - self.p, tuple(1.0 - x for x in self.prob_zero))

    def step(self, dist) -> np.ndarray:
        """Push a distribution over contexts through one emitted symbol."""
        dist = np.asarray(dist, dtype=np.float64)
        pz = np.array(self.prob_zero)
        mask = (1 << self.order) - 1
        ctx = np.arange(1 << self.order)
        out = np.zeros_like(dist)
        np.add.at(out, (ctx << 1) & mask, dist * pz)
        np.add.at(out, ((ctx << 1) | 1) & mask, dist * (1.0 - pz))
        return out


def build_transition_table(l: int, p: float) -> TransitionTable:
    """Build the order-``l`` table by repeated concatenation with the swapped table."""
    if not isinstance(l, (int, np.integer)) or l < 1:
        raise ParameterError(f"order l must be a positive integer, got {l!r}")
    _check_p(p)
    q = 1.0 - p
    row, bar = [p, q], [q, p]
    for _ in range(int(l) - 1):
        row, bar = row + bar, bar + row
    return TransitionTable(int(l), float(p), tuple(row))


def _kernels(backend):
    return _backend.get(backend)


def scramble(x, params: CodeParams, backend=None) -> np.ndarray:
    """Parity-feedback scrambler: v_i = x_i, complemented when the preceding
    ``l`` output symbols (``w`` before the start) have odd parity."""
    return _kernels(backend).scramble(as_bits(x), params.w_bits)


def descramble(v, params: CodeParams, backend=None) -> np.ndarray:
    """Feed-forward inverse of :func:`scramble`; parity is taken over inputs."""
    return _kernels(backend).descramble(as_bits(v), params.w_bits)


def zero_count(v, l: int, w, tau: int = 0) -> int:
    """Number of ``tau`` symbols in the descrambling of ``v`` under context ``w``."""
    w = as_bits(w)
    if len(w) != l:
        raise ParameterError(f"context word has length {len(w)}, expected l={l}")
    if tau not in (0, 1):
        raise ParameterError("tau must be 0 or 1")
    u = _kernels(None).descramble(as_bits(v), w)
    return int(np.count_nonzero(u == tau))


def sample_bernoulli(n: int, p: float, stream: rng.Stream) -> np.ndarray:
    """``n`` i.i.d. symbols, each 0 with probability ``p``."""
    if n < 1:
        raise ParameterError("n must be at least 1")
    return (stream.uniforms(rng.TAG_SOURCE, n) >= p).astype(np.uint8)


def sample_two_faced(table: TransitionTable, n: int, stream: rng.Stream) -> np.ndarray:
    """Run the Markov chain of ``table`` for ``n`` steps from a uniform context."""
    if n < 1:
        raise ParameterError("n must be at least 1")
    l = table.order
    mask = (1 << l) - 1
    ctx = 0
    for b in stream.bits(rng.TAG_CONTEXT, l, 0.5).tolist():
        ctx = (ctx << 1) | b
    pz = table.prob_zero
    out = bytearray(n)
    for k, u in enumerate(stream.uniforms(rng.TAG_SOURCE, n).tolist()):
        b = 0 if u < pz[ctx] else 1
        out[k] = b
        ctx = ((ctx << 1) | b) & mask
    return np.frombuffer(bytes(out), dtype=np.uint8).copy()


def word_probability_exact(table: TransitionTable, g) -> float:
    """Probability that the chain, started from a uniform context, emits ``g`` first."""
    g = as_bits(g)
    if len(g) < 1:
        raise ParameterError("word must be nonempty")
    size = 1 << table.order
    mask = size - 1
    pz = np.array(table.prob_zero)
    ctx = np.arange(size)
    dist = np.full(size, 1.0 / size)
    for b in g.tolist():
        nxt = np.zeros(size)
        np.add.at(nxt, ((ctx << 1) | b) & mask, dist * (pz if b == 0 else 1.0 - pz))
        dist = nxt
    return float(dist.sum())


def entropy_rate(p: float) -> float:
    """Binary entropy in bits per symbol of a B(p) source (and of its two-faced image)."""
    _check_p(p)
    q = 1.0 - p
    return -(p * math.log2(p) + q * math.log2(q))
