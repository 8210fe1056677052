"""Pure numpy kernels, used when the compiled extension is unavailable.

Signatures and results match ``_kernels.pyx`` exactly. The scrambler
recursion is unrolled with the identity v_i = v_{i-l-1} ^ x_i ^ x_{i-1},
which turns it into a cumulative XOR along stride ``l + 1`` and lets every
kernel run vectorised across a batch of trials.
"""

import numpy as np

from . import rng

EC, BSC = 0, 1
ERASED = 2

# trials per chunk in simulate(), bounded so a chunk stays around 16M cells
_CELLS_PER_CHUNK = 1 << 24


def _scramble_2d(x, w):
    t, n = x.shape
    l = w.shape[1]
    m = l + 1
    rows = -(-n // m)
    y = np.zeros((t, rows * m), dtype=np.uint8)
    y[:, 0] = x[:, 0] ^ (np.bitwise_xor.reduce(w, axis=1) if l else 0)
    y[:, 1:n] = x[:, 1:] ^ x[:, :-1]
    stack = np.empty((t, rows + 1, m), dtype=np.uint8)
    # row 0 holds (virtual v_{-l} = 0, w_1 .. w_l)
    stack[:, 0, 0] = 0
    stack[:, 0, 1:] = w
    stack[:, 1:, :] = y.reshape(t, rows, m)
    v = np.bitwise_xor.accumulate(stack, axis=1)[:, 1:, :].reshape(t, rows * m)
    return np.ascontiguousarray(v[:, :n])


def _descramble_2d(v, w):
    t, n = v.shape
    l = w.shape[1]
    ext = np.concatenate([w, v], axis=1)
    par = np.zeros((t, l + n + 1), dtype=np.uint8)
    np.bitwise_xor.accumulate(ext, axis=1, out=par[:, 1:])
    return v ^ par[:, l:l + n] ^ par[:, 0:n]


def _prefix(a):
    out = np.zeros((a.shape[0], a.shape[1] + 1), dtype=np.int64)
    np.cumsum(a, axis=1, out=out[:, 1:])
    return out


def _decode_ec_2d(vstar, w, coins):
    t, n = vstar.shape
    l = w.shape[1]
    erased = vstar == ERASED
    a = np.where(erased, 0, vstar).astype(np.uint8)
    u0 = _descramble_2d(a, w)
    idx = np.arange(n)
    lo = np.maximum(idx - l, 0)
    hi = np.minimum(idx + l + 1, n)
    ce = _prefix(erased)
    window_erasures = ce[:, hi] - ce[:, lo] - erased
    fits = idx <= n - l - 1
    ml = erased & fits & (window_erasures == 0)
    # u0 was computed with the erased bit set to 0; guessing 1 complements the
    # whole window, so its zero count is the ones count of u0 there
    cu = _prefix(u0)
    ones = cu[:, hi] - cu[:, idx]
    guess = (2 * ones >= l + 1).astype(np.uint8)
    coin = erased & ~ml
    vp = np.where(erased, np.where(ml, guess, coins), vstar).astype(np.uint8)
    counts = np.array([(~erased).sum(), ml.sum(), coin.sum()], dtype=np.int64)
    return vp, counts


def _decode_bsc_2d(vstar, w, delta):
    t, n = vstar.shape
    l = w.shape[1]
    u = _descramble_2d(vstar, w)
    m = max(n - l, 0)
    idx = np.arange(m)
    cz = _prefix(1 - u)
    zeros = cz[:, idx + l + 1] - cz[:, idx]
    flip = np.zeros((t, n), dtype=bool)
    flip[:, :m] = zeros < delta
    vp = vstar ^ flip.astype(np.uint8)
    nflip = int(flip.sum())
    counts = np.array([t * m - nflip, nflip, t * (n - m)], dtype=np.int64)
    return vp, counts


def _bits(x):
    return np.ascontiguousarray(x, dtype=np.uint8).reshape(1, -1)


def scramble(x, w):
    return _scramble_2d(_bits(x), _bits(w))[0]


def descramble(v, w):
    return _descramble_2d(_bits(v), _bits(w))[0]


def decode_ec(vstar, w, coins):
    vp, counts = _decode_ec_2d(_bits(vstar), _bits(w), _bits(coins))
    return vp[0], counts


def decode_bsc(vstar, w, delta):
    vp, counts = _decode_bsc_2d(_bits(vstar), _bits(w), int(delta))
    return vp[0], counts


def simulate(channel, l, p, pi, n, w, delta, seed, start, stop):
    """Run trials ``start .. stop-1``; return per-trial bit errors and branch totals."""
    errors = np.zeros(stop - start, dtype=np.int64)
    counts = np.zeros(3, dtype=np.int64)
    chunk = max(1, _CELLS_PER_CHUNK // max(n + l, 1))
    pos = np.arange(n, dtype=np.uint64)[None, :]
    for a in range(start, stop, chunk):
        b = min(a + chunk, stop)
        keys = rng.trial_keys(seed, a, b)[:, None]
        if w is None:
            ctx = np.arange(l, dtype=np.uint64)[None, :]
            W = (rng.uniform_grid(keys, rng.TAG_CONTEXT, ctx) < 0.5).astype(np.uint8)
        else:
            W = np.broadcast_to(_bits(w), (b - a, l))
        X = (rng.uniform_grid(keys, rng.TAG_SOURCE, pos) >= p).astype(np.uint8)
        V = _scramble_2d(X, W)
        hit = rng.uniform_grid(keys, rng.TAG_CHANNEL, pos) < pi
        if channel == EC:
            coins = (rng.uniform_grid(keys, rng.TAG_COIN, pos) < 0.5).astype(np.uint8)
            vp, c = _decode_ec_2d(np.where(hit, ERASED, V).astype(np.uint8), W, coins)
        else:
            vp, c = _decode_bsc_2d(V ^ hit.astype(np.uint8), W, delta)
        errors[a - start:b - start] = (_descramble_2d(vp, W) != X).sum(axis=1)
        counts += c
    return errors, counts
