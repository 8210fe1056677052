# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: scrambler, descrambler, both decoders and the fused
Monte Carlo trial loop. Same signatures and results as ``_fallback``."""

import numpy as np

from libc.stdint cimport uint8_t, uint64_t, int64_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TO_UNIT = 1.0 / 9007199254740992.0  # 2**-53

cdef uint64_t TAG_CONTEXT = 1
cdef uint64_t TAG_SOURCE = 2
cdef uint64_t TAG_CHANNEL = 3
cdef uint64_t TAG_COIN = 4

cdef int EC = 0
cdef uint8_t ERASED = 2


cdef inline uint64_t mix64(uint64_t z) nogil:
    z += GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double unif(uint64_t key, uint64_t tag, uint64_t pos) nogil:
    return <double>(mix64(key ^ mix64((tag << 56) | pos)) >> 11) * TO_UNIT


cdef inline uint64_t trial_key(uint64_t seed, uint64_t trial) nogil:
    return mix64(mix64(seed) + GOLDEN * (trial + 1))


# ext buffers hold the l-bit context followed by the n-bit word

cdef void _scramble(const uint8_t* x, uint8_t* ext, Py_ssize_t n, Py_ssize_t l) nogil:
    cdef Py_ssize_t k, j
    cdef uint8_t par = 0, b
    for k in range(l):
        par ^= ext[k]
    for k in range(n):
        j = l + k
        b = x[k] ^ par
        ext[j] = b
        par ^= b ^ ext[j - l]


cdef void _descramble(const uint8_t* ext, uint8_t* u, Py_ssize_t n, Py_ssize_t l) nogil:
    cdef Py_ssize_t k, j
    cdef uint8_t par = 0
    for k in range(l):
        par ^= ext[k]
    for k in range(n):
        j = l + k
        u[k] = ext[j] ^ par
        par ^= ext[j] ^ ext[j - l]


cdef void _decode_ec(const uint8_t* star, uint8_t* a, uint8_t* u0, int64_t* cu,
                     int64_t* ce, uint8_t* vp, Py_ssize_t n, Py_ssize_t l,
                     const uint8_t* coins, uint64_t key, int64_t* counts) nogil:
    # star/a/vp are ext buffers sharing the same context prefix
    cdef Py_ssize_t k, lo
    cdef int64_t ones
    for k in range(l):
        a[k] = star[k]
        vp[k] = star[k]
    for k in range(n):
        a[l + k] = 0 if star[l + k] == ERASED else star[l + k]
    _descramble(a, u0, n, l)
    cu[0] = 0
    ce[0] = 0
    for k in range(n):
        cu[k + 1] = cu[k] + u0[k]
        ce[k + 1] = ce[k] + (star[l + k] == ERASED)
    for k in range(n):
        if star[l + k] != ERASED:
            vp[l + k] = star[l + k]
            counts[0] += 1
            continue
        lo = k - l if k >= l else 0
        if k <= n - l - 1 and ce[k + l + 1] - ce[lo] == 1:
            ones = cu[k + l + 1] - cu[k]
            vp[l + k] = 1 if 2 * ones >= l + 1 else 0
            counts[1] += 1
        else:
            if coins != NULL:
                vp[l + k] = coins[k]
            else:
                vp[l + k] = 1 if unif(key, TAG_COIN, k) < 0.5 else 0
            counts[2] += 1


cdef void _decode_bsc(const uint8_t* star, uint8_t* u, int64_t* cz, uint8_t* vp,
                      Py_ssize_t n, Py_ssize_t l, int64_t delta, int64_t* counts) nogil:
    cdef Py_ssize_t k
    _descramble(star, u, n, l)
    cz[0] = 0
    for k in range(n):
        cz[k + 1] = cz[k] + (1 - u[k])
    for k in range(l):
        vp[k] = star[k]
    for k in range(n):
        if k <= n - l - 1:
            if cz[k + l + 1] - cz[k] < delta:
                vp[l + k] = star[l + k] ^ 1
                counts[1] += 1
            else:
                vp[l + k] = star[l + k]
                counts[0] += 1
        else:
            vp[l + k] = star[l + k]
            counts[2] += 1


def _ext(const uint8_t[::1] w, const uint8_t[::1] word):
    cdef Py_ssize_t l = w.shape[0]
    out = np.empty(l + word.shape[0], dtype=np.uint8)
    out[:l] = w
    out[l:] = word
    return out


def scramble(x, w):
    cdef const uint8_t[::1] xv = np.ascontiguousarray(x, dtype=np.uint8)
    cdef const uint8_t[::1] wv = np.ascontiguousarray(w, dtype=np.uint8)
    cdef Py_ssize_t n = xv.shape[0], l = wv.shape[0]
    ext = np.empty(l + n, dtype=np.uint8)
    ext[:l] = wv
    cdef uint8_t[::1] e = ext
    if n:
        _scramble(&xv[0], &e[0], n, l)
    return ext[l:].copy()


def descramble(v, w):
    cdef const uint8_t[::1] wv = np.ascontiguousarray(w, dtype=np.uint8)
    cdef const uint8_t[::1] vv = np.ascontiguousarray(v, dtype=np.uint8)
    cdef Py_ssize_t n = vv.shape[0], l = wv.shape[0]
    cdef uint8_t[::1] e = _ext(wv, vv)
    out = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] u = out
    if n:
        _descramble(&e[0], &u[0], n, l)
    return out


def decode_ec(vstar, w, coins):
    cdef const uint8_t[::1] wv = np.ascontiguousarray(w, dtype=np.uint8)
    cdef const uint8_t[::1] sv = np.ascontiguousarray(vstar, dtype=np.uint8)
    cdef const uint8_t[::1] cv = np.ascontiguousarray(coins, dtype=np.uint8)
    cdef Py_ssize_t n = sv.shape[0], l = wv.shape[0]
    cdef uint8_t[::1] star = _ext(wv, sv)
    cdef uint8_t[::1] a = np.empty(l + n, dtype=np.uint8)
    cdef uint8_t[::1] vp = np.empty(l + n, dtype=np.uint8)
    cdef uint8_t[::1] u0 = np.empty(n + 1, dtype=np.uint8)
    cdef int64_t[::1] cu = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[::1] ce = np.empty(n + 1, dtype=np.int64)
    counts = np.zeros(3, dtype=np.int64)
    cdef int64_t[::1] cnt = counts
    if n:
        _decode_ec(&star[0], &a[0], &u0[0], &cu[0], &ce[0], &vp[0], n, l,
                   &cv[0], 0, &cnt[0])
    return np.asarray(vp)[l:].copy(), counts


def decode_bsc(vstar, w, delta):
    cdef const uint8_t[::1] wv = np.ascontiguousarray(w, dtype=np.uint8)
    cdef const uint8_t[::1] sv = np.ascontiguousarray(vstar, dtype=np.uint8)
    cdef Py_ssize_t n = sv.shape[0], l = wv.shape[0]
    cdef uint8_t[::1] star = _ext(wv, sv)
    cdef uint8_t[::1] vp = np.empty(l + n, dtype=np.uint8)
    cdef uint8_t[::1] u = np.empty(n + 1, dtype=np.uint8)
    cdef int64_t[::1] cz = np.empty(n + 1, dtype=np.int64)
    counts = np.zeros(3, dtype=np.int64)
    cdef int64_t[::1] cnt = counts
    if n:
        _decode_bsc(&star[0], &u[0], &cz[0], &vp[0], n, l, delta, &cnt[0])
    return np.asarray(vp)[l:].copy(), counts


def simulate(int channel, Py_ssize_t l, double p, double pi, Py_ssize_t n, w,
             int64_t delta, uint64_t seed, int64_t start, int64_t stop):
    """Run trials ``start .. stop-1``; return per-trial bit errors and branch totals."""
    cdef bint fresh = w is None
    cdef const uint8_t[::1] wv = np.zeros(l, dtype=np.uint8) if fresh else \
        np.ascontiguousarray(w, dtype=np.uint8)
    errors = np.zeros(stop - start, dtype=np.int64)
    counts = np.zeros(3, dtype=np.int64)
    cdef int64_t[::1] err = errors
    cdef int64_t[::1] cnt = counts
    cdef uint8_t[::1] x = np.empty(n + 1, dtype=np.uint8)
    cdef uint8_t[::1] v = np.empty(l + n + 1, dtype=np.uint8)
    cdef uint8_t[::1] star = np.empty(l + n + 1, dtype=np.uint8)
    cdef uint8_t[::1] a = np.empty(l + n + 1, dtype=np.uint8)
    cdef uint8_t[::1] vp = np.empty(l + n + 1, dtype=np.uint8)
    cdef uint8_t[::1] u = np.empty(n + 1, dtype=np.uint8)
    cdef int64_t[::1] c1 = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[::1] c2 = np.empty(n + 1, dtype=np.int64)
    cdef int64_t t, e
    cdef Py_ssize_t k
    cdef uint64_t key
    with nogil:
        for t in range(start, stop):
            key = trial_key(seed, <uint64_t>t)
            for k in range(l):
                if fresh:
                    v[k] = 1 if unif(key, TAG_CONTEXT, k) < 0.5 else 0
                else:
                    v[k] = wv[k]
                star[k] = v[k]
            for k in range(n):
                x[k] = 1 if unif(key, TAG_SOURCE, k) >= p else 0
            _scramble(&x[0], &v[0], n, l)
            if channel == EC:
                for k in range(n):
                    star[l + k] = ERASED if unif(key, TAG_CHANNEL, k) < pi else v[l + k]
                _decode_ec(&star[0], &a[0], &u[0], &c1[0], &c2[0], &vp[0], n, l,
                           NULL, key, &cnt[0])
            else:
                for k in range(n):
                    star[l + k] = v[l + k] ^ (1 if unif(key, TAG_CHANNEL, k) < pi else 0)
                _decode_bsc(&star[0], &u[0], &c1[0], &vp[0], n, l, delta, &cnt[0])
            _descramble(&vp[0], &u[0], n, l)
            e = 0
            for k in range(n):
                e += u[k] != x[k]
            err[t - start] = e
    return errors, counts
