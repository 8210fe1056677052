import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twofaced import _backend
from twofaced.core import (ERASED, CodeParams, build_transition_table, descramble,
                           entropy_rate, format_bits, parse_bits, parse_received,
                           sample_bernoulli, sample_two_faced, scramble,
                           word_probability_exact, zero_count)
from twofaced.errors import BitFormatError, ParameterError
from twofaced.rng import Stream

from conftest import all_words, ref_descramble, ref_scramble

P, Q = 0.9, 0.1


# -- transition tables --------------------------------------------------------

def test_table_order_one_and_two():
    assert build_transition_table(1, P).as_dict() == {"0": P, "1": pytest.approx(Q)}
    t2 = build_transition_table(2, P).as_dict()
    assert t2 == {"00": P, "01": pytest.approx(Q), "10": pytest.approx(Q), "11": P}


def test_table_order_three_matches_barred_display():
    t3 = build_transition_table(3, P)
    assert t3["000"] == P
    assert t3.swapped().prob_zero == pytest.approx((Q, P, P, Q, P, Q, Q, P))
    # contexts with leading 1 carry the swapped order-2 row
    assert t3.prob_zero[4:] == pytest.approx(build_transition_table(2, P).swapped().prob_zero)


@pytest.mark.parametrize("l", range(1, 9))
def test_table_recursive_structure(l):
    small = build_transition_table(l, 0.7)
    big = build_transition_table(l + 1, 0.7)
    half = 1 << l
    assert big.prob_zero[:half] == small.prob_zero
    assert big.prob_zero[half:] == pytest.approx(small.swapped().prob_zero)
    assert set(np.round(big.prob_zero, 12)) == {0.7, 0.3}
    assert big.contexts() == sorted(big.contexts())


@pytest.mark.parametrize("l", range(1, 9))
def test_uniform_context_distribution_is_stationary(l):
    t = build_transition_table(l, 0.83)
    size = 1 << l
    # the two incoming transitions of every context sum to one
    pz = np.array(t.prob_zero)
    for c in range(size):
        parents = [c >> 1, (c >> 1) | (1 << (l - 1))]
        emit_zero = (c & 1) == 0
        incoming = sum(pz[a] if emit_zero else 1 - pz[a] for a in parents)
        assert incoming == pytest.approx(1.0, abs=1e-14)
    uni = np.full(size, 1 / size)
    assert np.allclose(t.step(uni), uni, atol=1e-15)


@pytest.mark.parametrize("l,p", [(0, 0.9), (-1, 0.9), (2, 0.0), (2, 1.0), (2, 1.5)])
def test_table_rejects_bad_parameters(l, p):
    with pytest.raises(ParameterError):
        build_transition_table(l, p)


# -- code parameters -----------------------------------------------------------

def test_code_params_validation():
    cp = CodeParams(3, "010", 0.8)
    assert cp.w == (0, 1, 0) and cp.q == pytest.approx(0.2)
    for bad in [(0, "", 0.8), (2, "0", 0.8), (1, "0", 0.5), (1, "0", 1.0), (1, "2", 0.8)]:
        with pytest.raises((ParameterError, BitFormatError)):
            CodeParams(*bad)


def test_random_context_is_reproducible():
    a = CodeParams.with_random_context(16, 0.9, Stream(3))
    assert a == CodeParams.with_random_context(16, 0.9, Stream(3))
    assert len(a.w) == 16


# -- scramble / descramble ------------------------------------------------------

def test_scramble_golden(backend):
    x = "0000100000"
    assert format_bits(scramble(x, CodeParams(1, "0", P), backend)) == "0000111111"
    assert format_bits(scramble(x, CodeParams(2, "00", P), backend)) == "0000110110"


def test_descramble_golden(backend):
    assert format_bits(descramble("0000111111", CodeParams(1, "0", P), backend)) == "0000100000"
    assert format_bits(descramble("0000110110", CodeParams(2, "00", P), backend)) == "0000100000"


@pytest.mark.parametrize("l", [1, 2, 5, 16])
def test_all_zero_word_is_fixed(backend, l):
    z = np.zeros(50, dtype=np.uint8)
    assert not scramble(z, CodeParams(l, "0" * l, P), backend).any()


words = st.lists(st.integers(0, 1), min_size=1, max_size=300)


@settings(max_examples=200, deadline=None)
@given(x=words, w=st.lists(st.integers(0, 1), min_size=1, max_size=16))
def test_kernels_match_reference_definitions(x, w):
    params = CodeParams(len(w), w, P)
    for b in _backend.BACKENDS:
        v = scramble(x, params, b)
        assert np.array_equal(v, ref_scramble(x, w))
        assert np.array_equal(descramble(x, params, b), ref_descramble(x, w))
        assert np.array_equal(descramble(v, params, b), np.array(x, dtype=np.uint8))


@pytest.mark.parametrize("l", [1, 2, 3])
def test_scramble_is_bijective(backend, l):
    for w in itertools.product((0, 1), repeat=l):
        params = CodeParams(l, w, P)
        images = {scramble(x, params, backend).tobytes() for x in all_words(10)}
        assert len(images) == 1 << 10


@pytest.mark.parametrize("l", [1, 2, 3])
def test_single_flip_locality(backend, l):
    n = 8
    params = CodeParams(l, "1" * l, P)
    for v in all_words(n):
        base = descramble(v, params, backend)
        for i in range(n):
            f = v.copy()
            f[i] ^= 1
            changed = np.flatnonzero(descramble(f, params, backend) != base)
            assert changed.min() == i and changed.max() <= min(i + l, n - 1)


# -- zero counts -----------------------------------------------------------------

@pytest.mark.parametrize("v,l,w,expected", [("10", 1, "0", 0), ("11", 1, "1", 2), ("111", 2, "00", 1)])
def test_zero_count_examples(v, l, w, expected):
    assert zero_count(v, l, w) == expected


def test_zero_count_complements():
    v = "0110101110"
    assert zero_count(v, 3, "101") + zero_count(v, 3, "101", tau=1) == len(v)
    with pytest.raises(ParameterError):
        zero_count(v, 3, "10")


# -- sampling --------------------------------------------------------------------

def test_sample_bernoulli_frequency_and_determinism():
    n, p = 100_000, 0.9
    x = sample_bernoulli(n, p, Stream(2024))
    zeros = np.count_nonzero(x == 0)
    assert abs(zeros - n * p) <= 5 * math.sqrt(n * p * (1 - p))
    assert np.array_equal(x, sample_bernoulli(n, p, Stream(2024)))
    assert np.count_nonzero(sample_bernoulli(5, 1 - 1e-12, Stream(1))) == 0


def test_two_faced_order_one_transitions():
    t = build_transition_table(1, P)
    v = sample_two_faced(t, 200_000, Stream(8))
    prev, nxt = v[:-1], v[1:]
    after0 = nxt[prev == 0]
    after1 = nxt[prev == 1]
    assert np.mean(after0 == 0) == pytest.approx(P, abs=0.005)
    assert np.mean(after1 == 0) == pytest.approx(Q, abs=0.005)


def _word_freqs(v, r):
    codes = np.zeros(len(v) - r + 1, dtype=np.int64)
    for j in range(r):
        codes = (codes << 1) | v[j:len(v) - r + 1 + j]
    return np.bincount(codes, minlength=1 << r) / len(codes)


@pytest.mark.parametrize("l", [1, 3])
def test_two_faced_sampler_matches_scrambled_bernoulli(l):
    # word frequencies up to length l+2 agree with the exact chain marginals,
    # for both the chain sampler and the scrambled Bernoulli construction
    p, n = 0.8, 400_000
    t = build_transition_table(l, p)
    chain = sample_two_faced(t, n, Stream(31))
    params = CodeParams.with_random_context(l, p, Stream(32))
    scr = scramble(sample_bernoulli(n, p, Stream(32)), params)
    for r in range(1, l + 3):
        exact = np.array([word_probability_exact(t, format(g, f"0{r}b")) for g in range(1 << r)])
        assert np.allclose(_word_freqs(chain, r), exact, atol=0.01)
        assert np.allclose(_word_freqs(scr, r), exact, atol=0.01)


def test_word_probability_exact_examples():
    assert word_probability_exact(build_transition_table(2, P), "01") == pytest.approx(0.25, abs=1e-15)
    assert word_probability_exact(build_transition_table(3, P), "0") == pytest.approx(0.5, abs=1e-15)
    assert word_probability_exact(build_transition_table(1, P), "00") == pytest.approx(0.45, abs=1e-15)


# -- entropy -----------------------------------------------------------------------

def test_entropy_rate():
    assert entropy_rate(0.5) == pytest.approx(1.0)
    assert entropy_rate(0.9) == pytest.approx(0.4689955935892812, abs=1e-12)
    assert entropy_rate(1 - 1e-12) < 1e-9
    assert entropy_rate(0.3) == pytest.approx(entropy_rate(0.7))


# -- text formats -------------------------------------------------------------------

def test_bit_text_roundtrip():
    assert format_bits(parse_bits(" 01 1\n0\t1 ")) == "01101"
    assert format_bits(parse_received("0*1 *")) == "0*1*"
    assert parse_received("*")[0] == ERASED
    with pytest.raises(BitFormatError):
        parse_bits("0120")
    with pytest.raises(BitFormatError):
        parse_bits("01*")
    with pytest.raises(BitFormatError):
        parse_received("01x")
