import math

import numpy as np
import pytest

from twofaced.channels import ChannelSpec, transmit, transmit_bsc, transmit_ec
from twofaced.core import ERASED, format_bits, parse_bits
from twofaced.errors import ParameterError
from twofaced.rng import TAG_CHANNEL, Stream


def test_noiseless_channels_pass_through():
    v = parse_bits("0000111111")
    assert np.array_equal(transmit_ec(v, 0.0, Stream(1)), v)
    assert np.array_equal(transmit_bsc(v, 0.0, Stream(1)), v)


def _seed_erasing(positions, n, pi):
    for seed in range(200_000):
        hits = np.flatnonzero(Stream(seed).uniforms(TAG_CHANNEL, n) < pi)
        if list(hits) == positions:
            return seed
    raise AssertionError("no seed found")


def test_ec_reproduces_worked_example_erasure_positions():
    # erase the 2nd and 7th symbols (0-based 1 and 6)
    seed = _seed_erasing([1, 6], 10, 0.2)
    got = transmit_ec("0000111111", 0.2, Stream(seed))
    assert format_bits(got) == "0*0011*111"


@pytest.mark.parametrize("kind", ["ec", "bsc"])
def test_error_counts_concentrate(kind):
    n, pi = 100_000, 0.05
    v = np.zeros(n, dtype=np.uint8)
    out = transmit(v, ChannelSpec(kind, pi), Stream(77))
    hits = np.count_nonzero(out == (ERASED if kind == "ec" else 1))
    assert abs(hits - n * pi) <= 5 * math.sqrt(n * pi * (1 - pi))
    assert len(out) == n


def test_reproducible_and_seed_independent():
    v = np.ones(5000, dtype=np.uint8)
    a = transmit_bsc(v, 0.1, Stream(5))
    assert np.array_equal(a, transmit_bsc(v, 0.1, Stream(5)))
    # error indicators for different seeds are uncorrelated
    masks = [transmit_bsc(np.zeros(5000, np.uint8), 0.1, Stream(s)).astype(float) for s in range(40)]
    corr = np.corrcoef(masks)
    off = corr[~np.eye(len(masks), dtype=bool)]
    assert np.abs(off).max() < 5 / math.sqrt(5000)


def test_bsc_output_never_erased():
    out = transmit_bsc(np.zeros(1000, np.uint8), 0.4, Stream(1))
    assert set(np.unique(out)) <= {0, 1}


@pytest.mark.parametrize("pi", [-0.1, 0.5, 1.0])
def test_channel_spec_rejects_bad_pi(pi):
    with pytest.raises(ParameterError):
        ChannelSpec("bsc", pi)
    with pytest.raises(ParameterError):
        transmit_ec("01", pi, Stream(0))


def test_channel_spec_kind():
    assert ChannelSpec("EC", 0.1).kind == "ec"
    with pytest.raises(ParameterError):
        ChannelSpec("awgn", 0.1)
