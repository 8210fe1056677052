import numpy as np

from twofaced import _backend, rng
from twofaced.rng import Stream


def test_scalar_and_vector_mix_agree():
    zs = [0, 1, 2**63, 2**64 - 1, 0x0123456789ABCDEF]
    got = rng.mix64_array(np.array(zs, dtype=np.uint64))
    assert [int(g) for g in got] == [rng.mix64(z) for z in zs]


def test_trial_keys_match_scalar():
    keys = rng.trial_keys(99, 5, 10)
    assert [int(k) for k in keys] == [rng.trial_key(99, t) for t in range(5, 10)]


def test_stream_is_deterministic_and_position_addressed():
    s = Stream(42, trial=3)
    a = s.uniforms(rng.TAG_SOURCE, 100)
    assert np.array_equal(a, Stream(42, 3).uniforms(rng.TAG_SOURCE, 100))
    assert np.array_equal(a[40:], s.uniforms(rng.TAG_SOURCE, 60, start=40))
    assert not np.array_equal(a, s.uniforms(rng.TAG_CHANNEL, 100))
    assert not np.array_equal(a, Stream(43, 3).uniforms(rng.TAG_SOURCE, 100))
    assert ((a >= 0) & (a < 1)).all()


def test_uniforms_look_uniform():
    u = Stream(7).uniforms(rng.TAG_SOURCE, 200_000)
    assert abs(u.mean() - 0.5) < 5 * np.sqrt(1 / 12 / len(u))
    hist, _ = np.histogram(u, bins=10, range=(0, 1))
    assert hist.min() > 19_000


def test_backends_draw_identical_trials():
    if "cython" not in _backend.BACKENDS:
        return
    a = _backend.get("cython").simulate(0, 2, 0.8, 0.2, 40, None, 0, 11, 3, 50)
    b = _backend.get("python").simulate(0, 2, 0.8, 0.2, 40, None, 0, 11, 3, 50)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
