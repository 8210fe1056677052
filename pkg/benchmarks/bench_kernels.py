"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --n 1000000 --repeat 5

Each kernel is run on identical inputs in both backends; outputs are checked
for equality before any timing is reported.
"""

import argparse
import sys
import timeit

import numpy as np

from twofaced import _backend
from twofaced.codecs import compute_delta
from twofaced.rng import TAG_CHANNEL, TAG_COIN, TAG_SOURCE, Stream


def make_inputs(n, l, p, pi, seed):
    s = Stream(seed)
    w = (s.uniforms(TAG_SOURCE, l, start=n) < 0.5).astype(np.uint8)
    x = (s.uniforms(TAG_SOURCE, n) >= p).astype(np.uint8)
    hits = s.uniforms(TAG_CHANNEL, n) < pi
    coins = s.bits(TAG_COIN, n, 0.5)
    return w, x, hits, coins


def cases(n, l, p, pi, seed, trials):
    w, x, hits, coins = make_inputs(n, l, p, pi, seed)
    ref = _backend.get("python")
    v = ref.scramble(x, w)
    erased = np.where(hits, 2, v).astype(np.uint8)
    flipped = v ^ hits.astype(np.uint8)
    delta = compute_delta(l, p, pi)
    sim_n = max(n // trials, l + 1)
    return {
        "scramble": lambda k: k.scramble(x, w),
        "descramble": lambda k: k.descramble(v, w),
        "decode_ec": lambda k: k.decode_ec(erased, w, coins),
        "decode_bsc": lambda k: k.decode_bsc(flipped, w, delta),
        f"simulate ec ({trials}x{sim_n})":
            lambda k: k.simulate(0, l, p, pi, sim_n, w, 0, seed, 0, trials),
        f"simulate bsc ({trials}x{sim_n})":
            lambda k: k.simulate(1, l, p, pi, sim_n, None, delta, seed, 0, trials),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000, help="symbols per kernel call")
    ap.add_argument("--l", type=int, default=8)
    ap.add_argument("--p", type=float, default=0.9)
    ap.add_argument("--pi", type=float, default=0.05)
    ap.add_argument("--trials", type=int, default=100, help="trials in the simulate rows")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    names = sorted(_backend.BACKENDS)
    if len(names) < 2:
        print(f"only the {names[0]} backend is available; build the extension first",
              file=sys.stderr)
    kernels = {name: _backend.get(name) for name in names}
    table = cases(args.n, args.l, args.p, args.pi, args.seed, args.trials)

    print(f"n={args.n} l={args.l} p={args.p} pi={args.pi}, best of {args.repeat}, ms per call")
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name in names) + f"{'py/cy':>10}")
    for label, fn in table.items():
        outputs = [fn(kernels[name]) for name in names]
        if not all(_same(outputs[0], o) for o in outputs[1:]):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        times = [min(timeit.repeat(lambda: fn(kernels[name]), number=1, repeat=args.repeat)) * 1e3
                 for name in names]
        ratio = f"{times[1] / times[0]:>9.1f}x" if names == ["cython", "python"] else ""
        print(f"{label:<28}" + "".join(f"{t:>12.2f}" for t in times) + ratio)
    return 0


if __name__ == "__main__":
    sys.exit(main())
