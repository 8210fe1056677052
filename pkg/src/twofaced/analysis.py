"""BER bounds, parameter search, Monte Carlo runs and exact small-case oracles."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _backend
from .channels import ChannelSpec
from .codecs import BSC_BRANCHES, EC_BRANCHES, compute_delta
from .core import CodeParams, build_transition_table, word_probability_exact
from .errors import ConfigurationError, ParameterError

EXACT_COMB_MAX = 64
Z95 = 1.959963984540054


def binomial_term(m: int, i: int, p: float) -> float:
    """C(m, i) p^i (1-p)^(m-i), powers taken in log space."""
    if i < 0 or i > m:
        return 0.0
    q = 1.0 - p
    if p == 0.0 or q == 0.0:
        return float((p == 0.0 and i == 0) or (q == 0.0 and i == m))
    logpow = i * math.log(p) + (m - i) * math.log(q)
    if m <= EXACT_COMB_MAX:
        return math.comb(m, i) * math.exp(logpow)
    return math.exp(math.lgamma(m + 1) - math.lgamma(i + 1) - math.lgamma(m - i + 1) + logpow)


def _check(l, p, pi, n):
    if l < 1:
        raise ParameterError(f"memory length l must be positive, got {l}")
    if not 0.5 < p < 1:
        raise ParameterError(f"p must lie in (1/2, 1), got {p}")
    if not 0 <= pi < 0.5:
        raise ParameterError(f"pi must lie in [0, 1/2), got {pi}")
    if n <= l:
        raise ParameterError(f"n={n} must exceed l={l}")


def ber_bound_ec(l: int, p: float, pi: float, n: int) -> float:
    """Upper bound on the erasure-channel decoder's BER, evaluated as published
    (inner sum from floor((l+1)/2) to l)."""
    _check(l, p, pi, n)
    clean = (1.0 - pi) ** (2 * l + 1)
    tail = sum(binomial_term(l + 1, i, p) for i in range((l + 1) // 2, l + 1))
    return pi * ((1 - l / n) * clean * tail + ((1 - clean) + l / n) / 2) * (l + 1)


def ber_bound_bsc(l: int, p: float, pi: float, n: int) -> float:
    """Upper bound on the BSC decoder's BER: miscorrection of clean symbols plus
    uncorrected flips, with the threshold from :func:`compute_delta`."""
    _check(l, p, pi, n)
    delta = compute_delta(l, p, pi)
    miss = sum(binomial_term(l + 1, i, p) for i in range(delta))
    # q^i p^(l+1-i) terms, upper limit l as published
    kept_flip = sum(binomial_term(l + 1, i, 1.0 - p) for i in range(delta, l + 1))
    return (((1 - pi) * miss + pi * kept_flip) * (1 - l / n) + pi * l / n) * (l + 1)


def ber_bound(kind: str, l: int, p: float, pi: float, n: int) -> float:
    if kind == "ec":
        return ber_bound_ec(l, p, pi, n)
    if kind == "bsc":
        return ber_bound_bsc(l, p, pi, n)
    raise ParameterError(f"unknown channel kind {kind!r}")


def hoeffding_tail(m: int, k: int, p: float) -> float:
    """exp(-2m(k/m - p)^2), bounding P(Bin(m, p) >= k) for k > mp."""
    if m < 1:
        raise ParameterError("m must be positive")
    if not k > m * p:
        raise ParameterError(f"Hoeffding bound needs k > m*p (k={k}, m*p={m * p})")
    return math.exp(-2 * m * (k / m - p) ** 2)


def binomial_upper_tail(m: int, k: int, p: float) -> float:
    """Exact P(Bin(m, p) >= k) by direct summation."""
    return sum(binomial_term(m, i, p) for i in range(max(k, 0), m + 1))


def optimize_l(p: float, pi: float, n: int, kind: str, l_max: int):
    """Scan l = 1..l_max and return (l, bound) minimising the channel's bound.

    Ties go to the smaller l; for the BSC, l without a threshold are skipped.
    """
    if l_max < 1 or l_max >= n:
        raise ParameterError(f"need 1 <= l_max < n (l_max={l_max}, n={n})")
    best = None
    for l in range(1, l_max + 1):
        try:
            b = ber_bound(kind, l, p, pi, n)
        except ConfigurationError:
            continue
        if best is None or b < best[1]:
            best = (l, b)
    if best is None:
        raise ConfigurationError(f"no feasible l in 1..{l_max} for p={p}, pi={pi}")
    return best


# -- Monte Carlo --------------------------------------------------------------

W_POLICIES = ("fixed", "fresh")


@dataclass(frozen=True)
class SimulationConfig:
    params: CodeParams
    channel: ChannelSpec
    n: int
    trials: int
    seed: int
    w_policy: str = "fixed"

    def __post_init__(self):
        if self.n <= self.params.l:
            raise ParameterError(f"n={self.n} must exceed l={self.params.l}")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if not 0 <= self.seed < 1 << 64:
            raise ParameterError("seed must be a 64-bit unsigned integer")
        if self.w_policy not in W_POLICIES:
            raise ParameterError(f"w_policy must be one of {W_POLICIES}")


@dataclass
class SimulationResult:
    config: SimulationConfig
    bit_errors: int
    total_bits: int
    ber: float
    ci95: float
    bound: float
    branch_totals: dict = field(default_factory=dict)
    stderr: float = 0.0

    @property
    def seed(self) -> int:
        return self.config.seed

    def to_dict(self) -> dict:
        c = self.config
        params = {"l": c.params.l, "p": c.params.p, "n": c.n, "w_policy": c.w_policy}
        if c.w_policy == "fixed":
            params["w"] = "".join(map(str, c.params.w))
        return {
            "params": params,
            "channel": {"kind": c.channel.kind, "pi": c.channel.pi},
            "trials": c.trials,
            "bit_errors": self.bit_errors,
            "total_bits": self.total_bits,
            "ber": self.ber,
            "ci95": self.ci95,
            "stderr": self.stderr,
            "bound": self.bound,
            "branch_totals": self.branch_totals,
            "seed": c.seed,
        }


def ci95_halfwidth(errors: int, total: int) -> float:
    """Normal-approximation 95% half-width, floored at 1/total."""
    ber = errors / total
    return max(Z95 * math.sqrt(ber * (1 - ber) / total), 1.0 / total)


def _run_range(args):
    backend, channel, l, p, pi, n, w, delta, seed, start, stop = args
    return _backend.get(backend).simulate(channel, l, p, pi, n, w, delta, seed, start, stop)


def simulate_errors(config: SimulationConfig, workers: int = 1, backend=None):
    """Per-trial bit error counts and branch totals for ``config``."""
    c = config
    kind = c.channel.kind
    delta = compute_delta(c.params.l, c.params.p, c.channel.pi) if kind == "bsc" else 0
    w = c.params.w_bits if c.w_policy == "fixed" else None
    backend = backend or _backend.BACKEND
    workers = max(1, min(workers, c.trials))
    edges = [c.trials * i // workers for i in range(workers + 1)]
    jobs = [(backend, 0 if kind == "ec" else 1, c.params.l, c.params.p, c.channel.pi,
             c.n, w, delta, c.seed, a, b) for a, b in zip(edges, edges[1:])]
    if workers == 1:
        parts = [_run_range(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_range, jobs))
    errors = np.concatenate([e for e, _ in parts])
    counts = sum(cnt for _, cnt in parts)
    return errors, counts


def run_monte_carlo(config: SimulationConfig, workers: int = 1, backend=None) -> SimulationResult:
    """Encode, transmit and decode ``config.trials`` independent words.

    Trial ``t`` draws everything from the substream keyed by (seed, t), so the
    result is identical for any ``workers`` and either kernel backend.
    """
    c = config
    errors, counts = simulate_errors(c, workers=workers, backend=backend)
    total = c.n * c.trials
    bit_errors = int(errors.sum())
    names = EC_BRANCHES if c.channel.kind == "ec" else BSC_BRANCHES
    per_trial = errors / c.n
    stderr = float(per_trial.std(ddof=1) / math.sqrt(c.trials)) if c.trials > 1 else 0.0
    return SimulationResult(
        config=c,
        bit_errors=bit_errors,
        total_bits=total,
        ber=bit_errors / total,
        ci95=ci95_halfwidth(bit_errors, total),
        bound=ber_bound(c.channel.kind, c.params.l, c.params.p, c.channel.pi, c.n),
        branch_totals=dict(zip(names, (int(x) for x in counts))),
        stderr=stderr,
    )


# -- exhaustive oracles --------------------------------------------------------

EXACT_MAX_N = 12
EXACT_MAX_L = 3


def _all_words(n):
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


def _ref_descramble(v, w):
    # straight from the definition: u_k = v_k xor parity(v_{k-l} .. v_{k-1}),
    # symbols before position 0 taken from w
    rows, n = v.shape
    l = len(w)
    u = np.empty_like(v)
    for k in range(n):
        par = np.zeros(rows, dtype=np.uint8)
        for j in range(k - l, k):
            par ^= v[:, j] if j >= 0 else w[l + j]
        u[:, k] = v[:, k] ^ par
    return u


def _window_zeros(ctx_and_window, l):
    """Zeros in the descrambling of the last l+1 columns, first l columns as context."""
    cols = ctx_and_window
    zeros = 0
    for k in range(l, 2 * l + 1):
        par = np.zeros_like(cols[0])
        for j in range(k - l, k):
            par = par ^ cols[j]
        zeros = zeros + (1 - (cols[k] ^ par)).astype(np.int64)
    return zeros


def exact_ber(params: CodeParams, channel: ChannelSpec, n: int) -> float:
    """Exact expected BER of the whole pipeline by exhaustive enumeration.

    Sums over every transmitted word (weighted by the probability of its
    source word) and every channel error pattern. Coin-flip erasures are
    handled analytically: any decoded symbol that depends on a coin is wrong
    with probability 1/2. Uses its own direct transcription of the decoding
    rules, independent of the kernels.
    """
    l, p, pi = params.l, params.p, channel.pi
    if n > EXACT_MAX_N or l > EXACT_MAX_L:
        raise ParameterError(f"exhaustive oracle limited to n <= {EXACT_MAX_N}, l <= {EXACT_MAX_L}")
    if n <= l:
        raise ParameterError(f"n={n} must exceed l={l}")
    w = params.w_bits
    V = _all_words(n)
    X = _ref_descramble(V, w)
    ones = X.sum(axis=1)
    prob_v = p ** (n - ones) * (1 - p) ** ones
    col = lambda M, j: M[:, j] if j >= 0 else np.full(M.shape[0], w[l + j], dtype=np.uint8)  # noqa: E731
    delta = compute_delta(l, p, pi) if channel.kind == "bsc" else None

    total = 0.0
    for e in _all_words(n):
        k_err = int(e.sum())
        weight = pi ** k_err * (1 - pi) ** (n - k_err)
        if weight == 0.0:
            continue
        hit = np.flatnonzero(e)
        coin = set()
        if channel.kind == "ec":
            Vp = V.copy()
            for i in hit:
                neighbours = [j for j in range(i - l, i + l + 1) if j != i and 0 <= j < n]
                if i + l <= n - 1 and not any(e[j] for j in neighbours):
                    cols = [col(V, j) for j in range(i - l, i)]
                    cols.append(np.ones(len(V), dtype=np.uint8))
                    cols += [V[:, j] for j in range(i + 1, i + l + 1)]
                    nu = _window_zeros(cols, l)
                    Vp[:, i] = (2 * nu >= l + 1).astype(np.uint8)
                else:
                    coin.add(int(i))
        else:
            S = V ^ e
            Vp = S.copy()
            for i in range(n - l):
                cols = [col(S, j) for j in range(i - l, i + l + 1)]
                nu = _window_zeros(cols, l)
                Vp[:, i] = np.where(nu >= delta, S[:, i], 1 - S[:, i])
        Xp = _ref_descramble(Vp, w)
        err = np.zeros(len(V))
        for k in range(n):
            if any(j in coin for j in range(k - l, k + 1)):
                err += 0.5
            else:
                err += Xp[:, k] != X[:, k]
        total += weight * float(prob_v @ err)
    return total / n


def posterior_error_isolated(memory: int, p: float, pattern: str, position: int | None = None) -> float:
    """Bayes error of the MAP guess for one erased symbol of ``pattern``.

    ``pattern`` is a received word over '0', '1', '*' drawn from a two-faced
    process of the given memory (0 means a plain B(p) source), started from a
    uniform context. ``position`` (0-based, default the first '*') must be
    erased with its ``memory`` neighbours on either side observed; any other
    erasures are marginalised out.
    """
    if memory < 0:
        raise ParameterError("memory must be nonnegative")
    if not 0.5 < p < 1:
        raise ParameterError(f"p must lie in (1/2, 1), got {p}")
    s = "".join(pattern.split())
    if set(s) - set("01*"):
        raise ParameterError(f"malformed pattern {pattern!r}")
    erased = [i for i, ch in enumerate(s) if ch == "*"]
    if not erased:
        raise ParameterError("pattern has no erasure")
    if position is None:
        position = erased[0]
    if not 0 <= position < len(s) or s[position] != "*":
        raise ParameterError(f"position {position} is not an erasure")
    near = range(max(position - memory, 0), min(position + memory + 1, len(s)))
    if any(s[j] == "*" for j in near if j != position):
        raise ParameterError("the erased symbol's neighbourhood is not fully observed")
    if memory == 0:
        return 1.0 - p
    table = build_transition_table(memory, p)
    others = [i for i in erased if i != position]
    mass = [0.0, 0.0]
    for guess in (0, 1):
        for fill in product("01", repeat=len(others)):
            word = list(s)
            word[position] = str(guess)
            for i, b in zip(others, fill):
                word[i] = b
            mass[guess] += word_probability_exact(table, "".join(word))
    return min(mass) / sum(mass)


def average_posterior_error(memory: int, p: float) -> float:
    """Bayes error for an erasure whose ``memory`` neighbours on each side are
    observed, averaged over all such neighbourhoods."""
    if memory == 0:
        return 1.0 - p
    table = build_transition_table(memory, p)
    total = 0.0
    for left in product("01", repeat=memory):
        for right in product("01", repeat=memory):
            a, b = "".join(left), "".join(right)
            total += min(word_probability_exact(table, a + "0" + b),
                         word_probability_exact(table, a + "1" + b))
    return total
