"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 I/O or format error.
"""

import argparse
import csv
import json
import math
import os
import sys

from . import __version__, _backend
from .analysis import (SimulationConfig, ber_bound, exact_ber,
                       posterior_error_isolated, run_monte_carlo)
from .channels import ChannelSpec
from .codecs import compute_delta, decode_bsc, decode_ec, encode
from .core import CodeParams, format_bits, parse_bits, parse_received
from .errors import BitFormatError, ConfigurationError, ParameterError
from .rng import Stream, fresh_seed

EXIT_CONFIG = 2
EXIT_IO = 3

BOUNDS_HEADER = ["l", "p", "pi", "n", "delta", "bound", "best"]
SWEEP_HEADER = ["l", "p", "pi", "n", "trials", "ber", "ci95", "bound", "seed"]


class ConfigError(Exception):
    pass


def _read(path):
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _note(msg):
    print(msg, file=sys.stderr)


def _seed(args):
    if args.seed is None:
        args.seed = fresh_seed()
        _note(f"seed={args.seed}")
    return args.seed


def _params(args, w=None):
    return CodeParams(args.l, args.w if w is None else w, args.p)


def cmd_encode(args):
    if args.w is None and args.w_seed is None:
        raise ConfigError("encode needs --w or --w-seed")
    if args.w is not None:
        params = _params(args)
    else:
        params = CodeParams.with_random_context(args.l, args.p, Stream(args.w_seed))
    x = parse_bits(_read(args.input))
    if len(x) == 0:
        raise BitFormatError("empty input word")
    _note("w=" + "".join(map(str, params.w)))
    _write(args.output, format_bits(encode(x, params)) + "\n")


def cmd_decode(args):
    params = _params(args)
    text = _read(args.input)
    if args.channel == "bsc":
        if "*" in text:
            raise ConfigError("erasure symbol '*' is not valid on a BSC")
        if args.pi is None:
            raise ConfigError("--pi is required for bsc decoding")
        ChannelSpec("bsc", args.pi)
        report = decode_bsc(parse_bits(text), params, args.pi)
        meta = {"channel": "bsc", "pi": args.pi, "delta": report.delta}
    else:
        seed = _seed(args)
        report = decode_ec(parse_received(text), params, Stream(seed))
        meta = {"channel": "ec", "seed": seed}
    meta.update(l=params.l, w="".join(map(str, params.w)), p=params.p, counts=report.counts)
    _write(args.output, format_bits(report.decoded) + "\n")
    line = json.dumps(meta)
    if args.report:
        _write(args.report, line + "\n")
    else:
        _note(line)


def _sim_config(channel, l, p, pi, n, trials, seed, w=None):
    policy = "fresh" if w is None else "fixed"
    params = CodeParams(l, w if w is not None else "0" * l, p)
    return SimulationConfig(params, ChannelSpec(channel, pi), n, trials, seed, policy)


def cmd_simulate(args):
    seed = _seed(args)
    cfg = _sim_config(args.channel, args.l, args.p, args.pi, args.n, args.trials, seed, args.w)
    result = run_monte_carlo(cfg, workers=args.workers)
    _write(args.json, json.dumps(result.to_dict(), indent=2) + "\n")


def cmd_bounds(args):
    if args.l_min < 1 or args.l_max < args.l_min:
        raise ConfigError("need 1 <= --l-min <= --l-max")
    rows = []
    for l in range(args.l_min, args.l_max + 1):
        try:
            delta = compute_delta(l, args.p, args.pi) if args.channel == "bsc" else ""
            bound = ber_bound(args.channel, l, args.p, args.pi, args.n)
        except ConfigurationError:
            delta, bound = "", math.nan
        rows.append([l, args.p, args.pi, args.n, delta, bound])
    finite = [r for r in rows if not math.isnan(r[5])]
    best_l = min(finite, key=lambda r: (r[5], r[0]))[0] if finite else None
    out = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(BOUNDS_HEADER)
        for r in rows:
            w.writerow(r[:5] + [repr(r[5]) if not math.isnan(r[5]) else "", int(r[0] == best_l)])
    finally:
        _close_out(out)


def _open_out(path, mode="w"):
    if path in (None, "-"):
        return sys.stdout
    return open(path, mode, encoding="utf-8", newline="")


def _close_out(fh):
    if fh is sys.stdout:
        fh.flush()
    else:
        fh.close()


def _parse_grid_line(line):
    parts = [s.strip() for s in line.split(",")]
    if len(parts) != 5:
        raise ValueError(f"expected 5 fields l,p,pi,n,trials, got {len(parts)}")
    l, p, pi, n, trials = parts
    return int(l), float(p), float(pi), int(n), int(trials)


def cmd_sweep(args):
    seed = _seed(args)
    lines = _read(args.grid).splitlines()
    rows = []
    for lineno, raw in enumerate(lines, 1):
        s = raw.strip()
        if not s or s.startswith("#") or s.replace(" ", "") == "l,p,pi,n,trials":
            continue
        rows.append((lineno, s))
    done = 0
    resuming = args.resume and args.out not in (None, "-") and os.path.exists(args.out)
    if resuming:
        with open(args.out, encoding="utf-8") as fh:
            done = max(0, sum(1 for _ in csv.reader(fh)) - 1)
    out = _open_out(args.out, "a" if resuming else "w")
    failures = 0
    try:
        w = csv.writer(out, lineterminator="\n")
        if not resuming:
            w.writerow(SWEEP_HEADER)
        for lineno, s in rows[done:]:
            try:
                l, p, pi, n, trials = _parse_grid_line(s)
                cfg = _sim_config(args.channel, l, p, pi, n, trials, seed)
                r = run_monte_carlo(cfg, workers=args.workers)
            except (ValueError, ConfigurationError) as exc:
                failures += 1
                _note(f"grid line {lineno} skipped: {exc}")
                continue
            w.writerow([l, p, pi, n, trials, repr(r.ber), repr(r.ci95), repr(r.bound), seed])
            out.flush()
    finally:
        _close_out(out)
    if rows[done:] and failures == len(rows[done:]):
        raise ConfigError("every grid row failed")


def cmd_oracle(args):
    if args.pattern is not None:
        value = posterior_error_isolated(args.memory, args.p, args.pattern, args.position)
        out = {"pattern": args.pattern, "memory": args.memory, "p": args.p,
               "position": args.position, "posterior_error": value}
    else:
        for name in ("l", "n", "pi"):
            if getattr(args, name) is None:
                raise ConfigError(f"--{name} is required unless --pattern is given")
        w = args.w if args.w is not None else "0" * args.l
        params = CodeParams(args.l, w, args.p)
        channel = ChannelSpec(args.channel, args.pi)
        out = {"params": {"l": params.l, "w": "".join(map(str, params.w)), "p": params.p,
                          "n": args.n},
               "channel": {"kind": channel.kind, "pi": channel.pi},
               "exact_ber": exact_ber(params, channel, args.n),
               "bound": ber_bound(channel.kind, params.l, params.p, channel.pi, args.n)}
    _write(args.json, json.dumps(out, indent=2) + "\n")


def build_parser():
    ap = argparse.ArgumentParser(prog="twofaced", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version",
                    version=f"%(prog)s {__version__} ({_backend.BACKEND} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)

    def code_flags(sp, need_w=True):
        sp.add_argument("--l", type=int, required=True, help="memory length")
        if need_w:
            sp.add_argument("--w", help="shared context word, l bits")
        sp.add_argument("--p", type=float, default=0.9, help="source P(0), in (1/2, 1)")

    sp = sub.add_parser("encode", help="scramble a bit file")
    code_flags(sp)
    sp.add_argument("--w-seed", type=int, help="draw w uniformly from this seed")
    sp.add_argument("--input", default="-")
    sp.add_argument("--output", default="-")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="correct and descramble a received file")
    sp.add_argument("--channel", choices=["ec", "bsc"], required=True)
    code_flags(sp, need_w=False)
    sp.add_argument("--w", required=True, help="shared context word, l bits")
    sp.add_argument("--pi", type=float, help="channel error probability (bsc)")
    sp.add_argument("--seed", type=int, help="seed for erasure coin flips")
    sp.add_argument("--input", default="-")
    sp.add_argument("--output", default="-")
    sp.add_argument("--report", help="write the decode report here instead of stderr")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("simulate", help="Monte Carlo BER run, JSON result")
    sp.add_argument("--channel", choices=["ec", "bsc"], required=True)
    code_flags(sp)
    sp.add_argument("--pi", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--json", default="-", help="output path (default stdout)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bounds", help="tabulate the BER bound over l, CSV")
    sp.add_argument("--channel", choices=["ec", "bsc"], required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--pi", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--l-min", type=int, default=1)
    sp.add_argument("--l-max", type=int, default=16)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("sweep", help="Monte Carlo over a grid file, CSV")
    sp.add_argument("--grid", required=True, help="lines of l,p,pi,n,trials")
    sp.add_argument("--out", default="-")
    sp.add_argument("--channel", choices=["ec", "bsc"], default="ec")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--resume", action="store_true", help="append to an existing --out")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("oracle", help="exact small-case BER or erasure posterior, JSON")
    sp.add_argument("--channel", choices=["ec", "bsc"], default="ec")
    sp.add_argument("--l", type=int)
    sp.add_argument("--w")
    sp.add_argument("--p", type=float, default=0.9)
    sp.add_argument("--pi", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--pattern", help="received neighbourhood, e.g. 00*00111*11")
    sp.add_argument("--memory", type=int, default=1)
    sp.add_argument("--position", type=int, help="0-based erased position")
    sp.add_argument("--json", default="-")
    sp.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, ParameterError, ConfigurationError) as exc:
        _note(f"error: {exc}")
        return EXIT_CONFIG
    except (BitFormatError, OSError) as exc:
        _note(f"error: {exc}")
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
