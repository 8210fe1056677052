"""Error correction for erasure and binary symmetric channels through
two-faced processes: scramble a B(p) source into a high-memory Markov
process, transmit, then repair the received word from symbol dependence."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .analysis import (SimulationConfig, SimulationResult, ber_bound, ber_bound_bsc,
                       ber_bound_ec, exact_ber, hoeffding_tail, optimize_l,
                       posterior_error_isolated, run_monte_carlo)
from .channels import ChannelSpec, transmit, transmit_bsc, transmit_ec
from .codecs import DecodeReport, compute_delta, decode, decode_bsc, decode_ec, encode
from .core import (ERASED, CodeParams, TransitionTable, build_transition_table, descramble,
                   entropy_rate, format_bits, parse_bits, parse_received, sample_bernoulli,
                   sample_two_faced, scramble, word_probability_exact, zero_count)
from .errors import BitFormatError, ConfigurationError, ParameterError
from .rng import Stream

__all__ = [
    "BACKEND", "BitFormatError", "ChannelSpec", "CodeParams", "ConfigurationError",
    "DecodeReport", "ERASED", "ParameterError", "SimulationConfig", "SimulationResult",
    "Stream", "TransitionTable", "ber_bound", "ber_bound_bsc", "ber_bound_ec",
    "build_transition_table", "compute_delta", "decode", "decode_bsc", "decode_ec",
    "descramble", "encode", "entropy_rate", "exact_ber", "format_bits", "hoeffding_tail",
    "optimize_l", "parse_bits", "parse_received", "posterior_error_isolated",
    "run_monte_carlo", "sample_bernoulli", "sample_two_faced", "scramble", "transmit",
    "transmit_bsc", "transmit_ec", "word_probability_exact", "zero_count",
]
