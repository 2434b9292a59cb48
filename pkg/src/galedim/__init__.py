"""Exact s-gales, gale-driven compression, and toy-generator distinguishers."""

__version__ = "0.1.0"

from .codec import Codeword, decode, encode, rate_upper_bound
from .exact import DyadicInterval, contained_dyadic, pow_rational
from .gales import (BettingStrategy, evaluate, general_jump_event, induced_supergale,
                    jump_event, scale_strategy, success_stats, validate)
from .prg import PrgFamily, SampledDistribution, extend_g, get_prg
from .universal import CombinedGale, StrategyProgram, combine, domination_constant

__all__ = [
    "BettingStrategy", "CombinedGale", "Codeword", "DyadicInterval", "PrgFamily",
    "SampledDistribution", "StrategyProgram", "combine", "contained_dyadic", "decode",
    "domination_constant", "encode", "evaluate", "extend_g", "general_jump_event", "get_prg",
    "induced_supergale", "jump_event", "pow_rational", "rate_upper_bound", "scale_strategy",
    "success_stats", "validate",
]
