"""Wagner-tail analysis of free-group endomorphisms and Wecken density experiments."""

from .census import BudgetExceeded, CensusResult, density_trend, exact_census, mc_census, xp_sequence
from .classify import (
    Classification,
    WeckenStatus,
    classify,
    fixed_point_partition,
    is_A0_by_boundary,
    nielsen_lower_bound,
)
from .freegroup import (
    BallSampler,
    Word,
    WordError,
    cancel_len,
    enumerate_ball,
    format_word,
    invert,
    multiply,
    parse_word,
    reduce,
    sample_word,
)
from .wagner import Endomorphism, TailPair, remnant, tail_equalities, wagner_tails

__version__ = "0.1.0"
