"""OneMaxMin_k runtime-analysis laboratory."""
from ._backend import BACKEND
from .benchmark import (
    CoverageReport, ObjectivePair, ProblemInstance, coverage, dominates, evaluate,
    is_pareto_optimal, max_antichain_size, pareto_front, weakly_dominates,
)
from .bitcore import (
    BitString, RngStream, count_ones, derive_seed, one_bit_mutation, random_bitstring,
    standard_bitwise_mutation,
)

__version__ = "0.1.0"
