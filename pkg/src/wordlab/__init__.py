"""Exact experiments with word maps on small finite groups of Lie type."""

__version__ = "0.1.0"

from .ffield import PrimeField, FpElt, sqrt_mod, is_prime
from .matgroup import (
    BudgetExceeded,
    ClassData,
    GroupTable,
    conjugacy_classes,
    cyclic_group,
    enumerate_group,
    is_generating,
)
from .freeword import Word, commutator, convolve_words, evaluate, parse_word, sample_word
from .measures import (
    Measure,
    NotReached,
    centralizer_tail,
    convolve_measures,
    fiber_count,
    lq_distance,
    mixing_time,
    word_exponent,
    word_measure_exact,
    word_measure_mc,
)
from .spectra import CharTable, character_table, fourier_coeff, spectral_decay_profile, zeta
from .cayley import CayleyGraph, cayley_graph, diameter, kesten_return, lambda1, walk_deviation
from .fricke import TracePoly, count_points, estimate_components, estimate_dim, trace_poly, variety_spec
