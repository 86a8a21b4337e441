"""Exact distribution evolution over S_n and entropy functionals."""

from .distribution import (
    PermDistribution,
    convolve_law,
    evolve,
    shuffle_law,
    step_distribution,
)
from .entropy import (
    EntropyDecomposition,
    chain_rule_decompose,
    convexity_check,
    d_distance,
    d_scalar,
    dent_ratio,
    l1_distance,
    pinsker_check,
    projection_check,
    relative_entropy,
    tv_distance,
)
from .mixing import (
    ContractionReport,
    contraction_experiment,
    entropy_decay,
    mixing_profile,
    mixing_time,
)
from .pairs import PairChain, pair_chain_build, pair_mixing_time

__all__ = [
    "ContractionReport", "EntropyDecomposition", "PairChain", "PermDistribution",
    "chain_rule_decompose", "contraction_experiment", "convexity_check",
    "convolve_law", "d_distance", "d_scalar", "dent_ratio", "entropy_decay",
    "evolve", "l1_distance", "mixing_profile", "mixing_time", "pair_chain_build",
    "pair_mixing_time", "pinsker_check", "projection_check", "relative_entropy",
    "shuffle_law", "step_distribution", "tv_distance",
]
