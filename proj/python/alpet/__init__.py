"""Active-learning data selection for few-shot citation-need detection."""

from ._core import (
    Error,
    Pool,
    analysis,
    balance_undersample,
    build_cloze,
    coreset_radius,
    dedup_similar,
    entropy,
    kl_divergence,
    lightweight_weights,
    linguistic_profile,
    macro_f1,
    make_two_gaussian,
    partition_rounds,
    read_matrix,
    reduction_percentage,
    run_experiment,
    strategies,
    tokenize,
    write_matrix,
)

__all__ = [
    "Error",
    "Pool",
    "analysis",
    "balance_undersample",
    "build_cloze",
    "coreset_radius",
    "dedup_similar",
    "entropy",
    "kl_divergence",
    "lightweight_weights",
    "linguistic_profile",
    "macro_f1",
    "make_two_gaussian",
    "partition_rounds",
    "read_matrix",
    "reduction_percentage",
    "run_experiment",
    "strategies",
    "tokenize",
    "write_matrix",
]
