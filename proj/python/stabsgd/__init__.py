"""Sparse online learning with stabilized truncated SGD.

Thin wrapper over the compiled ``_stabsgd`` extension. Training functions take
keyword arguments named exactly like the config-file keys.
"""

from ._stabsgd import (
    Dataset,
    DivergenceError,
    ParseError,
    adaptive_gravity,
    anneal_rejection,
    baseline,
    cohens_kappa,
    load_libsvm,
    load_model,
    loss_value,
    normalize_unit_variance,
    parse_libsvm,
    permute,
    run_cli,
    save_libsvm,
    save_model,
    soft_threshold,
    soft_threshold_scalar,
    sparsity_pct,
    split,
    stability_score,
    synthesize,
    test_error,
    train,
)

__all__ = [
    "Dataset",
    "DivergenceError",
    "ParseError",
    "adaptive_gravity",
    "anneal_rejection",
    "baseline",
    "cohens_kappa",
    "load_libsvm",
    "load_model",
    "loss_value",
    "normalize_unit_variance",
    "parse_libsvm",
    "permute",
    "run_cli",
    "save_libsvm",
    "save_model",
    "soft_threshold",
    "soft_threshold_scalar",
    "sparsity_pct",
    "split",
    "stability_score",
    "synthesize",
    "test_error",
    "train",
]
