# Copyright 2026 The tinyrel Authors
# SPDX-License-Identifier: Apache-2.0
"""Distil a pairwise text relevance teacher into a small feed-forward student."""

from ._tinyrel import (
    Error,
    Model,
    Vocab,
    __version__,
    auc,
    evaluate,
    pcc,
    run_cli,
    soften,
    stack_scores,
    tokenize,
    tokenize_sequence,
    train,
)

__all__ = [
    "Error",
    "Model",
    "Vocab",
    "__version__",
    "auc",
    "evaluate",
    "pcc",
    "run_cli",
    "soften",
    "stack_scores",
    "tokenize",
    "tokenize_sequence",
    "train",
]
