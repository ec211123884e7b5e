"""Deterministic few-shot subsampling.

Draws floor(fraction * N) documents by a seeded Fisher-Yates shuffle and
returns them in original corpus order, so repeated runs with the same seed
are diff-stable.
"""

from __future__ import annotations

import math
from typing import Sequence, TypeVar

from .rng import RngStream

T = TypeVar("T")


def subsample(docs: Sequence[T], fraction: float, seed: int) -> list[T]:
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    n = len(docs)
    k = math.floor(fraction * n)
    if k == 0:
        raise ValueError(f"fraction {fraction} selects no documents from {n}")
    indices = list(range(n))
    RngStream.from_seed(seed).shuffle(indices)
    chosen = sorted(indices[:k])
    return [docs[i] for i in chosen]
