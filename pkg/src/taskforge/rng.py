"""Seeded, portable randomness for the pipeline.

Every stochastic step in the toolkit draws from a SplitMix64 stream so that
outputs are bit-reproducible across runs, platforms and worker counts.
Document-level streams are derived from (global seed, document id), which
makes per-document work order-independent.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & MASK64
    return h


class RngStream:
    """SplitMix64 generator with helpers for sampling and shuffling."""

    __slots__ = ("_state",)

    def __init__(self, state: int):
        self._state = state & MASK64

    @classmethod
    def from_seed(cls, seed: int) -> "RngStream":
        return cls(seed)

    @classmethod
    def for_document(cls, global_seed: int, doc_id: str) -> "RngStream":
        return cls(fnv1a64(doc_id.encode("utf-8")) ^ global_seed)

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        # 53-bit mantissa, uniform on [0, 1)
        return (self.next_u64() >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection to avoid modulo bias."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice(self, items):
        if not items:
            raise ValueError("choice from empty sequence")
        return items[self.randrange(len(items))]
