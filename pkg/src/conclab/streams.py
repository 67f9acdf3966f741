"""Deterministic counter-based sample streams and Bernoulli estimates.

Streams are addressed by (seed, stream_id) and realized with the Philox
counter-based generator, so the value at any index is a pure function of
(seed, stream_id, index).  Parallel workers take disjoint stream_ids and
their chunks are reproducible independently of scheduling; pooled
estimates are order-independent by construction.
"""

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = ["SampleStream", "Estimate", "pool_estimates"]

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SampleStream:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not (0 <= self.seed <= _UINT64_MASK):
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        if not (0 <= self.stream_id <= _UINT64_MASK):
            raise ValueError(f"stream_id must fit in 64 unsigned bits, got {self.stream_id!r}")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, stream_id: int) -> "SampleStream":
        """Same seed, different stream: use for parallel chunks."""
        return SampleStream(self.seed, stream_id)


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo mean with its Bernoulli standard error."""

    mean: float
    std_error: float
    samples: int

    @classmethod
    def from_hits(cls, hits: int, samples: int) -> "Estimate":
        if samples <= 0:
            raise ValueError("samples must be positive")
        mean = hits / samples
        return cls(mean, math.sqrt(mean * (1.0 - mean) / samples), samples)


def pool_estimates(estimates: Iterable[Estimate]) -> Estimate:
    """Combine disjoint-stream estimates; associative and order-independent."""
    total = 0
    weighted = 0.0
    for e in estimates:
        total += e.samples
        weighted += e.mean * e.samples
    if total == 0:
        raise ValueError("cannot pool zero estimates")
    mean = weighted / total
    return Estimate(mean, math.sqrt(mean * (1.0 - mean) / total), total)
