"""Chunked, seeded Monte Carlo averaging.

The sample budget is cut into fixed-size chunks and chunk ``c`` always draws
from ``SeedSequence(seed, spawn_key=(c,))``.  Chunk statistics are merged in
chunk order, so the result depends only on (seed, samples, chunk size) and
not on how many workers evaluated the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 1_000_000
CHUNK = 1 << 16

Integrand = Callable[[np.random.Generator, int], np.ndarray]


def default_seed() -> int:
    env = os.environ.get("MCF_SEED")
    return int(env) if env else DEFAULT_SEED


def derive_seed(seed: int, tag: int) -> int:
    """An independent 63-bit seed derived from ``(seed, tag)``."""
    state = np.random.SeedSequence([seed, tag]).generate_state(2, np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])


@dataclass(frozen=True)
class Moments:
    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        if values.size == 0:
            return cls(0, 0.0, 0.0)
        mean = float(np.mean(values))
        return cls(values.size, mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other: "Moments") -> "Moments":
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return Moments(n, mean, m2)

    @property
    def stderr(self) -> float:
        if self.count < 2:
            return math.inf
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


def run(integrand: Integrand, samples: int, seed: int, workers: int = 1, chunk: int = CHUNK) -> Moments:
    """Mean and spread of ``integrand(rng, m)`` over ``samples`` draws."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    sizes = [chunk] * (samples // chunk)
    if samples % chunk:
        sizes.append(samples % chunk)

    def one(c: int) -> Moments:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(c,)))
        values = np.asarray(integrand(rng, sizes[c]), dtype=float)
        return Moments.of(values)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    else:
        parts = [one(c) for c in range(len(sizes))]
    total = Moments(0, 0.0, 0.0)
    for p in parts:
        total = total.merge(p)
    return total
