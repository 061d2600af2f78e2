"""Uniform 2-partitions of {0, ..., n-1}: pairs plus one singleton for odd n."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterator

import numpy as np

from . import _kernels as K
from .rng import as_stream


@dataclass(frozen=True)
class TwoPartition:
    pairs: tuple
    singleton: int | None = None

    def key(self) -> tuple:
        """Canonical form: sorted pairs of sorted indices, then the singleton."""
        return tuple(sorted(tuple(sorted(p)) for p in self.pairs)), self.singleton

    @classmethod
    def from_row(cls, row) -> "TwoPartition":
        n = len(row)
        pairs = tuple((int(row[2 * q]), int(row[2 * q + 1])) for q in range(n // 2))
        return cls(pairs, int(row[n - 1]) if n % 2 else None)


def count_two_partitions(n: int) -> int:
    """Number of 2-partitions of an n-set: (n-1)(n-3)...1, times n when n is odd."""
    if n < 1:
        raise ValueError("n must be positive")
    start = 1 if n % 2 == 0 else 0
    return prod(n - k for k in range(start, n, 2))


def sample_two_partition(n: int, rng=None) -> TwoPartition:
    if n < 1:
        raise ValueError("n must be positive")
    s = as_stream(rng)
    return TwoPartition.from_row(K.sample_partitions(n, 1, s.state)[0])


def sample_two_partitions(n: int, k: int, rng=None) -> np.ndarray:
    """``k`` partitions as rows of an int array (pairs at 2q, 2q+1; odd singleton last)."""
    if n < 1:
        raise ValueError("n must be positive")
    return K.sample_partitions(n, k, as_stream(rng).state)


def enumerate_two_partitions(n: int) -> Iterator[TwoPartition]:
    """Every 2-partition exactly once (brute force, for small n)."""
    items = list(range(n))
    if n % 2:
        for single in items:
            rest = [x for x in items if x != single]
            for pairs in _pairings(rest):
                yield TwoPartition(tuple(pairs), single)
    else:
        for pairs in _pairings(items):
            yield TwoPartition(tuple(pairs), None)


def _pairings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, other in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in _pairings(remaining):
            yield [(first, other)] + tail


def canonical_rows(rows: np.ndarray) -> np.ndarray:
    """Put sampled partition rows in canonical order (each pair ascending,
    pairs sorted by first element, odd singleton last) so equal partitions
    give equal rows."""
    rows = np.asarray(rows)
    k, n = rows.shape
    h = n // 2
    pairs = np.sort(rows[:, : 2 * h].reshape(k, h, 2), axis=2)
    order = np.argsort(pairs[:, :, 0], axis=1)
    pairs = np.take_along_axis(pairs, order[:, :, None], axis=1)
    out = rows.copy()
    out[:, : 2 * h] = pairs.reshape(k, 2 * h)
    return out


def partition_frequencies(n: int, k: int, rng=None) -> tuple[np.ndarray, np.ndarray]:
    """Distinct canonical partitions among ``k`` samples and their counts."""
    rows = canonical_rows(sample_two_partitions(n, k, rng))
    return np.unique(rows, axis=0, return_counts=True)


def format_partition(row) -> str:
    """1-based text form, e.g. ``1-3 2-4 | 5``."""
    n = len(row)
    text = " ".join(f"{row[2 * q] + 1}-{row[2 * q + 1] + 1}" for q in range(n // 2))
    if n % 2:
        text = (text + " | " if text else "| ") + str(row[n - 1] + 1)
    return text
