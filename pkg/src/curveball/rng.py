"""Seeded random streams shared by the samplers.

A :class:`Stream` owns a small generator state that the compiled kernels
advance in place, so a chain driven from Python and the same chain driven
inside a kernel consume identical draws.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels as K

SEED_ENV = "CURVEBALL_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


class Stream:
    """Exclusively owned random stream (xoshiro128** state)."""

    __slots__ = ("state",)

    def __init__(self, seed: int | None = None, *keys: int):
        if seed is None:
            seed = default_seed()
        words = np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(4, np.uint32)
        self.state = words.astype(np.int64)
        if not self.state.any():
            self.state[0] = 1

    def spawn(self, *keys: int) -> "Stream":
        """Independent child stream, deterministic in the parent state and keys."""
        child = Stream.__new__(Stream)
        words = np.random.SeedSequence([*(int(w) for w in self.state), *map(int, keys)])
        child.state = words.generate_state(4, np.uint32).astype(np.int64)
        if not child.state.any():
            child.state[0] = 1
        return child

    def u32(self) -> int:
        return int(K.next_u32(self.state))

    def below(self, bound: int) -> int:
        """Uniform integer in ``range(bound)``."""
        return int(K.bounded(bound, self.state))

    def coin(self) -> bool:
        return self.below(2) == 1

    def __repr__(self):
        return f"Stream(state={self.state.tolist()})"


def as_stream(rng) -> Stream:
    if isinstance(rng, Stream):
        return rng
    return Stream(rng)
