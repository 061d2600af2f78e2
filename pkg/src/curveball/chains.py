"""Markov chain steps over adjacency sets: trades, global trades, switches.

Every public step function takes a representation and a seeded stream and
returns a new representation; :class:`Chain` keeps the state in kernel
arrays for long runs.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels as K
from .degseq import DirectedDegreeSequence, detect_induced_cycle_sets
from .graph_core import AdjacencySetRep, Flavor
from .rng import as_stream


class ChainError(ValueError):
    pass


class TooFewSets(ChainError):
    pass


class IncompatibleKind(ChainError):
    pass


class TriangleNotPresent(ChainError):
    pass


_BIP = frozenset({Flavor.BIPARTITE, Flavor.DIRECTED_WITH_LOOPS})
_DIR = frozenset({Flavor.DIRECTED_SIMPLE})
_UND = frozenset({Flavor.UNDIRECTED})
_ANY = frozenset(Flavor)


class ChainKind(enum.Enum):
    CURVEBALL = "curveball"
    DIRECTED_CURVEBALL = "directed-curveball"
    UNDIRECTED_CURVEBALL = "undirected-curveball"
    GLOBAL_CURVEBALL = "global-curveball"
    GLOBAL_DIRECTED_CURVEBALL = "global-directed-curveball"
    SWITCHING = "switching"
    ADJUSTED_SWITCHING = "adjusted-switching"
    GOOD_SHUFFLE_CURVEBALL = "good-shuffle-curveball"
    GOOD_SHUFFLE_DIRECTED = "good-shuffle-directed"
    GOOD_SHUFFLE_UNDIRECTED = "good-shuffle-undirected"

    @property
    def code(self) -> int:
        return _KIND_CODES[self]

    @property
    def flavors(self) -> frozenset:
        return _KIND_FLAVORS[self]

    @property
    def is_global(self) -> bool:
        return self in (ChainKind.GLOBAL_CURVEBALL, ChainKind.GLOBAL_DIRECTED_CURVEBALL)

    @property
    def is_good_shuffle(self) -> bool:
        return self.value.startswith("good-shuffle")

    @property
    def is_trade(self) -> bool:
        """Plain single-pair Curveball trade kinds."""
        return self in (ChainKind.CURVEBALL, ChainKind.DIRECTED_CURVEBALL,
                        ChainKind.UNDIRECTED_CURVEBALL)

    @classmethod
    def parse(cls, text: str) -> "ChainKind":
        t = text.strip().lower().replace("_", "-")
        if t in ("global-undirected-curveball", "global-undirected"):
            raise IncompatibleKind("no global variant exists for undirected graphs: "
                                   "a trade rewrites other sets, so pairs are not independent")
        return cls(t)

    @classmethod
    def for_flavor(cls, flavor: Flavor) -> list["ChainKind"]:
        return [k for k in cls if flavor in k.flavors]


_KIND_CODES = {
    ChainKind.CURVEBALL: K.CURVEBALL,
    ChainKind.DIRECTED_CURVEBALL: K.DIRECTED_CURVEBALL,
    ChainKind.UNDIRECTED_CURVEBALL: K.UNDIRECTED_CURVEBALL,
    ChainKind.GLOBAL_CURVEBALL: K.GLOBAL_CURVEBALL,
    ChainKind.GLOBAL_DIRECTED_CURVEBALL: K.GLOBAL_DIRECTED_CURVEBALL,
    ChainKind.SWITCHING: K.SWITCHING,
    ChainKind.ADJUSTED_SWITCHING: K.ADJUSTED_SWITCHING,
    ChainKind.GOOD_SHUFFLE_CURVEBALL: K.GOOD_SHUFFLE_CURVEBALL,
    ChainKind.GOOD_SHUFFLE_DIRECTED: K.GOOD_SHUFFLE_DIRECTED,
    ChainKind.GOOD_SHUFFLE_UNDIRECTED: K.GOOD_SHUFFLE_UNDIRECTED,
}

_KIND_FLAVORS = {
    ChainKind.CURVEBALL: _BIP,
    ChainKind.DIRECTED_CURVEBALL: _DIR,
    ChainKind.UNDIRECTED_CURVEBALL: _UND,
    ChainKind.GLOBAL_CURVEBALL: _BIP,
    ChainKind.GLOBAL_DIRECTED_CURVEBALL: _DIR,
    ChainKind.SWITCHING: _ANY,
    ChainKind.ADJUSTED_SWITCHING: _ANY,
    ChainKind.GOOD_SHUFFLE_CURVEBALL: _BIP,
    ChainKind.GOOD_SHUFFLE_DIRECTED: _DIR,
    ChainKind.GOOD_SHUFFLE_UNDIRECTED: _UND,
}


@dataclass(frozen=True)
class StepRecord:
    kind: ChainKind
    size: int  # indices exchanged; 0 means the state repeated
    accepted: bool = True


def check_compatible(rep: AdjacencySetRep, kind: ChainKind) -> None:
    if rep.flavor not in kind.flavors:
        allowed = ", ".join(sorted(f.value for f in kind.flavors))
        raise IncompatibleKind(f"{kind.value} runs on {allowed}, not {rep.flavor.value}")
    if rep.n < 2:
        raise TooFewSets(f"{kind.value} needs at least two sets, got {rep.n}")


class Chain:
    """One running chain: state arrays, scratch space and an owned stream."""

    def __init__(self, rep: AdjacencySetRep, kind: ChainKind, rng=None):
        check_compatible(rep, kind)
        self.kind = kind
        self.flavor = rep.flavor
        self.m = rep.m
        self.rng = as_stream(rng)
        self.rows, self.deg = rep.to_arrays()
        self.cum = np.zeros(rep.n + 1, dtype=np.int64)
        np.cumsum(self.deg, out=self.cum[1:])
        width = self.rows.shape[1]
        n = rep.n
        self.mark = np.zeros(max(n, rep.m, 1), dtype=np.int64)
        self.pool = np.empty(2 * width, dtype=np.int64)
        self.perm = np.empty(2 * width, dtype=np.int64)
        self.buf = np.empty(4 * width, dtype=np.int64)
        self.part = np.empty(n, dtype=np.int64)
        self.avail = np.empty(n, dtype=np.int64)
        self.gone = np.empty(n, dtype=np.uint8)
        self.steps = 0

    def _scratch(self):
        return (self.mark, self.pool, self.perm, self.buf, self.part, self.avail, self.gone,
                self.rng.state)

    def step(self) -> StepRecord:
        size = K.step(self.kind.code, self.flavor.code, self.rows, self.deg, self.cum,
                      *self._scratch())
        self.steps += 1
        return StepRecord(self.kind, int(size))

    def advance(self, nsteps: int) -> int:
        """Run ``nsteps`` steps; returns the number that changed the state."""
        if nsteps <= 0:
            return 0
        moved = K.run_steps(self.kind.code, self.flavor.code, self.rows, self.deg, self.cum,
                            int(nsteps), *self._scratch())
        self.steps += nsteps
        return int(moved)

    def state(self) -> AdjacencySetRep:
        return AdjacencySetRep.from_arrays(self.flavor, self.rows, self.deg, m=self.m)

    def perturbation(self, rows0: np.ndarray, deg0: np.ndarray) -> float:
        total = int(deg0.sum())
        if total == 0:
            return 0.0
        return K.missing_count(rows0, deg0, self.rows, self.deg, self.mark) / total


def _one_step(rep, kind, rng):
    chain = Chain(rep, kind, rng)
    chain.step()
    return chain.state()


def trade_step_bipartite(rep: AdjacencySetRep, rng=None) -> AdjacencySetRep:
    return _one_step(rep, ChainKind.CURVEBALL, rng)


def trade_step_directed(rep: AdjacencySetRep, rng=None) -> AdjacencySetRep:
    return _one_step(rep, ChainKind.DIRECTED_CURVEBALL, rng)


def trade_step_undirected(rep: AdjacencySetRep, rng=None) -> AdjacencySetRep:
    return _one_step(rep, ChainKind.UNDIRECTED_CURVEBALL, rng)


def global_trade_step(rep: AdjacencySetRep, rng=None) -> AdjacencySetRep:
    if rep.flavor is Flavor.UNDIRECTED:
        raise IncompatibleKind("global trades are not defined for undirected graphs")
    kind = (ChainKind.GLOBAL_DIRECTED_CURVEBALL if rep.flavor is Flavor.DIRECTED_SIMPLE
            else ChainKind.GLOBAL_CURVEBALL)
    return _one_step(rep, kind, rng)


def switch_step(rep: AdjacencySetRep, rng=None, adjusted: bool = False) -> AdjacencySetRep:
    """Classic switch on two random edges, or (``adjusted``) a random size-one
    trade on a random set pair."""
    return _one_step(rep, ChainKind.ADJUSTED_SWITCHING if adjusted else ChainKind.SWITCHING, rng)


def good_shuffle_kind(flavor: Flavor) -> ChainKind:
    if flavor is Flavor.DIRECTED_SIMPLE:
        return ChainKind.GOOD_SHUFFLE_DIRECTED
    if flavor is Flavor.UNDIRECTED:
        return ChainKind.GOOD_SHUFFLE_UNDIRECTED
    return ChainKind.GOOD_SHUFFLE_CURVEBALL


def good_shuffle_trade_step(rep: AdjacencySetRep, rng=None) -> AdjacencySetRep:
    return _one_step(rep, good_shuffle_kind(rep.flavor), rng)


def pre_orient_cycle_sets(rep: AdjacencySetRep, cycle_sets, rng=None) -> AdjacencySetRep:
    """Reverse each given directed triangle independently with probability 1/2."""
    if rep.flavor is not Flavor.DIRECTED_SIMPLE:
        raise IncompatibleKind("cycle sets only exist for simple directed graphs")
    s = as_stream(rng)
    sets = [set(a) for a in rep.sets]
    for triple in cycle_sets:
        u, v, w = triple
        if v in sets[u] and w in sets[v] and u in sets[w]:
            cyc = [(u, v), (v, w), (w, u)]
        elif u in sets[v] and v in sets[w] and w in sets[u]:
            cyc = [(v, u), (w, v), (u, w)]
        else:
            raise TriangleNotPresent(f"vertices {triple} do not form a directed triangle")
        if s.coin():
            for x, y in cyc:
                sets[x].discard(y)
            for x, y in cyc:
                sets[y].add(x)
    return AdjacencySetRep(rep.flavor, sets)


def adjust_cycle_sets(rep: AdjacencySetRep, rng=None) -> AdjacencySetRep:
    """Pick a uniformly random orientation for every induced cycle set of ``rep``."""
    triples = detect_induced_cycle_sets(DirectedDegreeSequence.of(rep))
    return pre_orient_cycle_sets(rep, triples, rng)


def default_cadence(steps: int) -> int:
    return 100 if steps >= 10_000 else 10


def run_chain(rep: AdjacencySetRep, kind: ChainKind, steps: int, rng=None,
              observer: Callable[[int, AdjacencySetRep], None] | None = None,
              every: int | None = None, adjusted: bool = False) -> AdjacencySetRep:
    """Apply ``steps`` steps of ``kind``.

    ``adjusted`` first re-orients the induced cycle sets of a directed graph
    at random, which makes the directed chains uniform over all realisations.
    The observer sees ``(step, state)`` at step 0, every ``every`` steps and
    at the end.
    """
    if isinstance(kind, str):
        kind = ChainKind.parse(kind)
    check_compatible(rep, kind)
    s = as_stream(rng)
    if adjusted:
        if rep.flavor is not Flavor.DIRECTED_SIMPLE:
            raise IncompatibleKind("cycle-set adjustment applies to simple directed graphs only")
        rep = adjust_cycle_sets(rep, s)
    if steps <= 0:
        if observer is not None:
            observer(0, rep)
        return rep
    chain = Chain(rep, kind, s)
    if observer is None:
        chain.advance(steps)
        return chain.state()
    every = every or default_cadence(steps)
    observer(0, chain.state())
    done = 0
    while done < steps:
        k = min(every, steps - done)
        chain.advance(k)
        done += k
        observer(done, chain.state())
    return chain.state()
