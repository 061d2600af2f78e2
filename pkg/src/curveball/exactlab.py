"""Exact checks on small instances.

Enumerates every realisation of a degree sequence, evaluates closed-form
transition probabilities for each chain kind in exact rationals, and
analyses the resulting chain (symmetry, components, stationary law). An
exhaustive enumeration of each kernel's random choices and a compiled
single-step simulator serve as independent cross-checks.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

import numpy as np
from scipy import sparse, stats
from scipy.sparse import csgraph

from . import _kernels as K
from .chains import Chain, ChainKind, check_compatible
from .degseq import DirectedDegreeSequence, detect_induced_cycle_sets, is_realizable_directed
from .graph_core import AdjacencySetRep, Flavor, MismatchedShape, degree_sequence
from .partition import count_two_partitions, enumerate_two_partitions
from .rng import as_stream

DEFAULT_CAP = 10**6


class ExactLabError(ValueError):
    pass


class TooLarge(ExactLabError):
    pass


class NotRealizable(ExactLabError):
    pass


class NotErgodic(ExactLabError):
    def __init__(self, msg, components=None, bipartite=False):
        super().__init__(msg)
        self.components = components or []
        self.bipartite = bipartite


class TooFewSamples(ExactLabError):
    pass


# ---------------------------------------------------------------- degree specs

def _spec_for(flavor: Flavor, spec):
    """Normalise a degree spec to ``(rows, cols)`` sums and the column count."""
    if flavor is Flavor.BIPARTITE:
        rows, cols = spec
        return tuple(rows), tuple(cols)
    if flavor is Flavor.UNDIRECTED:
        d = tuple(int(x) for x in spec)
        return d, d
    if isinstance(spec, DirectedDegreeSequence):
        spec = spec.pairs
    pairs = [tuple(p) for p in spec]
    return tuple(b for _, b in pairs), tuple(a for a, _ in pairs)


def degrees_of(rep: AdjacencySetRep):
    """Degree spec of ``rep`` in the form accepted by :func:`enumerate_realizations`."""
    view = degree_sequence(rep)
    if rep.flavor is Flavor.BIPARTITE:
        return view.out_degrees, view.in_degrees
    if rep.flavor is Flavor.UNDIRECTED:
        return view.degrees
    return view.pairs


def iter_realizations(spec, flavor: Flavor) -> Iterator[tuple[frozenset, ...]]:
    """Lazily yield the adjacency sets of every realisation exactly once."""
    rows, cols = _spec_for(flavor, spec)
    if flavor is Flavor.UNDIRECTED:
        yield from _undirected(list(rows))
    else:
        yield from _rowwise(rows, list(cols), flavor is Flavor.DIRECTED_SIMPLE)


def _rowwise(rows, cap, no_diag):
    n, m = len(rows), len(cap)
    if sum(rows) != sum(cap) or any(c < 0 for c in cap):
        return
    chosen = [frozenset()] * n

    def rec(i):
        if i == n:
            yield tuple(chosen)
            return
        left = n - i - 1
        cand = [j for j in range(m) if cap[j] > 0 and not (no_diag and j == i)]
        for combo in itertools.combinations(cand, rows[i]):
            for j in combo:
                cap[j] -= 1
            # a column cannot need more ones than rows remain
            if all(c <= left for c in cap):
                chosen[i] = frozenset(combo)
                yield from rec(i + 1)
            for j in combo:
                cap[j] += 1

    yield from rec(0)


def _undirected(rem):
    n = len(rem)
    if sum(rem) % 2:
        return
    adj = [set() for _ in range(n)]

    def rec(i):
        if i == n:
            yield tuple(frozenset(s) for s in adj)
            return
        if rem[i] == 0:
            yield from rec(i + 1)
            return
        cand = [j for j in range(i + 1, n) if rem[j] > 0]
        for combo in itertools.combinations(cand, rem[i]):
            need = rem[i]
            rem[i] = 0
            for j in combo:
                rem[j] -= 1
                adj[i].add(j)
                adj[j].add(i)
            if sum(rem[i + 1:]) % 2 == 0 and all(rem[j] <= n - i - 2 for j in range(i + 1, n)):
                yield from rec(i + 1)
            for j in combo:
                rem[j] += 1
                adj[i].discard(j)
                adj[j].discard(i)
            rem[i] = need

    yield from rec(0)


@dataclass
class StateSpace:
    flavor: Flavor
    degrees: object
    states: list
    m: int
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {s.key(): k for k, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    @property
    def n(self) -> int:
        return self.states[0].n

    def codes(self) -> np.ndarray:
        """Bitmask code of each state, as produced by the compiled kernels."""
        return np.array([_code(s) for s in self.states], dtype=np.int64)


def _code(rep: AdjacencySetRep) -> int:
    return sum(1 << (r * rep.m + x) for r, s in enumerate(rep.sets) for x in s)


def enumerate_realizations(spec, flavor: Flavor, cap: int = DEFAULT_CAP) -> StateSpace:
    """All graphs with the given degrees, sorted by canonical key."""
    rows, cols = _spec_for(flavor, spec)
    m = len(cols)
    if flavor is Flavor.DIRECTED_SIMPLE and not is_realizable_directed(
            DirectedDegreeSequence(list(zip(cols, rows)))):
        raise NotRealizable(f"{spec} has no directed realisation")
    states = []
    for sets in iter_realizations(spec, flavor):
        states.append(AdjacencySetRep(flavor, sets, m=m))
        if len(states) > cap:
            raise TooLarge(f"more than {cap} realisations")
    if not states:
        raise NotRealizable(f"{spec} has no {flavor.value} realisation")
    states.sort(key=lambda s: s.key())
    return StateSpace(flavor, spec, states, m)


# ---------------------------------------------------------------- set-level trades

def _excludes(flavor: Flavor) -> bool:
    return flavor in (Flavor.DIRECTED_SIMPLE, Flavor.UNDIRECTED)


def trade_diffs(sets, i, j, flavor):
    """(A_{i-j}, A_{j-i}) with the self-loop exclusions of the flavor."""
    di = sets[i] - sets[j]
    dj = sets[j] - sets[i]
    if _excludes(flavor):
        di = di - {j}
        dj = dj - {i}
    return di, dj


def apply_trade(sets, i, j, keep_i, flavor):
    """Sets after a trade where ``keep_i`` (a subset of the pool, size s_i)
    becomes the traded part of B_i."""
    di, dj = trade_diffs(sets, i, j, flavor)
    pool = di | dj
    new = list(sets)
    new[i] = (sets[i] - di) | keep_i
    new[j] = (sets[j] - dj) | (pool - keep_i)
    if flavor is Flavor.UNDIRECTED:
        for k in keep_i - di:
            new[k] = (new[k] - {j}) | {i}
        for l in (pool - keep_i) - dj:
            new[l] = (new[l] - {i}) | {j}
    return tuple(frozenset(s) for s in new)


def _key(sets, flavor) -> tuple:
    und = flavor is Flavor.UNDIRECTED
    return tuple(sorted((i, x) for i, s in enumerate(sets) for x in s if not (und and x <= i)))


def realizing_trades(A: AdjacencySetRep, B: AdjacencySetRep):
    """Every set pair (i, j) whose single trade turns A into B.

    Returns tuples ``(i, j, s_i, s_j, size)``. Directed and bipartite trades
    touch exactly two sets; an undirected size-one trade has two realising
    pairs.
    """
    a, b = A.sets, B.sets
    diff = [r for r in range(A.n) if a[r] != b[r]]
    if not diff:
        return []
    flavor = A.flavor
    if flavor is Flavor.UNDIRECTED:
        candidates = itertools.combinations(diff, 2)
    elif len(diff) == 2:
        candidates = [tuple(diff)]
    else:
        return []
    found = []
    for i, j in candidates:
        di, dj = trade_diffs(a, i, j, flavor)
        common = a[i] - di
        if not common <= b[i]:
            continue
        keep = b[i] - common
        if len(keep) != len(di) or not keep <= (di | dj):
            continue
        if apply_trade(a, i, j, keep, flavor) == b:
            found.append((i, j, len(di), len(dj), len(keep - di)))
    return found


def _switch_entries(A: AdjacencySetRep):
    return [(r, x) for r, s in enumerate(A.sets) for x in sorted(s)]


def apply_switch(sets, x, y, u, v, flavor):
    """Result of switching entries (x, y), (u, v), or None when illegal."""
    if x == u or y == v:
        return None
    if _excludes(flavor) and (x == v or u == y):
        return None
    if v in sets[x] or y in sets[u]:
        return None
    new = list(sets)
    new[x] = (sets[x] - {y}) | {v}
    new[u] = (sets[u] - {v}) | {y}
    if flavor is Flavor.UNDIRECTED:
        new[y] = (new[y] - {x}) | {u}
        new[v] = (new[v] - {u}) | {x}
    return tuple(frozenset(s) for s in new)


# ---------------------------------------------------------------- closed forms

def _pair_prob(n: int) -> Fraction:
    return Fraction(2, n * (n - 1))


def trade_count(si: int, sj: int) -> int:
    """Number of distinct outcomes of one trade: (s_i + s_j)! / (s_i! s_j!)."""
    return comb(si + sj, si)


def global_trade_count(A: AdjacencySetRep, pairs) -> int:
    """r(P): product of per-pair trade counts for a 2-partition."""
    r = 1
    for i, j in pairs:
        di, dj = trade_diffs(A.sets, i, j, A.flavor)
        r *= trade_count(len(di), len(dj))
    return r


def _pair_trade_ok(a, b, i, j, flavor) -> bool:
    di, dj = trade_diffs(a, i, j, flavor)
    common_i = a[i] - di
    if not common_i <= b[i] or not (a[j] - dj) <= b[j]:
        return False
    keep = b[i] - common_i
    pool = di | dj
    return len(keep) == len(di) and keep <= pool and b[j] == (a[j] - dj) | (pool - keep)


def _switch_prob(A: AdjacencySetRep, B: AdjacencySetRep) -> Fraction:
    ea, eb = set(A.edges()), set(B.edges())
    removed, added = sorted(ea - eb), sorted(eb - ea)
    if len(removed) != 2 or len(added) != 2:
        return Fraction(0)
    (x, y), (u, v) = removed
    total = len(_switch_entries(A))
    if A.flavor is Flavor.UNDIRECTED:
        ok = ({tuple(sorted((x, v))), tuple(sorted((u, y)))} == set(added)
              or {tuple(sorted((x, u))), tuple(sorted((y, v)))} == set(added))
        # four ordered entry pairs produce the same switch
        return Fraction(4, total * (total - 1)) if ok else Fraction(0)
    if {(x, v), (u, y)} != set(added):
        return Fraction(0)
    return Fraction(2, total * (total - 1))


def _switch_stay(A: AdjacencySetRep) -> Fraction:
    entries = _switch_entries(A)
    total = len(entries)
    if total < 2:
        return Fraction(1)
    legal = sum(1 for (x, y), (u, v) in itertools.permutations(entries, 2)
                if apply_switch(A.sets, x, y, u, v, A.flavor) is not None)
    return 1 - Fraction(legal, total * (total - 1))


def _pair_weight(kind: ChainKind, si: int, sj: int, size: int) -> Fraction:
    """Probability of one specific trade outcome once its pair is selected."""
    if kind.is_good_shuffle:
        return Fraction(1, trade_count(si, sj) - 1)
    if kind is ChainKind.ADJUSTED_SWITCHING:
        return Fraction(1, si * sj) if size == 1 else Fraction(0)
    return Fraction(1, trade_count(si, sj))


def _pair_stay(kind: ChainKind, si: int, sj: int) -> Fraction:
    if si == 0 or sj == 0:
        return Fraction(1)
    if kind.is_good_shuffle or kind is ChainKind.ADJUSTED_SWITCHING:
        return Fraction(0)
    return Fraction(1, trade_count(si, sj))


def transition_probability(A: AdjacencySetRep, B: AdjacencySetRep, kind: ChainKind) -> Fraction:
    """Exact one-step probability of moving from A to B.

    Single-pair kinds: 2/(n(n-1)) times the outcome weight, summed over the
    set pairs that realise the move (two for undirected size-one trades).
    Global kinds: average over all 2-partitions of 1/r(P) for the partitions
    whose global trade can produce B. The diagonal counts the outcomes that
    leave A unchanged, which equals one minus the off-diagonal row mass.
    """
    if A.flavor is not B.flavor or A.n != B.n or A.m != B.m:
        raise MismatchedShape("states of different shape")
    if degree_sequence(A) != degree_sequence(B):
        raise MismatchedShape("states with different degree sequences")
    check_compatible(A, kind)
    n = A.n
    same = A.sets == B.sets

    if kind is ChainKind.SWITCHING:
        return _switch_stay(A) if same else _switch_prob(A, B)

    if kind.is_global:
        total = Fraction(0)
        for part in enumerate_two_partitions(n):
            if part.singleton is not None and A.sets[part.singleton] != B.sets[part.singleton]:
                continue
            if all(_pair_trade_ok(A.sets, B.sets, i, j, A.flavor) for i, j in part.pairs):
                total += Fraction(1, global_trade_count(A, part.pairs))
        return total / count_two_partitions(n)

    if same:
        stay = Fraction(0)
        for i, j in itertools.combinations(range(n), 2):
            di, dj = trade_diffs(A.sets, i, j, A.flavor)
            stay += _pair_stay(kind, len(di), len(dj))
        return _pair_prob(n) * stay

    total = Fraction(0)
    for i, j, si, sj, size in realizing_trades(A, B):
        total += _pair_weight(kind, si, sj, size)
    return _pair_prob(n) * total


# ---------------------------------------------------------------- kernel enumeration oracle

def kernel_distribution(A: AdjacencySetRep, kind: ChainKind) -> dict:
    """Exact one-step law from A by enumerating every random choice of the kernel."""
    check_compatible(A, kind)
    n, flavor = A.n, A.flavor
    out = defaultdict(Fraction)
    sets = A.sets

    if kind is ChainKind.SWITCHING:
        entries = _switch_entries(A)
        total = len(entries)
        if total < 2:
            out[A.key()] += 1
            return dict(out)
        w = Fraction(1, total * (total - 1))
        for (x, y), (u, v) in itertools.permutations(entries, 2):
            new = apply_switch(sets, x, y, u, v, flavor)
            out[A.key() if new is None else _key(new, flavor)] += w
        return dict(out)

    if kind.is_global:
        parts = list(enumerate_two_partitions(n))
        for part in parts:
            per_pair = []
            for i, j in part.pairs:
                di, dj = trade_diffs(sets, i, j, flavor)
                pool = sorted(di | dj)
                options = [frozenset(c) for c in itertools.combinations(pool, len(di))]
                per_pair.append([(i, j, keep, Fraction(1, len(options))) for keep in options])
            for choice in itertools.product(*per_pair):
                cur = sets
                p = Fraction(1, len(parts))
                for i, j, keep, q in choice:
                    cur = apply_trade(cur, i, j, keep, flavor)
                    p *= q
                out[_key(cur, flavor)] += p
        return dict(out)

    w = _pair_prob(n)
    for i, j in itertools.combinations(range(n), 2):
        di, dj = trade_diffs(sets, i, j, flavor)
        si, sj = len(di), len(dj)
        if si == 0 or sj == 0:
            out[A.key()] += w
            continue
        pool = sorted(di | dj)
        if kind is ChainKind.ADJUSTED_SWITCHING:
            for k in di:
                for l in dj:
                    keep = (di - {k}) | {l}
                    out[_key(apply_trade(sets, i, j, keep, flavor), flavor)] += w / (si * sj)
            continue
        options = [frozenset(c) for c in itertools.combinations(pool, si)]
        if kind.is_good_shuffle:
            options = [c for c in options if c != di]
        for keep in options:
            out[_key(apply_trade(sets, i, j, keep, flavor), flavor)] += w / len(options)
    return dict(out)


def global_outcomes(A: AdjacencySetRep, pairs) -> set:
    """Distinct states reachable by one global trade on the given pairs (brute force)."""
    per_pair = []
    for i, j in pairs:
        di, dj = trade_diffs(A.sets, i, j, A.flavor)
        pool = sorted(di | dj)
        per_pair.append([(i, j, frozenset(c)) for c in itertools.combinations(pool, len(di))])
    seen = set()
    for choice in itertools.product(*per_pair):
        cur = A.sets
        for i, j, keep in choice:
            cur = apply_trade(cur, i, j, keep, A.flavor)
        seen.add(_key(cur, A.flavor))
    return seen


# ---------------------------------------------------------------- matrices

@dataclass
class TransitionMatrix:
    kind: ChainKind
    space: StateSpace
    exact: list  # rows of Fractions

    @property
    def array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.exact])

    def __len__(self):
        return len(self.exact)


def _candidate_rows(space: StateSpace, kind: ChainKind, a: int) -> list[int]:
    """States that could possibly be one step from state ``a``: cheap filter only."""
    A = space.states[a]
    if kind.is_global or kind is ChainKind.SWITCHING or A.flavor is Flavor.UNDIRECTED:
        return list(range(len(space)))
    out = []
    for b, B in enumerate(space.states):
        nd = sum(1 for x, y in zip(A.sets, B.sets) if x != y)
        if nd == 0 or nd == 2:
            out.append(b)
    return out


def build_transition_matrix(space: StateSpace, kind: ChainKind,
                            cap: int = 5000) -> TransitionMatrix:
    """Closed-form matrix over every state pair, in exact rationals."""
    if len(space) > cap:
        raise TooLarge(f"{len(space)} states exceed the matrix cap {cap}")
    if kind.is_global and space.n > 8:
        raise TooLarge("global kernels enumerate partitions only up to n = 8")
    size = len(space)
    rows = []
    for a in range(size):
        row = [Fraction(0)] * size
        for b in _candidate_rows(space, kind, a):
            row[b] = transition_probability(space.states[a], space.states[b], kind)
        rows.append(row)
    return TransitionMatrix(kind, space, rows)


def verify_symmetry_and_balance(T, tol: float = 1e-12) -> list[tuple[int, int]]:
    """Pairs (x, y), x < y, where p_xy != p_yx; also flags rows not summing to 1.

    Exact for rational matrices; ``tol`` applies to float input. Symmetry with
    a uniform target is detailed balance.
    """
    exact = T.exact if isinstance(T, TransitionMatrix) else T
    size = len(exact)
    bad = []
    rational = size and isinstance(exact[0][0], Fraction)
    for x in range(size):
        for y in range(x + 1, size):
            d = exact[x][y] - exact[y][x]
            if (d != 0) if rational else abs(d) > tol:
                bad.append((x, y))
    for x in range(size):
        s = sum(exact[x])
        if (s != 1) if rational else abs(s - 1) > tol:
            bad.append((x, x))
    return bad


# ---------------------------------------------------------------- stationary law

@dataclass
class StationaryResult:
    pi: np.ndarray
    tv_to_uniform: list
    iterations: int
    lazy: bool = False


def _support(P: np.ndarray):
    off = P.copy()
    np.fill_diagonal(off, 0.0)
    return sparse.csr_matrix(off > 0)


def components_of(P: np.ndarray) -> list[np.ndarray]:
    """Connected components of the one-step reachability graph."""
    if len(P) == 0:
        return []
    ncomp, labels = csgraph.connected_components(_support(P), directed=True, connection="strong")
    return [np.flatnonzero(labels == c) for c in range(ncomp)]


def is_bipartite_chain(P: np.ndarray) -> bool:
    """True when the (connected) chain is periodic with period 2: no self-loop
    probability anywhere and a 2-colourable state graph."""
    if (np.diag(P) > 0).any():
        return False
    adj = _support(P) + _support(P).T
    color = -np.ones(len(P), dtype=int)
    for start in range(len(P)):
        if color[start] >= 0:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj.indices[adj.indptr[x]:adj.indptr[x + 1]]:
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def stationary_distribution(T, tol: float = 1e-12, max_iter: int = 10**6,
                            start: int = 0, lazy: bool = False) -> StationaryResult:
    """Power iteration from a point mass until the TV change drops below ``tol``.

    ``lazy`` iterates (I + P) / 2 instead, which has the same stationary law
    and is aperiodic; it is the fallback for periodic chains.
    """
    P = T.array if isinstance(T, TransitionMatrix) else np.asarray(T, dtype=float)
    size = len(P)
    comps = components_of(P)
    if len(comps) > 1:
        raise NotErgodic(f"state graph has {len(comps)} components", components=comps)
    if not lazy and size > 1 and is_bipartite_chain(P):
        raise NotErgodic("state graph is bipartite (periodic chain)", components=comps,
                         bipartite=True)
    if lazy:
        P = 0.5 * (P + np.eye(size))
    x = np.zeros(size)
    x[start] = 1.0
    u = 1.0 / size
    tv = [0.5 * np.abs(x - u).sum()]
    for it in range(1, max_iter + 1):
        nxt = x @ P
        change = 0.5 * np.abs(nxt - x).sum()
        x = nxt
        tv.append(0.5 * np.abs(x - u).sum())
        if change < tol:
            return StationaryResult(x, tv, it, lazy)
    raise ExactLabError(f"power iteration did not settle within {max_iter} iterations")


def per_component_stationary(T) -> list[tuple[np.ndarray, StationaryResult]]:
    """Stationary law on each component; periodic components use the lazy chain."""
    P = T.array if isinstance(T, TransitionMatrix) else np.asarray(T, dtype=float)
    out = []
    for comp in components_of(P):
        sub = P[np.ix_(comp, comp)]
        lazy = len(comp) > 1 and is_bipartite_chain(sub)
        out.append((comp, stationary_distribution(sub, lazy=lazy)))
    return out


# ---------------------------------------------------------------- components

@dataclass
class ComponentReport:
    count: int
    sizes: list
    expected: int | None
    cycle_sets: list
    equal_sizes: bool
    isomorphic: bool | None

    @property
    def ok(self) -> bool:
        return (self.expected is None or self.count == self.expected) and self.equal_sizes \
            and self.isomorphic is not False


def _flip(sets, triples, mask):
    new = [set(s) for s in sets]
    for bit, (u, v, w) in enumerate(triples):
        if not mask >> bit & 1:
            continue
        arcs = [(x, y) for x, y in itertools.permutations((u, v, w), 2) if y in new[x]]
        for x, y in arcs:
            new[x].discard(y)
        for x, y in arcs:
            new[y].add(x)
    return tuple(frozenset(s) for s in new)


def component_analysis(space: StateSpace, kind: ChainKind,
                       T: TransitionMatrix | None = None) -> ComponentReport:
    """Components of the state graph and, for directed kinds, the 2^k check.

    Isomorphism is checked by reversing induced triangles: the map must send
    each component onto another and preserve every transition probability.
    """
    T = T or build_transition_matrix(space, kind)
    comps = components_of(T.array)
    sizes = sorted(len(c) for c in comps)
    triples, expected, iso = [], None, None
    if space.flavor is Flavor.DIRECTED_SIMPLE:
        triples = detect_induced_cycle_sets(DirectedDegreeSequence.of(space.states[0]))
        expected = 2 ** len(triples)
        if triples:
            iso = _check_isomorphic(space, T, triples)
    return ComponentReport(len(comps), sizes, expected, triples,
                           len(set(sizes)) <= 1, iso)


def _check_isomorphic(space, T, triples) -> bool:
    size = len(space)
    for mask in range(1, 2 ** len(triples)):
        image = []
        for s in space.states:
            key = _key(_flip(s.sets, triples, mask), space.flavor)
            if key not in space.index:
                return False
            image.append(space.index[key])
        if sorted(image) != list(range(size)):
            return False
        for x in range(size):
            for y in range(size):
                if T.exact[x][y] != T.exact[image[x]][image[y]]:
                    return False
    return True


# ---------------------------------------------------------------- statistics

def chi_square_uniformity(counts: Sequence[int]) -> tuple[float, float]:
    """Pearson statistic and p-value of ``counts`` against the uniform law."""
    counts = np.asarray(counts, dtype=float)
    if counts.size < 2:
        return 0.0, 1.0
    if counts.sum() / counts.size < 5:
        raise TooFewSamples(f"expected count {counts.sum() / counts.size:.2f} < 5 per cell")
    res = stats.chisquare(counts)
    return float(res.statistic), float(res.pvalue)


def simulate_row(space: StateSpace, kind: ChainKind, a: int, samples: int, rng=None) -> np.ndarray:
    """Counts of the state reached by ``samples`` independent single steps from state a."""
    chain = Chain(space.states[a], kind, as_stream(rng))
    codes = K.one_step_codes(kind.code, space.flavor.code, chain.rows, chain.deg, chain.cum,
                             space.m, samples, *chain._scratch())
    lookup = {int(c): k for k, c in enumerate(space.codes())}
    uniq, cnt = np.unique(codes, return_counts=True)
    out = np.zeros(len(space), dtype=np.int64)
    for c, k in zip(uniq, cnt):
        if int(c) not in lookup:
            raise ExactLabError(f"simulation left the state space (code {int(c)})")
        out[lookup[int(c)]] += k
    return out


def kernel_deviation(T: TransitionMatrix, counts: np.ndarray, a: int) -> float:
    """Largest |freq - p| / SE over row a; cells with p in {0, 1} must match exactly."""
    samples = counts.sum()
    worst = 0.0
    row = np.array([float(p) for p in T.exact[a]])
    freq = counts / samples
    for b in range(len(row)):
        p = row[b]
        if p == 0.0 or p == 1.0:
            if freq[b] != p:
                return float("inf")
            continue
        se = np.sqrt(p * (1 - p) / samples)
        worst = max(worst, abs(freq[b] - p) / se)
    return worst


# ---------------------------------------------------------------- guarded families

def guarded_instances(flavor: Flavor):
    """Small realisable degree specs, one per isomorphism class of the degree data.

    Undirected: n <= 6, degrees <= 3. Directed: n <= 4, degrees <= 2.
    Bipartite: up to 4 x 4, margins <= 2. Sequences are listed in sorted
    order since relabelling vertices gives an isomorphic chain.
    """
    if flavor is Flavor.UNDIRECTED:
        specs = (d for n in range(2, 7)
                 for d in itertools.combinations_with_replacement(range(3, -1, -1), n)
                 if sum(d) % 2 == 0 and sum(d) > 0)
    elif flavor is Flavor.DIRECTED_SIMPLE:
        pairs = [(a, b) for a in range(2, -1, -1) for b in range(2, -1, -1)]
        specs = (seq for n in range(2, 5)
                 for seq in itertools.combinations_with_replacement(pairs, n)
                 if sum(a for a, _ in seq) == sum(b for _, b in seq) > 0)
    elif flavor is Flavor.BIPARTITE:
        margins = range(2, -1, -1)
        specs = ((rows, cols) for r in range(2, 5) for c in range(1, 5)
                 for rows in itertools.combinations_with_replacement(margins, r)
                 for cols in itertools.combinations_with_replacement(margins, c)
                 if sum(rows) == sum(cols) > 0)
    else:
        raise ValueError(f"no guarded family for {flavor.value}")
    for spec in specs:
        if next(iter_realizations(spec, flavor), None) is not None:
            yield spec
