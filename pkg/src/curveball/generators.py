"""Random starting graphs for mixing experiments."""
from __future__ import annotations

import numpy as np

from .graph_core import AdjacencySetRep, Flavor
from .rng import Stream


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, Stream):
        return np.random.default_rng(rng.u32())
    return np.random.default_rng(rng)


def gen_erdos_renyi(n: int, p: float, directed: bool = True, rng=None,
                    self_loops: bool = False) -> AdjacencySetRep:
    """G(n, p): every admissible ordered (directed) or unordered pair is an
    edge independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    g = _generator(rng)
    hit = g.random((n, n)) < p
    if directed:
        if not self_loops:
            np.fill_diagonal(hit, False)
        flavor = Flavor.DIRECTED_WITH_LOOPS if self_loops else Flavor.DIRECTED_SIMPLE
    else:
        hit = np.triu(hit, k=1)
        hit = hit | hit.T
        flavor = Flavor.UNDIRECTED
    return AdjacencySetRep(flavor, [np.flatnonzero(row) for row in hit])


def gen_preferential_attachment(n: int, m: int, directed: bool = True,
                                rng=None) -> AdjacencySetRep:
    """Albert-Barabasi growth.

    Starts from a clique on the first m vertices (arcs point from the higher
    to the lower index); every later vertex links to m distinct earlier
    vertices drawn with probability proportional to degree + 1, using
    in-degree for directed graphs. Directed arcs point from new to old.
    """
    if m < 1 or n <= m:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    g = _generator(rng)
    out = [set() for _ in range(n)]
    weight = np.zeros(n)
    for v in range(1, m):
        for u in range(v):
            out[v].add(u)
            weight[u] += 1
            if not directed:
                weight[v] += 1
    for v in range(m, n):
        w = weight[:v] + 1.0
        targets = g.choice(v, size=m, replace=False, p=w / w.sum())
        for u in targets:
            out[v].add(int(u))
            weight[u] += 1
        if not directed:
            weight[v] += m
    if directed:
        return AdjacencySetRep(Flavor.DIRECTED_SIMPLE, out)
    sym = [set(s) for s in out]
    for v, s in enumerate(out):
        for u in s:
            sym[u].add(v)
    return AdjacencySetRep(Flavor.UNDIRECTED, sym)
