"""Adjacency-set representation of the four graph flavors, plus edge-list I/O.

Indices are 0-based in the Python API and 1-based in edge-list files and in
:class:`EdgeList`, which is the I/O type.
"""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels as K


class GraphError(ValueError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoopForbidden(GraphError):
    pass


class IndexOutOfRange(GraphError):
    pass


class MismatchedShape(GraphError):
    pass


class Flavor(enum.Enum):
    BIPARTITE = "bipartite"
    DIRECTED_WITH_LOOPS = "loops"
    DIRECTED_SIMPLE = "directed"
    UNDIRECTED = "undirected"

    @property
    def code(self) -> int:
        return _FLAVOR_CODES[self]

    @property
    def allows_loops(self) -> bool:
        return self in (Flavor.BIPARTITE, Flavor.DIRECTED_WITH_LOOPS)

    @classmethod
    def parse(cls, text: str) -> "Flavor":
        t = text.strip().lower().replace("_", "-")
        aliases = {"directed-with-loops": "loops", "digraph": "directed", "graph": "undirected",
                   "directed-simple": "directed"}
        return cls(aliases.get(t, t))


_FLAVOR_CODES = {
    Flavor.BIPARTITE: K.BIPARTITE,
    Flavor.DIRECTED_WITH_LOOPS: K.LOOPS,
    Flavor.DIRECTED_SIMPLE: K.DIRECTED,
    Flavor.UNDIRECTED: K.UNDIRECTED,
}


@dataclass(frozen=True)
class AdjacencySetRep:
    """Sets A_0..A_{n-1} of out-/neighbour indices.

    For bipartite graphs ``m`` is the size of the column universe; otherwise
    ``m == n``. Construction does not check flavor invariants, see
    :func:`validate`.
    """

    flavor: Flavor
    sets: tuple
    m: int = -1

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(int(x) for x in s) for s in self.sets))
        if self.flavor is not Flavor.BIPARTITE or self.m < 0:
            if self.flavor is not Flavor.BIPARTITE:
                object.__setattr__(self, "m", len(self.sets))
            else:
                object.__setattr__(self, "m", max((max(s) + 1 for s in self.sets if s), default=0))

    @property
    def n(self) -> int:
        return len(self.sets)

    def edges(self) -> list[tuple[int, int]]:
        """Sorted 0-based edge list; undirected edges appear once with u < v."""
        und = self.flavor is Flavor.UNDIRECTED
        out = []
        for i, s in enumerate(self.sets):
            for j in s:
                if und and j <= i:
                    continue
                out.append((i, j))
        out.sort()
        return out

    def key(self) -> tuple:
        """Canonical hashable state key."""
        return tuple(self.edges())

    def one_based(self) -> list[set[int]]:
        return [{x + 1 for x in s} for s in self.sets]

    def transpose(self) -> "AdjacencySetRep":
        """Column-indexed view of a bipartite graph (rows and columns swapped)."""
        if self.flavor is not Flavor.BIPARTITE:
            raise GraphError("transpose is only defined for bipartite graphs")
        cols = [set() for _ in range(self.m)]
        for i, s in enumerate(self.sets):
            for j in s:
                cols[j].add(i)
        return AdjacencySetRep(Flavor.BIPARTITE, cols, m=self.n)

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded ``rows[n, width]`` (-1 filled) and ``deg[n]`` int64 arrays."""
        deg = np.array([len(s) for s in self.sets], dtype=np.int64)
        width = max(int(deg.max(initial=0)), 1)
        rows = np.full((self.n, width), -1, dtype=np.int64)
        for i, s in enumerate(self.sets):
            rows[i, : len(s)] = sorted(s)
        return rows, deg

    @classmethod
    def from_arrays(cls, flavor: Flavor, rows: np.ndarray, deg: np.ndarray, m: int | None = None):
        sets = [rows[i, : deg[i]].tolist() for i in range(len(deg))]
        return cls(flavor, sets, m=-1 if m is None else m)

    def __str__(self):
        body = ", ".join(f"A{i}={sorted(s)}" for i, s in enumerate(self.sets))
        return f"{self.flavor.value}[{body}]"


@dataclass(frozen=True)
class EdgeList:
    flavor: Flavor
    n: int
    edges: tuple
    m: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.flavor is not Flavor.BIPARTITE:
            object.__setattr__(self, "m", self.n)
        elif self.m is None:
            raise GraphError("bipartite edge list needs the column count m")


@dataclass(frozen=True)
class DegreeSequenceView:
    """Row (out-) degrees and column (in-) degrees.

    For bipartite graphs the two tuples have lengths n and m; for undirected
    graphs they coincide.
    """

    flavor: Flavor
    out_degrees: tuple
    in_degrees: tuple

    @property
    def pairs(self) -> tuple:
        """(in, out) pairs per vertex, the ``(a_i, b_i)`` convention."""
        return tuple(zip(self.in_degrees, self.out_degrees))

    @property
    def degrees(self) -> tuple:
        return self.out_degrees


class Violation(NamedTuple):
    kind: str
    where: tuple

    def __str__(self):
        return f"{self.kind}{self.where}"


def from_edge_list(el: EdgeList) -> AdjacencySetRep:
    flavor = el.flavor
    sets = [set() for _ in range(el.n)]
    for u, v in el.edges:
        if not (1 <= u <= el.n and 1 <= v <= el.m):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside 1..{el.n} x 1..{el.m}")
        if u == v and not flavor.allows_loops:
            raise SelfLoopForbidden(f"self-loop ({u}, {v}) not allowed for {flavor.value}")
        a, b = u - 1, v - 1
        if b in sets[a]:
            raise DuplicateEdge(f"edge ({u}, {v}) given twice")
        sets[a].add(b)
        if flavor is Flavor.UNDIRECTED:
            sets[b].add(a)
    return AdjacencySetRep(flavor, sets, m=el.m)


def to_edge_list(rep: AdjacencySetRep) -> EdgeList:
    edges = [(u + 1, v + 1) for u, v in rep.edges()]
    return EdgeList(rep.flavor, rep.n, tuple(edges), m=rep.m)


def degree_sequence(rep: AdjacencySetRep) -> DegreeSequenceView:
    out = tuple(len(s) for s in rep.sets)
    if rep.flavor is Flavor.UNDIRECTED:
        return DegreeSequenceView(rep.flavor, out, out)
    indeg = [0] * rep.m
    for s in rep.sets:
        for j in s:
            indeg[j] += 1
    return DegreeSequenceView(rep.flavor, out, tuple(indeg))


def validate(rep: AdjacencySetRep) -> list[Violation]:
    """All flavor-invariant violations of ``rep`` (empty when valid)."""
    report = []
    for i, s in enumerate(rep.sets):
        for j in sorted(s):
            if not 0 <= j < rep.m:
                report.append(Violation("IndexOutOfRange", (i, j)))
                continue
            if i == j and not rep.flavor.allows_loops:
                report.append(Violation("SelfLoop", (i,)))
            if rep.flavor is Flavor.UNDIRECTED and i not in rep.sets[j]:
                report.append(Violation("SymmetryViolation", (i, j)))
    return report


def _check_same_shape(a: AdjacencySetRep, b: AdjacencySetRep):
    if a.flavor is not b.flavor or a.n != b.n or a.m != b.m:
        raise MismatchedShape(f"cannot compare {a.flavor.value} {a.n}x{a.m} "
                              f"with {b.flavor.value} {b.n}x{b.m}")
    if degree_sequence(a) != degree_sequence(b):
        raise MismatchedShape("degree sequences differ")


def perturbation_score(initial: AdjacencySetRep, current: AdjacencySetRep) -> float:
    """Fraction of the initial edges that are absent from ``current``."""
    _check_same_shape(initial, current)
    e0 = set(initial.edges())
    if not e0:
        return 0.0
    return len(e0 - set(current.edges())) / len(e0)


# ---------------------------------------------------------------- file format

_HEADER = "%"


def parse_edge_list(text: str) -> EdgeList:
    flavor = None
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith(_HEADER):
            parts = line[1:].split()
            if not 2 <= len(parts) <= 3:
                raise GraphError(f"line {lineno}: header must be '% flavor n [m]'")
            flavor = Flavor.parse(parts[0])
            n = int(parts[1])
            m = int(parts[2]) if len(parts) == 3 else None
            continue
        if flavor is None:
            raise GraphError(f"line {lineno}: edge before '% flavor n [m]' header")
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if flavor is None:
        raise GraphError("missing '% flavor n [m]' header")
    if flavor is Flavor.BIPARTITE and m is None:
        raise GraphError("bipartite header needs column count: '% bipartite n m'")
    return EdgeList(flavor, n, tuple(edges), m=m)


def format_edge_list(el: EdgeList) -> str:
    buf = io.StringIO()
    head = f"% {el.flavor.value} {el.n}"
    if el.flavor is Flavor.BIPARTITE:
        head += f" {el.m}"
    buf.write(head + "\n")
    edges = sorted(el.edges)
    if el.flavor is Flavor.UNDIRECTED:
        edges = sorted((min(u, v), max(u, v)) for u, v in edges)
    for u, v in edges:
        buf.write(f"{u} {v}\n")
    return buf.getvalue()


def read_graph(path) -> AdjacencySetRep:
    return from_edge_list(parse_edge_list(Path(path).read_text()))


def write_graph(rep: AdjacencySetRep, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_edge_list(to_edge_list(rep)))


def from_edges(flavor: Flavor, n: int, edges: Iterable[tuple[int, int]], m: int | None = None):
    """Build a rep from 0-based edges (convenience for code and tests)."""
    return from_edge_list(EdgeList(flavor, n, tuple((u + 1, v + 1) for u, v in edges), m=m))
