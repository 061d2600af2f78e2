"""Directed degree sequences: corrected Ferrers matrices and induced cycle sets.

A directed degree sequence is a list of ``(a_i, b_i)`` pairs with ``a_i`` the
in-degree and ``b_i`` the out-degree of vertex i. Rows of the corrected
Ferrers matrix carry the out-degrees; its column sums are compared against
the in-degrees.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph_core import AdjacencySetRep, Flavor, degree_sequence


class DegreeSequenceError(ValueError):
    pass


class DegreeTooLarge(DegreeSequenceError):
    pass


class NotRealizable(DegreeSequenceError):
    pass


@dataclass(frozen=True)
class DirectedDegreeSequence:
    pairs: tuple  # (in, out) per vertex

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        if any(a < 0 or b < 0 for a, b in pairs):
            raise DegreeSequenceError("degrees must be non-negative")
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def in_degrees(self) -> np.ndarray:
        return np.array([a for a, _ in self.pairs], dtype=np.int64)

    @property
    def out_degrees(self) -> np.ndarray:
        return np.array([b for _, b in self.pairs], dtype=np.int64)

    @classmethod
    def of(cls, rep: AdjacencySetRep) -> "DirectedDegreeSequence":
        if rep.flavor is not Flavor.DIRECTED_SIMPLE:
            raise DegreeSequenceError(f"need a directed graph, got {rep.flavor.value}")
        return cls(degree_sequence(rep).pairs)


@dataclass(frozen=True)
class FerrersProfile:
    """Sorted order, column sums f and partial sums s_0..s_n of f - a."""

    order: np.ndarray         # order[p] = original index at sorted position p
    column_sums: np.ndarray   # f_1..f_n
    partial_sums: np.ndarray  # s_0..s_n, length n + 1
    in_sorted: np.ndarray
    out_sorted: np.ndarray


def sort_order(seq: DirectedDegreeSequence) -> np.ndarray:
    """Stable non-increasing lexicographic order of the (a, b) pairs."""
    a = seq.in_degrees
    b = seq.out_degrees
    if len(a) == 0:
        return np.zeros(0, dtype=np.int64)
    key = a * (int(b.max()) + 1) + b
    return np.argsort(-key, kind="stable")


def corrected_ferrers_profile(seq: DirectedDegreeSequence) -> FerrersProfile:
    """Column sums of the corrected Ferrers matrix without building it.

    Row p (1-based, sorted) holds its b_p ones in the leftmost columns,
    skipping the diagonal. Ones that would spill past column n are dropped,
    which can only happen for an unrealisable row (b_p = n).
    """
    n = seq.n
    order = sort_order(seq)
    a = seq.in_degrees[order]
    b = seq.out_degrees[order]
    if n and int(b.max()) > n:
        bad = int(order[int(np.argmax(b))])
        raise DegreeTooLarge(f"vertex {bad} has out-degree {int(b.max())} > n = {n}")
    p = np.arange(1, n + 1)
    # row p covers columns 1..b_p when b_p < p, else 1..b_p+1 minus column p
    right = np.where(b < p, b, np.minimum(b + 1, n))
    diff = np.zeros(n + 2, dtype=np.int64)
    diff[1] = n
    diff -= np.bincount(right + 1, minlength=n + 2)
    skip = p[b >= p]
    diff -= np.bincount(skip, minlength=n + 2)
    diff += np.bincount(skip + 1, minlength=n + 2)
    f = np.cumsum(diff)[1 : n + 1]
    s = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(f - a, out=s[1:])
    return FerrersProfile(order, f, s, a, b)


def is_realizable_directed(seq: DirectedDegreeSequence) -> bool:
    """Chen-Fulkerson-Ryser test on the corrected Ferrers matrix."""
    if int(seq.in_degrees.sum()) != int(seq.out_degrees.sum()):
        return False
    try:
        prof = corrected_ferrers_profile(seq)
    except DegreeTooLarge:
        return False
    return bool((prof.partial_sums >= 0).all())


def detect_induced_cycle_sets(seq: DirectedDegreeSequence) -> list[tuple[int, int, int]]:
    """Vertex triples (original 0-based labels) that form a directed 3-cycle
    in every realisation of ``seq``.

    Linear scan over the sorted sequence: three equal consecutive pairs whose
    out-degree equals the 1-based sorted position of the first, with partial
    sums (0, 1, 1, 0) around them.
    """
    if not is_realizable_directed(seq):
        raise NotRealizable("degree sequence has no directed realisation")
    prof = corrected_ferrers_profile(seq)
    a, b, s, order = prof.in_sorted, prof.out_sorted, prof.partial_sums, prof.order
    n = seq.n
    found = []
    p = 0
    while p + 2 < n:
        i = p + 1  # 1-based sorted position
        if (b[p] == i and a[p] == a[p + 1] == a[p + 2] and b[p] == b[p + 1] == b[p + 2]
                and s[i - 1] == 0 and s[i] == 1 and s[i + 1] == 1 and s[i + 2] == 0):
            found.append(tuple(sorted(int(order[q]) for q in (p, p + 1, p + 2))))
            p += 3
        else:
            p += 1
    return found


# ---------------------------------------------------------------- file format

def parse_degree_file(text: str) -> list[tuple[int, ...]]:
    """Rows of whitespace-separated integers, ``#`` comments ignored."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(tuple(int(x) for x in line.split()))
    return rows


def read_directed_sequence(path) -> DirectedDegreeSequence:
    rows = parse_degree_file(Path(path).read_text())
    if any(len(r) != 2 for r in rows):
        raise DegreeSequenceError("directed degree file needs 'a_i b_i' on every line")
    return DirectedDegreeSequence(rows)
