import pytest
from hypothesis import given, settings

from curveball.graph_core import (AdjacencySetRep, DuplicateEdge, EdgeList, Flavor,
                                  IndexOutOfRange, MismatchedShape, SelfLoopForbidden,
                                  degree_sequence, format_edge_list, from_edge_list, from_edges,
                                  parse_edge_list, perturbation_score, read_graph, to_edge_list,
                                  validate, write_graph)

from conftest import reps

D, U, B, L = Flavor.DIRECTED_SIMPLE, Flavor.UNDIRECTED, Flavor.BIPARTITE, Flavor.DIRECTED_WITH_LOOPS


def test_from_edge_list_directed_cycle():
    rep = from_edge_list(EdgeList(D, 3, ((1, 2), (2, 3), (3, 1))))
    assert rep.one_based() == [{2}, {3}, {1}]


def test_from_edge_list_undirected_symmetric():
    rep = from_edge_list(EdgeList(U, 4, ((1, 2), (3, 4))))
    assert rep.one_based() == [{2}, {1}, {4}, {3}]


@pytest.mark.parametrize("el, exc", [
    (EdgeList(D, 3, ((2, 2),)), SelfLoopForbidden),
    (EdgeList(U, 3, ((1, 1),)), SelfLoopForbidden),
    (EdgeList(D, 3, ((1, 2), (1, 2))), DuplicateEdge),
    (EdgeList(U, 3, ((1, 2), (2, 1))), DuplicateEdge),
    (EdgeList(D, 3, ((1, 4),)), IndexOutOfRange),
    (EdgeList(B, 2, ((1, 3),), m=2), IndexOutOfRange),
])
def test_from_edge_list_errors(el, exc):
    with pytest.raises(exc, match=r"\("):
        from_edge_list(el)


def test_loops_flavors_accept_diagonal():
    assert from_edge_list(EdgeList(L, 2, ((1, 1),))).one_based() == [{1}, set()]
    assert from_edge_list(EdgeList(B, 2, ((2, 2),), m=2)).one_based() == [set(), {2}]


def test_to_edge_list():
    rep = AdjacencySetRep(D, [{1}, {2}, {0}])
    assert to_edge_list(rep).edges == ((1, 2), (2, 3), (3, 1))
    assert to_edge_list(AdjacencySetRep(D, [set(), set(), set()])).edges == ()
    assert to_edge_list(AdjacencySetRep(U, [{1}, {0}])).edges == ((1, 2),)


def test_degree_sequence_examples(triangle):
    assert degree_sequence(triangle).pairs == ((1, 1),) * 3
    star = AdjacencySetRep(U, [{1, 2, 3}, {0}, {0}, {0}])
    assert degree_sequence(star).degrees == (3, 1, 1, 1)
    bip = AdjacencySetRep(B, [{0, 1}, {1, 2}], m=3)
    view = degree_sequence(bip)
    assert view.out_degrees == (2, 2) and view.in_degrees == (1, 2, 1)


def test_validate():
    bad = AdjacencySetRep(U, [{1}, set()])
    assert [(v.kind, v.where) for v in validate(bad)] == [("SymmetryViolation", (0, 1))]
    loop = AdjacencySetRep(D, [set(), set(), {2}])
    assert [(v.kind, v.where) for v in validate(loop)] == [("SelfLoop", (2,))]
    assert validate(AdjacencySetRep(U, [{1}, {0}])) == []


def test_perturbation_examples(triangle):
    assert perturbation_score(triangle, triangle) == 0.0
    rev = AdjacencySetRep(D, [{2}, {0}, {1}])
    assert perturbation_score(triangle, rev) == 1.0
    a = from_edges(U, 4, [(0, 1), (2, 3)])
    b = from_edges(U, 4, [(0, 2), (1, 3)])
    assert perturbation_score(a, b) == 1.0
    half = from_edges(U, 4, [(0, 1), (2, 3)])
    assert perturbation_score(a, half) == 0.0


def test_perturbation_mismatch(triangle):
    with pytest.raises(MismatchedShape):
        perturbation_score(triangle, AdjacencySetRep(U, [{1}, {0}, set()]))
    with pytest.raises(MismatchedShape):
        perturbation_score(triangle, AdjacencySetRep(D, [{1, 2}, set(), {0}]))


def test_transpose_roundtrip():
    bip = AdjacencySetRep(B, [{0, 1}, {1, 2}], m=3)
    t = bip.transpose()
    assert t.n == 3 and t.m == 2 and t.one_based() == [{1}, {1, 2}, {2}]
    assert t.transpose() == bip


def test_parse_format(tmp_path):
    text = "# comment\n% directed 3\n3 1\n1 2\n\n2 3\n"
    el = parse_edge_list(text)
    assert format_edge_list(el) == "% directed 3\n1 2\n2 3\n3 1\n"
    path = tmp_path / "g.el"
    write_graph(from_edge_list(el), path)
    assert path.read_bytes() == b"% directed 3\n1 2\n2 3\n3 1\n"
    assert read_graph(path) == from_edge_list(el)


def test_parse_bipartite_needs_m():
    with pytest.raises(ValueError):
        parse_edge_list("% bipartite 2\n1 1\n")
    with pytest.raises(ValueError):
        parse_edge_list("1 2\n")


@settings(max_examples=150, deadline=None)
@given(reps())
def test_roundtrip_property(rep):
    el = to_edge_list(rep)
    assert from_edge_list(parse_edge_list(format_edge_list(el))) == rep
    assert to_edge_list(from_edge_list(el)) == el
    assert validate(rep) == []


@settings(max_examples=100, deadline=None)
@given(reps(), reps())
def test_perturbation_symmetric_when_degrees_match(a, b):
    assert perturbation_score(a, a) == 0.0
    if a.flavor is b.flavor and a.n == b.n and a.m == b.m and \
            degree_sequence(a) == degree_sequence(b):
        assert perturbation_score(a, b) == perturbation_score(b, a)
