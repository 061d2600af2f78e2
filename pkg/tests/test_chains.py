from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from curveball.chains import (Chain, ChainKind, IncompatibleKind, TooFewSets, TriangleNotPresent,
                              adjust_cycle_sets, default_cadence, global_trade_step,
                              good_shuffle_trade_step, pre_orient_cycle_sets, run_chain,
                              switch_step, trade_step_bipartite, trade_step_directed,
                              trade_step_undirected)
from curveball.graph_core import (AdjacencySetRep, Flavor, degree_sequence, from_edges,
                                  perturbation_score, validate)
from curveball.rng import Stream

from conftest import random_rep, reps

D, U, B, L = Flavor.DIRECTED_SIMPLE, Flavor.UNDIRECTED, Flavor.BIPARTITE, Flavor.DIRECTED_WITH_LOOPS


def freq(step, rep, trials, seed=0):
    s = Stream(seed)
    return Counter(step(rep, s).key() for _ in range(trials))


def test_kind_parsing():
    assert ChainKind.parse("Good_Shuffle_Directed") is ChainKind.GOOD_SHUFFLE_DIRECTED
    with pytest.raises(IncompatibleKind):
        ChainKind.parse("global-undirected-curveball")
    with pytest.raises(ValueError):
        ChainKind.parse("nonsense")


def test_incompatible_and_too_few(triangle):
    with pytest.raises(IncompatibleKind):
        Chain(triangle, ChainKind.UNDIRECTED_CURVEBALL)
    with pytest.raises(TooFewSets):
        trade_step_bipartite(AdjacencySetRep(B, [{0}], m=2))
    with pytest.raises(IncompatibleKind):
        global_trade_step(from_edges(U, 4, [(0, 1), (2, 3)]))


def test_equal_sets_identity():
    rep = AdjacencySetRep(B, [{0, 2}, {0, 2}], m=3)
    assert freq(trade_step_bipartite, rep, 200) == {rep.key(): 200}
    assert freq(global_trade_step, rep, 200) == {rep.key(): 200}


def test_bipartite_identity_half():
    rep = AdjacencySetRep(B, [{0}, {1}], m=2)
    c = freq(trade_step_bipartite, rep, 20_000)
    assert len(c) == 2
    assert abs(c[rep.key()] / 20_000 - 0.5) < 4 * 0.5 / np.sqrt(20_000)


def test_bipartite_trade_subsets_uniform():
    # A_1 = {1,2,3}, A_2 = {3,4}: pool {1,2,4}, s_i = 2, s_j = 1 -> C(3,2) = 3 outcomes
    # chosen w.p. (1/3) each when this pair is drawn (only pair with n = 2)
    rep = AdjacencySetRep(B, [{0, 1, 2}, {2, 3}], m=4)
    c = freq(trade_step_bipartite, rep, 30_000, 4)
    assert len(c) == 3
    assert stats.chisquare(list(c.values())).pvalue > 1e-3


def test_directed_triangle_frozen(triangle):
    chain = Chain(triangle, ChainKind.DIRECTED_CURVEBALL, 1)
    assert chain.advance(10_000) == 0
    assert chain.state() == triangle
    assert switch_step(triangle, 3) == triangle
    assert switch_step(triangle, 3, adjusted=True) == triangle


def test_directed_switch_as_trade():
    # arcs 0->1 and 2->3 can be switched: trade exchanges 1 and 3 between A_0 and A_2
    rep = from_edges(D, 4, [(0, 1), (2, 3)])
    target = from_edges(D, 4, [(0, 3), (2, 1)])
    seen = {trade_step_directed(rep, Stream(s)).key() for s in range(400)}
    assert target.key() in seen and len(seen) == 2


def test_directed_protected_indices_identity():
    # A_0 = {1}, A_1 = {0}: each set is the other's index, so differences are empty
    rep = from_edges(D, 2, [(0, 1), (1, 0)])
    assert freq(trade_step_directed, rep, 200) == {rep.key(): 200}


def test_undirected_steps_keep_symmetry():
    rep = from_edges(U, 6, [(0, 1), (0, 2), (5, 3), (5, 4), (1, 3)])
    for s in range(300):
        out = trade_step_undirected(rep, Stream(s))
        assert validate(out) == []
        assert degree_sequence(out) == degree_sequence(rep)


def test_undirected_matchings_uniform():
    rep = from_edges(U, 4, [(0, 1), (2, 3)])
    seen = Counter()
    chain = Chain(rep, ChainKind.UNDIRECTED_CURVEBALL, Stream(9))
    for _ in range(100_000):
        chain.step()
        seen[chain.state().key()] += 1
    assert len(seen) == 3
    assert stats.chisquare(list(seen.values())).pvalue > 0.01


def test_switch_on_matchings():
    rep = from_edges(U, 4, [(0, 1), (2, 3)])
    seen = {switch_step(rep, Stream(s)).key() for s in range(300)}
    assert len(seen) == 3


def test_good_shuffle_examples():
    # s_i = s_j = 1: the swap always happens when the only pair is drawn
    rep = AdjacencySetRep(B, [{0}, {1}], m=2)
    assert freq(good_shuffle_trade_step, rep, 300) == {
        AdjacencySetRep(B, [{1}, {0}], m=2).key(): 300}
    # s_i = 1, s_j = 2: two non-identity outcomes, equally likely
    rep = AdjacencySetRep(B, [{0}, {1, 2}], m=3)
    c = freq(good_shuffle_trade_step, rep, 20_000, 2)
    assert rep.key() not in c and len(c) == 2
    assert stats.chisquare(list(c.values())).pvalue > 1e-3
    same = AdjacencySetRep(B, [{0}, {0}], m=1)
    assert freq(good_shuffle_trade_step, same, 100) == {same.key(): 100}


def test_global_n2_matches_single_trade():
    rep = AdjacencySetRep(B, [{0, 1}, {2}], m=3)
    a = freq(global_trade_step, rep, 20_000, 1)
    b = freq(trade_step_bipartite, rep, 20_000, 2)
    assert set(a) == set(b) and len(a) == 3
    table = np.array([[a[k] for k in a], [b[k] for k in a]])
    assert stats.chi2_contingency(table).pvalue > 1e-3


def test_pre_orient():
    tri = AdjacencySetRep(D, [{1}, {2}, {0}])
    c = Counter(pre_orient_cycle_sets(tri, [(0, 1, 2)], Stream(s)).key() for s in range(2000))
    assert len(c) == 2 and abs(c[tri.key()] - 1000) < 4 * np.sqrt(500)
    assert pre_orient_cycle_sets(tri, [], 1) == tri
    with pytest.raises(TriangleNotPresent):
        pre_orient_cycle_sets(from_edges(D, 3, [(0, 1), (1, 2)]), [(0, 1, 2)], 1)


def test_two_disjoint_triangles_four_ways():
    rep = from_edges(D, 6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    c = Counter(pre_orient_cycle_sets(rep, [(0, 1, 2), (3, 4, 5)], Stream(s)).key()
                for s in range(4000))
    assert len(c) == 4
    assert stats.chisquare(list(c.values())).pvalue > 1e-3


def test_adjust_finds_forced_triangle():
    # triangle plus two isolated vertices: the triangle is forced
    rep = from_edges(D, 5, [(1, 3), (3, 4), (4, 1)])
    c = Counter(adjust_cycle_sets(rep, Stream(s)).key() for s in range(2000))
    assert len(c) == 2


def test_run_chain_contract():
    rep = random_rep(D, 12, 0.3, 1)
    assert run_chain(rep, ChainKind.DIRECTED_CURVEBALL, 0, 1) == rep
    a = run_chain(rep, "directed-curveball", 500, Stream(4))
    b = run_chain(rep, ChainKind.DIRECTED_CURVEBALL, 500, Stream(4))
    assert a == b and a != rep
    seen = []
    run_chain(rep, ChainKind.DIRECTED_CURVEBALL, 25, 1, lambda t, r: seen.append(t), every=10)
    assert seen == [0, 10, 20, 25]
    with pytest.raises(IncompatibleKind):
        run_chain(rep, ChainKind.CURVEBALL, 10, 1)
    with pytest.raises(IncompatibleKind):
        run_chain(random_rep(U, 5, 0.5, 1), ChainKind.SWITCHING, 10, 1, adjusted=True)


def test_observer_matches_advance():
    rep = random_rep(B, 10, 0.4, 2, m=7)
    a = run_chain(rep, ChainKind.GLOBAL_CURVEBALL, 300, Stream(8))
    b = run_chain(rep, ChainKind.GLOBAL_CURVEBALL, 300, Stream(8), lambda t, r: None, every=7)
    assert a == b


def test_default_cadence():
    assert default_cadence(100_000) == 100 and default_cadence(1000) == 10


@settings(max_examples=40, deadline=None)
@given(reps(max_n=9), st.data())
def test_degrees_and_validity_preserved(rep, data):
    kinds = [k for k in ChainKind if rep.flavor in k.flavors]
    kind = data.draw(st.sampled_from(kinds))
    chain = Chain(rep, kind, Stream(data.draw(st.integers(0, 10**6))))
    for _ in range(10):
        chain.advance(1000)
        out = chain.state()
        assert validate(out) == []
        assert degree_sequence(out) == degree_sequence(rep)
    rows0, deg0 = rep.to_arrays()
    assert chain.perturbation(rows0, deg0) == perturbation_score(rep, out)
