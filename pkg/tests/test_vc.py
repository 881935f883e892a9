import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slicevc.core import BipartiteGraph, EdgeColoredBipartiteGraph, GeneralThreeGraph, Graph, TripartiteThreeGraph
from slicevc.harness.generators import gen_class_based, gen_threshold
from slicevc.harness.oracles import brute_svc, brute_vc
from slicevc.vc import (
    BUDGET_EXHAUSTED,
    find_uk_copy,
    pair_neighborhood_graph,
    slicewise_vc,
    uk_pattern_graph,
    vc_dimension,
)


def random_bipartite(nA, nB, p, seed):
    return BipartiteGraph(np.random.default_rng(seed).random((nA, nB)) < p)


def as_ecg(G: BipartiteGraph) -> EdgeColoredBipartiteGraph:
    return EdgeColoredBipartiteGraph(G.adj.astype(np.int8), 1)


def check_witness(G, res):
    """Every witness vertex traces exactly its subset on the shattered set."""
    adj = G.full_adjacency()
    lab = [(G.names[0], i) for i in range(G.nA)] + [(G.names[1], j) for j in range(G.nB)] if isinstance(G, BipartiteGraph) else [("V", i) for i in range(G.n)]
    idx = {v: i for i, v in enumerate(lab)}
    cols = [idx[v] for v in res.witness.shattered]
    assert len(res.witness.witnesses) == 1 << res.value
    for S, w in res.witness.witnesses.items():
        row = adj[idx[w]]
        assert {i for i, c in enumerate(cols) if row[c]} == set(S)


# --- vc_dimension --------------------------------------------------------------


def test_vc_of_uk():
    res = vc_dimension(uk_pattern_graph(2), 3)
    assert res.value == 2 and not res.capped
    check_witness(uk_pattern_graph(2), res)


def test_vc_edgeless_and_complete():
    assert vc_dimension(BipartiteGraph(np.zeros((4, 4), bool)), 5).value == 0
    K5 = Graph(~np.eye(5, dtype=bool))
    assert vc_dimension(K5, 5).value == 1 == brute_vc(K5)


def test_vc_capped_flag():
    res = vc_dimension(uk_pattern_graph(3), 2)
    assert res.value == 2 and res.capped
    assert vc_dimension(uk_pattern_graph(3), 0).value == 0


@settings(max_examples=60)
@given(st.integers(1, 14), st.integers(1, 14), st.floats(0.1, 0.9), st.integers(0, 2**32))
def test_vc_matches_subset_enumeration(nA, nB, p, seed):
    G = random_bipartite(nA, nB, p, seed)
    res = vc_dimension(G, nA + nB)
    assert res.value == brute_vc(G)
    if res.value:
        check_witness(G, res)


@settings(max_examples=40)
@given(st.integers(1, 10), st.integers(1, 10), st.integers(0, 2**32))
def test_isolated_vertex_does_not_change_vc(nA, nB, seed):
    G = random_bipartite(nA, nB, 0.5, seed)
    padded = BipartiteGraph(np.vstack([G.adj, np.zeros((1, nB), bool)]))
    assert vc_dimension(G, 20).value == vc_dimension(padded, 20).value


def test_vc_general_graph_matches_oracle():
    rng = np.random.default_rng(4)
    for _ in range(10):
        a = np.triu(rng.random((12, 12)) < 0.5, 1)
        G = Graph(a | a.T)
        assert vc_dimension(G, 12).value == brute_vc(G)


# --- slicewise ------------------------------------------------------------------


def test_svc_examples():
    assert slicewise_vc(TripartiteThreeGraph(np.zeros((3, 3, 3), bool)), 4).value == 0
    full = TripartiteThreeGraph(np.ones((3, 3, 3), bool))
    assert slicewise_vc(full, 4).value == 1 == brute_svc(full)


def test_svc_class_based_at_most_d():
    cb = gen_class_based(8, 3, 0, seed=2)
    v = slicewise_vc(cb.graph, 4).value
    assert v <= 3 and v == brute_svc(cb.graph)


@pytest.mark.parametrize("seed", range(3))
def test_svc_class_based_n60(seed):
    assert slicewise_vc(gen_class_based(60, 3, 0, seed=seed).graph, 4).value <= 3


def test_svc_threshold_low():
    assert slicewise_vc(gen_threshold(40, seed=1), 3).value <= 2


def test_svc_general_matches_oracle():
    rng = np.random.default_rng(9)
    edges = [e for e in itertools.combinations(range(7), 3) if rng.random() < 0.4]
    H = GeneralThreeGraph(7, edges)
    assert slicewise_vc(H, 7).value == brute_svc(H)


@settings(max_examples=15)
@given(st.integers(0, 2**32))
def test_svc_below_pair_neighborhood_vc(seed):
    rng = np.random.default_rng(seed)
    H = TripartiteThreeGraph(rng.random((3, 3, 3)) < 0.5)
    assert slicewise_vc(H, 10).value <= vc_dimension(pair_neighborhood_graph(H), 10).value


# --- U(k) search ---------------------------------------------------------------------


def test_uk_none_when_second_color_empty():
    G = EdgeColoredBipartiteGraph(np.ones((3, 8), np.int8), 1)
    assert find_uk_copy(G, 1, 0, 1) is None


def test_uk_found_in_canonical_pattern():
    G = as_ecg(uk_pattern_graph(2))
    w = find_uk_copy(G, 1, 0, 2)
    assert w is not None and w is not BUDGET_EXHAUSTED and w.check(G)


def test_uk_absent_in_blowup_of_small_base():
    base = np.array([[1, 0, 1, 0], [0, 1, 1, 0], [1, 1, 0, 0], [0, 0, 1, 1]], bool)
    lab = np.repeat(np.arange(4), 10)
    G = as_ecg(BipartiteGraph(base[np.ix_(lab, lab)]))
    assert find_uk_copy(G, 1, 0, 5) is None


def test_uk_errors_and_budget():
    G = as_ecg(uk_pattern_graph(3))
    with pytest.raises(ValueError):
        find_uk_copy(G, 0, 5, 2)
    with pytest.raises(ValueError):
        find_uk_copy(G, 1, 1, 2)
    assert find_uk_copy(G, 1, 0, 3, budget=1) is BUDGET_EXHAUSTED


def test_uk_right_side_in_a():
    G = as_ecg(uk_pattern_graph(2).transpose())
    w = find_uk_copy(G, 1, 0, 2)
    assert w.side == "A" and w.check(G)


def _cross_shatters(adj, k):
    # some k rows whose traces over the columns realise every subset
    rows = range(adj.shape[0])
    for S in itertools.combinations(rows, k):
        traces = {tuple(adj[list(S), j]) for j in range(adj.shape[1])}
        if len(traces) == 1 << k:
            return True
    return False


@settings(max_examples=40)
@given(st.integers(2, 6), st.integers(2, 6), st.integers(0, 2**32), st.sampled_from([2, 3]))
def test_uk_agrees_with_cross_shattering(nA, nB, seed, k):
    # a same-side vertex may witness the empty trace, so VC >= k does not force a copy
    G = random_bipartite(nA, nB, 0.5, seed)
    found = find_uk_copy(as_ecg(G), 1, 0, k)
    assert found is not BUDGET_EXHAUSTED
    assert (found is not None) == (_cross_shatters(G.adj, k) or _cross_shatters(G.adj.T, k))
    if found is not None:
        assert found.check(as_ecg(G))
        assert vc_dimension(G, k).value >= k
