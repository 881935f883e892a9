from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slicevc.core import BipartiteGraph, EdgeColoredBipartiteGraph
from slicevc.graphreg import greedy_cover, homogeneous_equipartition, packing_cluster, verify_cover, verify_packing
from slicevc.harness.generators import gen_blowup_graph
from slicevc.partitions import is_equipartition


def ecg(colors):
    return EdgeColoredBipartiteGraph(np.asarray(colors, dtype=np.int8), 2)


# --- packing ------------------------------------------------------------------------


def test_packing_identical_rows():
    res = packing_cluster(ecg(np.tile([0, 1, 1, 0], (5, 1))), Fraction(1, 10), Fraction(1, 10))
    assert res.m == 1 and res.exceptional == [] and verify_packing(ecg(np.tile([0, 1, 1, 0], (5, 1))), res) == []


def test_packing_two_far_classes():
    rows = [[1] * 10 + [0] * 10] * 4 + [[0] * 10 + [1] * 10] * 4
    G = ecg(rows)
    res = packing_cluster(G, Fraction(1, 5), Fraction(1, 10))
    assert res.m == 2
    assert sorted(map(sorted, res.classes())) == [[0, 1, 2, 3], [4, 5, 6, 7]]


def test_packing_zero_eps_error_row_is_exceptional():
    C = np.zeros((3, 6), dtype=np.int8)
    C[1, 2] = 2
    res = packing_cluster(ecg(C), Fraction(1, 10), Fraction(0))
    assert res.exceptional == [1] and res.assignment[1] == -1


def test_packing_needs_three_colors():
    with pytest.raises(ValueError):
        packing_cluster(EdgeColoredBipartiteGraph(np.zeros((2, 2), np.int8), 1), Fraction(1, 2), Fraction(1, 2))


@settings(max_examples=40)
@given(st.integers(1, 20), st.integers(1, 20), st.integers(0, 2**32), st.sampled_from([Fraction(1, 20), Fraction(1, 5), Fraction(1, 2)]))
def test_packing_invariants_random(nA, nB, seed, delta):
    rng = np.random.default_rng(seed)
    C = rng.choice(3, size=(nA, nB), p=[0.45, 0.45, 0.1])
    G = ecg(C)
    res = packing_cluster(G, delta, Fraction(1, 25))
    assert verify_packing(G, res) == []


# --- greedy cover ----------------------------------------------------------------------


def test_cover_empty_graph():
    G = BipartiteGraph(np.zeros((16, 16), bool))
    cov = greedy_cover(G, Fraction(1, 16))
    assert cov.t == 0 and cov.A0 == list(range(16)) and cov.A_err == []


def test_cover_complete_graph_by_hand():
    G = BipartiteGraph(np.ones((64, 64), bool))
    cov = greedy_cover(G, Fraction(1, 16))
    # residual 64 -> 48 -> 36, then 27 < 64^(...) * (1/16)^(1/4) = 32 stops
    assert [len(b) for b in cov.blocks] == [16, 12, 9]
    assert cov.t <= 4 and len(cov.A_err) == 27 and cov.A0 == []
    assert all(verify_cover(G, cov).values())


def test_cover_star_into_half():
    adj = np.zeros((64, 64), bool)
    adj[:32, 0] = True
    G = BipartiteGraph(adj)
    cov = greedy_cover(G, Fraction(1, 16))
    assert cov.centers == [0, 0] and [len(b) for b in cov.blocks] == [16, 12]
    assert len(cov.A0) == 36 and cov.A_err == []
    assert all(verify_cover(G, cov).values())


def test_cover_rejects_bad_delta():
    with pytest.raises(ValueError):
        greedy_cover(BipartiteGraph(np.ones((2, 2), bool)), 1)


@settings(max_examples=60)
@given(st.integers(1, 80), st.integers(1, 80), st.floats(0.0, 1.0), st.sampled_from([Fraction(1, 16), Fraction(1, 64), Fraction(1, 3)]), st.integers(0, 2**32))
def test_cover_verifier_random(nA, nB, p, delta, seed):
    G = BipartiteGraph(np.random.default_rng(seed).random((nA, nB)) < p)
    checks = verify_cover(G, greedy_cover(G, delta))
    count_ok = checks.pop("count")
    assert all(checks.values())
    if delta >= Fraction(1, 16):
        assert count_ok


def test_cover_count_bound_fails_for_small_delta():
    # residual-relative block sizes shrink geometrically, so the number of
    # steps grows like log(delta^(-1/4)) / sqrt(delta), above delta^(-1/2)
    # once delta < e^(-4); the verifier must report it
    G = BipartiteGraph(np.ones((512, 512), bool))
    cov = greedy_cover(G, Fraction(1, 100))
    checks = verify_cover(G, cov)
    assert cov.t == 12 and not checks["count"]
    assert all(v for k, v in checks.items() if k != "count")
    # minimum block size 1 has the same effect on tiny sides
    G13 = BipartiteGraph(np.ones((13, 1), bool))
    assert greedy_cover(G13, Fraction(1, 64)).t == 9


def test_verifier_detects_corruption():
    G = BipartiteGraph(np.ones((64, 64), bool))
    cov = greedy_cover(G, Fraction(1, 16))
    cov.blocks[0] = cov.blocks[0][:-1]
    checks = verify_cover(G, cov)
    assert not checks["partition"] and not checks["sizes"]


# --- equipartitions -----------------------------------------------------------------


def test_equipartition_blowup_2x2():
    pat = np.array([[1, 0], [0, 1]], bool)
    bg = gen_blowup_graph(40, 2, 0, seed=1, pattern=pat)
    res = homogeneous_equipartition(bg.graph, 3, Fraction(1, 10))
    assert is_equipartition(res.partition) and res.audit.fraction == 1
    assert all(len(set(bg.classes[0][list(b)])) == 1 for b in res.P_A.blocks)


def test_equipartition_complete_bipartite():
    res = homogeneous_equipartition(BipartiteGraph(np.ones((30, 30), bool)), 1, Fraction(1, 10))
    assert res.proto_A == [list(range(30))]
    assert is_equipartition(res.partition) and res.audit.fraction == 1


def test_equipartition_noisy_blowup():
    bg = gen_blowup_graph(200, 3, Fraction(1, 100), seed=3)
    res = homogeneous_equipartition(bg.graph, 4, Fraction(1, 10))
    assert is_equipartition(res.partition) and res.audit.fraction >= Fraction(9, 10)


def test_equipartition_errors():
    with pytest.raises(ValueError):
        homogeneous_equipartition(BipartiteGraph(np.ones((3, 4), bool)), 1, Fraction(1, 10))
    res = homogeneous_equipartition(BipartiteGraph(np.eye(20, dtype=bool)), 1, Fraction(1, 10), size_cap=2)
    assert res.size_cap_exceeded


@settings(max_examples=40)
@given(st.integers(1, 40), st.floats(0.05, 0.95), st.integers(0, 2**32), st.sampled_from([Fraction(1, 20), Fraction(1, 10), Fraction(1, 3)]))
def test_equipartition_always_refines_sides(n, p, seed, eps):
    G = BipartiteGraph(np.random.default_rng(seed).random((n, n)) < p)
    res = homogeneous_equipartition(G, 2, eps)
    assert is_equipartition(res.partition)
    assert all(b[-1] < n or b[0] >= n for b in res.partition.blocks)


@settings(max_examples=20)
@given(st.integers(1, 5), st.integers(0, 2**32), st.sampled_from([Fraction(1, 100), Fraction(1, 20), Fraction(1, 10)]))
def test_equipartition_zero_noise_exact(d, seed, eps):
    bg = gen_blowup_graph(60, d, 0, seed)
    assert homogeneous_equipartition(bg.graph, d + 1, eps).audit.fraction == 1


def test_equipartition_coarse_eps_mixes_leftovers():
    # at eps = 1/4 the chunks have 3 vertices, so one pooled leftover already
    # moves a block pair's density to 1/4, outside the open interval
    res = homogeneous_equipartition(gen_blowup_graph(60, 4, 0, 0).graph, 5, Fraction(1, 4))
    assert is_equipartition(res.partition) and res.chunk_size == 3
    assert res.audit.fraction == Fraction(151, 160)
