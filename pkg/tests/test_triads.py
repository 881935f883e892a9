import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slicevc.core import TripartiteThreeGraph, VertexPart
from slicevc.harness.generators import gen_class_based, gen_random
from slicevc.harness.oracles import brute_triangles
from slicevc.partitions import Partition, combine
from slicevc.triads import (
    Triad,
    TripartiteDecomposition,
    audit_decomposition,
    enumerate_triads,
    goodhom_audit,
    symmetry_audit,
    triad_density,
    triangle_count,
    triangle_iter,
    trivial_decomposition,
)


def halves(name, n):
    return Partition(VertexPart(name, n), [range(n // 2), range(n // 2, n)])


def test_triangle_count_complete():
    T = Triad(range(3), range(4), range(5), np.ones((3, 4)), np.ones((3, 5)), np.ones((4, 5)))
    assert triangle_count(T) == 60
    assert len(list(triangle_iter(T))) == 60


def test_triangle_count_missing_edge():
    P = np.ones((2, 2), bool)
    P[0, 0] = False
    T = Triad([0, 1], [0, 1], [0], P, np.ones((2, 1)), np.ones((2, 1)))
    assert triangle_count(T) == 3
    assert sorted(triangle_iter(T)) == [(0, 1, 0), (1, 0, 0), (1, 1, 0)]


def test_triad_shape_checked():
    with pytest.raises(ValueError):
        Triad([0], [0, 1], [0], np.ones((1, 1)), np.ones((1, 1)), np.ones((2, 1)))


@settings(max_examples=40)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32))
def test_triangle_count_matches_brute(a, b, c, seed):
    rng = np.random.default_rng(seed)
    P, Q, R = rng.random((a, b)) < 0.5, rng.random((a, c)) < 0.5, rng.random((b, c)) < 0.5
    T = Triad(range(a), range(b), range(c), P, Q, R)
    assert triangle_count(T) == brute_triangles(P, Q, R, range(a), range(b), range(c))
    assert len(set(triangle_iter(T))) == triangle_count(T)


def test_triad_density():
    H = TripartiteThreeGraph(np.ones((2, 2, 2), bool))
    T = Triad([0, 1], [0, 1], [0, 1], np.ones((2, 2)), np.ones((2, 2)), np.eye(2, dtype=bool))
    d = triad_density(H, T)
    assert d.num == 4 and d.den == 4
    T0 = Triad([0], [0], [0], np.zeros((1, 1)), np.ones((1, 1)), np.ones((1, 1)))
    assert triad_density(H, T0) is None


def _labelled_decomposition(n, seed):
    rng = np.random.default_rng(seed)
    PA, PB, PC = halves("A", n), halves("B", n), halves("C", n)
    pairs = {}
    for s, (P1, P2) in {"AB": (PA, PB), "AC": (PA, PC), "BC": (PB, PC)}.items():
        for i, j in itertools.product(range(len(P1)), range(len(P2))):
            pairs[(s, i, j)] = rng.integers(0, 2, size=(len(P1.blocks[i]), len(P2.blocks[j])))
    return TripartiteDecomposition(PA, PB, PC, pairs)


@settings(max_examples=25)
@given(st.integers(2, 6), st.integers(0, 2**32))
def test_triad_triangles_partition_the_cross_triples(n, seed):
    D = _labelled_decomposition(n, seed)
    seen = set()
    total = 0
    for T in enumerate_triads(D):
        tri = set(triangle_iter(T))
        assert not (tri & seen)
        seen |= tri
        total += triangle_count(T)
    assert total == n**3 and len(seen) == n**3


def test_enumerate_counts():
    H = gen_random(4, seed=0)
    assert len(list(enumerate_triads(trivial_decomposition(H)))) == 1
    PA, PB, PC = (Partition.trivial(VertexPart(nm, 4)) for nm in "ABC")
    two = np.zeros((4, 4), dtype=np.int64)
    two[0] = 1
    D = TripartiteDecomposition(PA, PB, PC, {("AB", 0, 0): two, ("AC", 0, 0): two, ("BC", 0, 0): two})
    assert D.triad_count() == 8 and len(list(enumerate_triads(D))) == 8
    D2 = TripartiteDecomposition(halves("A", 4), halves("B", 4), PC)
    assert D2.triad_count() == 4
    assert len({T.key for T in enumerate_triads(_labelled_decomposition(4, 1))}) == _labelled_decomposition(4, 1).triad_count()


def test_enumerate_refuses_huge():
    n = 101
    P = Partition.discrete(VertexPart("A", n))
    D = TripartiteDecomposition(P, Partition.discrete(VertexPart("B", n)), Partition.discrete(VertexPart("C", n)))
    with pytest.raises(ValueError):
        next(enumerate_triads(D))


def test_audit_decomposition_complete_and_empty():
    for val in (True, False):
        H = TripartiteThreeGraph(np.full((3, 3, 3), val))
        a = audit_decomposition(H, trivial_decomposition(H), Fraction(1, 10))
        assert a.mass.value == 1 and a.passes() and a.triangle_total == 27 and a.undefined == 0


def test_audit_decomposition_half_density():
    t = np.zeros((2, 2, 2), bool)
    t[0] = True
    H = TripartiteThreeGraph(t)
    a = audit_decomposition(H, trivial_decomposition(H), Fraction(1, 10))
    assert a.sigma == [] and a.mass.value == 0 and not a.passes()
    # splitting A isolates the dense half
    D = TripartiteDecomposition(halves("A", 2), Partition.trivial(VertexPart("B", 2)), Partition.trivial(VertexPart("C", 2)))
    a = audit_decomposition(H, D, Fraction(1, 10))
    assert a.mass.value == 1 and len(a.sigma) == 2


def test_audit_decomposition_counts_every_triple_once():
    H = gen_random(6, seed=3)
    D = _labelled_decomposition(6, 7)
    a = audit_decomposition(H, D, Fraction(1, 3))
    assert a.triangle_total == 216
    assert a.triangle_total == sum(triangle_count(T) for T in enumerate_triads(D))


# --- symmetry audit -------------------------------------------------------------------


@pytest.mark.parametrize("val", [False, True])
def test_symmetry_zero_noise_constant(val):
    cb = gen_class_based(30, 3, 0, seed=0, pattern=np.full((3, 3, 3), val))
    rep = symmetry_audit(cb.graph)
    assert rep.part_eps == (0, 0, 0)
    assert rep.density.value == (1 if val else 0)
    assert rep.conclusion_at_infimum


@settings(max_examples=30)
@given(st.integers(2, 12), st.integers(0, 2**32), st.sampled_from([Fraction(1, 100), Fraction(1, 10), Fraction(1, 3)]))
def test_symmetry_one_directional(n, seed, eps):
    rng = np.random.default_rng(seed)
    base = rng.random() < 0.5
    t = np.full((n, n, n), base) ^ (rng.random((n, n, n)) < rng.choice([0.0, 0.01, 0.2]))
    rep = symmetry_audit(TripartiteThreeGraph(t), eps)
    if rep.at_eps["hypothesis"]:
        assert rep.at_eps["conclusion"]
    assert rep.conclusion_at_infimum


# --- goodhom audit --------------------------------------------------------------------


def test_goodhom_class_partition_zero_noise():
    cb = gen_class_based(24, 2, 0, seed=4)
    P = combine([Partition.from_labels(VertexPart(nm, 24), lab) for nm, lab in zip("UVW", cb.classes)], "UVW")
    rep = goodhom_audit(cb.graph, P, Fraction(1, 20), Fraction(1, 20))
    assert rep.hypothesis_holds and rep.hypothesis_eps == 0
    assert rep.fraction == 1 and rep.cross_fraction == 1
    assert rep.guarantee_at_infimum


def test_goodhom_rejects_non_refining_partition():
    H = gen_random(4, seed=1)
    P = Partition(VertexPart("UVW", 12), [range(6), range(6, 12)])
    with pytest.raises(ValueError):
        goodhom_audit(H, P, Fraction(1, 10))
