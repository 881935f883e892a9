"""Unoptimised recomputation of the counted quantities.

Nothing here shares code with the fast paths beyond the graph containers:
counts are plain Python loops over vertex tuples and VC-dimension is subset
enumeration.  Every entry point refuses instances above a size guard.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..core import BipartiteGraph, GeneralThreeGraph, Graph, TripartiteThreeGraph

MAX_VC_VERTICES = 32
MAX_TRIPLES = 50**3
MAX_PAIRS = 10**6


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    fast: object
    brute: object

    @property
    def match(self) -> bool:
        return self.fast == self.brute

    def to_json(self) -> dict:
        def enc(v):
            return {"num": v.numerator, "den": v.denominator} if isinstance(v, Fraction) else v

        return {"quantity": self.quantity, "fast": enc(self.fast), "brute": enc(self.brute), "match": self.match}


def _guard(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise OracleSizeError(f"{what} too large for exhaustive computation ({size} > {limit})")


# ---------------------------------------------------------------------------
# counts


def brute_density_pair(G: BipartiteGraph, X: Sequence[int], Y: Sequence[int]) -> Fraction:
    _guard(len(X) * len(Y), MAX_PAIRS, "pair set")
    hits = 0
    for x in X:
        for y in Y:
            if G.adj[x][y]:
                hits += 1
    return Fraction(hits, len(X) * len(Y))


def _edge(H, x, y, z) -> bool:
    if isinstance(H, TripartiteThreeGraph):
        return bool(H.tensor[x][y][z])
    return tuple(sorted((x, y, z))) in _edge_set(H)


_EDGE_SETS: dict = {}


def _edge_set(H: GeneralThreeGraph) -> frozenset:
    key = id(H)
    if key not in _EDGE_SETS or _EDGE_SETS[key][0] is not H:
        _EDGE_SETS[key] = (H, frozenset(H.edge_list))
    return _EDGE_SETS[key][1]


def brute_density_triple(H, X: Sequence[int], Y: Sequence[int], Z: Sequence[int]) -> Fraction:
    _guard(len(X) * len(Y) * len(Z), MAX_TRIPLES, "triple set")
    hits = sum(1 for x in X for y in Y for z in Z if _edge(H, x, y, z))
    return Fraction(hits, len(X) * len(Y) * len(Z))


def brute_triangles(P, Q, R, X: Sequence[int], Y: Sequence[int], Z: Sequence[int]) -> int:
    """Triangles xyz with xy in P, xz in Q, yz in R (pair sets as 0/1 matrices)."""
    _guard(len(X) * len(Y) * len(Z), MAX_TRIPLES, "triple set")
    count = 0
    for a, x in enumerate(X):
        for b, y in enumerate(Y):
            if not P[a][b]:
                continue
            for c, z in enumerate(Z):
                if Q[a][c] and R[b][c]:
                    count += 1
    return count


# ---------------------------------------------------------------------------
# VC-dimension by subset enumeration


def _neighborhoods(G: Union[BipartiteGraph, Graph]) -> list[frozenset]:
    if isinstance(G, Graph):
        n = G.n
        return [frozenset(j for j in range(n) if G.adj[i][j]) for i in range(n)]
    nA, nB = G.nA, G.nB
    rows = [frozenset(nA + j for j in range(nB) if G.adj[i][j]) for i in range(nA)]
    cols = [frozenset(i for i in range(nA) if G.adj[i][j]) for j in range(nB)]
    return rows + cols


def brute_vc(G: Union[BipartiteGraph, Graph]) -> int:
    """Largest |S| such that the traces N(v) & S take all 2^|S| values."""
    nbhd = _neighborhoods(G)
    n = len(nbhd)
    _guard(n, MAX_VC_VERTICES, "vertex set")
    best = 0
    k = 1
    while (1 << k) <= n:
        found = False
        for S in itertools.combinations(range(n), k):
            Sset = frozenset(S)
            traces = {nb & Sset for nb in nbhd}
            if len(traces) == 1 << k:
                found = True
                break
        if not found:
            break
        best = k
        k += 1
    return best


def brute_svc(H: Union[TripartiteThreeGraph, GeneralThreeGraph]) -> int:
    best = 0
    if isinstance(H, TripartiteThreeGraph):
        nU, nV, nW = H.sizes
        t = H.tensor
        for p in range(3):
            for x in range(H.sizes[p]):
                if p == 0:
                    rows = [[bool(t[x][y][z]) for z in range(nW)] for y in range(nV)]
                elif p == 1:
                    rows = [[bool(t[u][x][z]) for z in range(nW)] for u in range(nU)]
                else:
                    rows = [[bool(t[u][y][x]) for y in range(nV)] for u in range(nU)]
                best = max(best, brute_vc(BipartiteGraph(_as_array(rows))))
        return best
    n = H.n
    E = _edge_set(H)
    for x in range(n):
        adj = [[(a != b and a != x and b != x and tuple(sorted((x, a, b))) in E) for b in range(n)] for a in range(n)]
        best = max(best, brute_vc(Graph(_as_array(adj))))
    return best


def _as_array(rows):
    import numpy as np

    if not rows:
        return np.zeros((0, 0), dtype=bool)
    return np.array(rows, dtype=bool)


# ---------------------------------------------------------------------------
# audits


def _homogeneous(num: int, den: int, eps: Fraction) -> bool:
    d = Fraction(num, den)
    return d < eps or d > 1 - eps


def brute_pair_fraction(G: BipartiteGraph, blocks_A: Iterable[Sequence[int]], blocks_B: Iterable[Sequence[int]], eps: Fraction) -> Fraction:
    """Share of A x B covered by eps-homogeneous block pairs."""
    blocks_A, blocks_B = list(blocks_A), list(blocks_B)
    _guard(G.nA * G.nB, MAX_PAIRS, "pair set")
    good = 0
    for X in blocks_A:
        for Y in blocks_B:
            hits = sum(1 for x in X for y in Y if G.adj[x][y])
            if _homogeneous(hits, len(X) * len(Y), eps):
                good += len(X) * len(Y)
    return Fraction(good, G.nA * G.nB)


def brute_triple_fraction(H: TripartiteThreeGraph, blocks: Sequence[Sequence[Sequence[int]]], eps: Fraction) -> Fraction:
    """Share of U x V x W covered by eps-homogeneous block triples."""
    nU, nV, nW = H.sizes
    _guard(nU * nV * nW, MAX_TRIPLES, "triple set")
    good = 0
    for X in blocks[0]:
        for Y in blocks[1]:
            for Z in blocks[2]:
                hits = sum(1 for x in X for y in Y for z in Z if H.tensor[x][y][z])
                if _homogeneous(hits, len(X) * len(Y) * len(Z), eps):
                    good += len(X) * len(Y) * len(Z)
    return Fraction(good, nU * nV * nW)


# ---------------------------------------------------------------------------


QUANTITIES = ("density", "triangles", "vc", "svc", "pair_audit", "triple_audit")


def brute_oracles(instance, quantities: Sequence[str] = QUANTITIES, eps: Fraction = Fraction(1, 10)) -> list[OracleReport]:
    """Compare fast and brute values of every applicable quantity on ``instance``.

    Sets and partitions are fixed deterministically from the instance: whole
    parts for densities, halves for the audits, and the edge relation itself
    for triangle counts.
    """
    from .. import core, partitions, triads, vc
    from ..core import VertexPart
    from ..partitions import Partition, combine

    out = []
    unknown = set(quantities) - set(QUANTITIES)
    if unknown:
        raise ValueError(f"unknown quantities {sorted(unknown)}")

    def halves(n: int):
        return [b for b in (list(range(n // 2)), list(range(n // 2, n))) if b]

    if isinstance(instance, BipartiteGraph):
        G = instance
        A, B = list(range(G.nA)), list(range(G.nB))
        if "density" in quantities and A and B:
            out.append(OracleReport("density", core.density_pair(G, A, B).value, brute_density_pair(G, A, B)))
        if "vc" in quantities:
            out.append(OracleReport("vc", vc.vc_dimension(G, G.nA + G.nB).value, brute_vc(G)))
        if "pair_audit" in quantities and A and B:
            PA = Partition(VertexPart("A", G.nA), halves(G.nA))
            PB = Partition(VertexPart("B", G.nB), halves(G.nB))
            fast = partitions.audit_pair_homogeneity(G, combine([PA, PB], "AB"), eps)
            # the fast audit ranges over the full symmetric adjacency; its cross share is the bipartite share
            fast_cross = _cross_pair_fraction(fast, PA, PB, G)
            out.append(OracleReport("pair_audit", fast_cross, brute_pair_fraction(G, PA.blocks, PB.blocks, eps)))
        return out

    if isinstance(instance, TripartiteThreeGraph):
        H = instance
        nU, nV, nW = H.sizes
        parts = [list(range(n)) for n in H.sizes]
        if "density" in quantities and all(parts):
            out.append(OracleReport("density", core.density_triple(H, *parts).value, brute_density_triple(H, *parts)))
        if "triangles" in quantities and all(parts):
            P = H.tensor.any(axis=2)
            Q = H.tensor.any(axis=1)
            R = H.tensor.any(axis=0)
            T = triads.Triad(parts[0], parts[1], parts[2], P, Q, R)
            out.append(OracleReport("triangles", triads.triangle_count(T), brute_triangles(P, Q, R, *parts)))
        if "svc" in quantities:
            out.append(OracleReport("svc", vc.slicewise_vc(H, max(H.sizes) * 2).value, brute_svc(H)))
        if "triple_audit" in quantities and all(parts):
            Ps = [Partition(VertexPart(nm, n), halves(n)) for nm, n in zip(H.names, H.sizes)]
            fast = partitions.cross_fraction(partitions.audit_triple_homogeneity(H, combine(Ps, "UVW"), eps))
            out.append(OracleReport("triple_audit", fast, brute_triple_fraction(H, [P.blocks for P in Ps], eps)))
        return out

    if isinstance(instance, GeneralThreeGraph):
        H = instance
        V = list(range(H.n))
        if "density" in quantities and V:
            out.append(OracleReport("density", core.density_triple(H, V, V, V).value, brute_density_triple(H, V, V, V)))
        if "svc" in quantities:
            out.append(OracleReport("svc", vc.slicewise_vc(H, max(H.n, 1)).value, brute_svc(H)))
        return out

    if isinstance(instance, Graph):
        if "vc" in quantities:
            out.append(OracleReport("vc", vc.vc_dimension(instance, instance.n).value, brute_vc(instance)))
        return out
    raise TypeError(f"no oracles for {type(instance).__name__}")


def _cross_pair_fraction(audit, PA, PB, G: BipartiteGraph) -> Fraction:
    nA_blocks = len(PA)
    good = 0
    for i in range(nA_blocks):
        for j in range(len(PB)):
            if audit.homogeneous[i, nA_blocks + j]:
                good += int(audit.sizes[i, nA_blocks + j])
    return Fraction(good, G.nA * G.nB)
