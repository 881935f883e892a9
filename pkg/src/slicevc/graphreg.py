"""Neighborhood packing, the greedy cover and homogeneous equipartitions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .core import (
    BipartiteGraph,
    EdgeColoredBipartiteGraph,
    Power,
    RationalLike,
    Threshold,
    VertexPart,
    as_rational,
    compare,
    floor_times,
)
from .partitions import HomogeneityAudit, Partition, audit_pair_homogeneity, combine, is_equipartition


# ---------------------------------------------------------------------------
# packing


@dataclass
class PackingResult:
    representatives: list  # row ids, in selection order
    exceptional: list  # sorted row ids
    assignment: np.ndarray  # representative index per row, -1 for exceptional rows
    radius: Fraction  # as a fraction of the column count
    error_color_bound: Threshold  # on |N_E2(a)| / |columns|
    n_columns: int

    @property
    def m(self) -> int:
        return len(self.representatives)

    def classes(self) -> list[list[int]]:
        return [np.nonzero(self.assignment == i)[0].tolist() for i in range(self.m)]


def _two_color_distance(E0: np.ndarray, E1: np.ndarray, x: int) -> np.ndarray:
    d1 = (E1 != E1[x]).sum(axis=1, dtype=np.int64)
    d0 = (E0 != E0[x]).sum(axis=1, dtype=np.int64)
    return np.maximum(d0, d1)


def _pack(colors: np.ndarray, radius: Fraction, exceptional: np.ndarray, width: int) -> tuple[list, np.ndarray]:
    """Greedy net over non-exceptional rows, low error degree first.

    A row becomes a representative when it is farther than ``radius*width``
    from every earlier representative; every other row is then assigned to
    the first representative within that distance.
    """
    E0 = colors == 0
    E1 = colors == 1
    e2deg = (colors == 2).sum(axis=1)
    n = colors.shape[0]
    order = np.lexsort((np.arange(n), e2deg))
    order = order[~exceptional[order]]
    limit_num, limit_den = radius.numerator * width, radius.denominator
    reps: list[int] = []
    dist_rows: list[np.ndarray] = []
    mind = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    for v in order.tolist():
        if reps and mind[v] * limit_den <= limit_num:
            continue
        reps.append(v)
        d = _two_color_distance(E0, E1, v)
        dist_rows.append(d)
        np.minimum(mind, d, out=mind)
    assign = np.full(n, -1, dtype=np.int64)
    for i, d in enumerate(dist_rows):
        hit = (assign < 0) & ~exceptional & (d * limit_den <= limit_num)
        assign[hit] = i
    return reps, assign


def packing_cluster(G: EdgeColoredBipartiteGraph, delta: RationalLike, eps: RationalLike) -> PackingResult:
    """Cluster A by the two-color Hamming metric at radius delta*|B|.

    Rows with ``|N_E2(a)| > sqrt(eps)*|B|`` are exceptional.
    """
    if G.r != 2:
        raise ValueError("packing expects colors E0, E1, E2")
    delta, eps = as_rational(delta), as_rational(eps)
    nB = G.nB
    e2 = (G.colors == 2).sum(axis=1).astype(object)
    # deg^2 > eps * |B|^2, exactly
    exc = np.array([d * d * eps.denominator > eps.numerator * nB * nB for d in e2], dtype=bool)
    reps, assign = _pack(G.colors, delta, exc, nB)
    return PackingResult(reps, np.nonzero(exc)[0].tolist(), assign, delta, Power(eps, Fraction(1, 2)), nB)


def verify_packing(G: EdgeColoredBipartiteGraph, res: PackingResult) -> list[str]:
    """Independent recheck of the packing invariants; returns failure messages."""
    errs = []
    C = G.colors
    nB = C.shape[1]
    lim = res.radius * nB

    def dist(a, x):
        d1 = sum(1 for j in range(nB) if (C[a, j] == 1) != (C[x, j] == 1))
        d0 = sum(1 for j in range(nB) if (C[a, j] == 0) != (C[x, j] == 0))
        return max(d0, d1)

    exc = set(res.exceptional)
    for a in range(C.shape[0]):
        i = int(res.assignment[a])
        if a in exc:
            if i != -1:
                errs.append(f"exceptional row {a} is assigned")
            continue
        if i < 0:
            errs.append(f"row {a} unassigned")
            continue
        if dist(a, res.representatives[i]) > lim:
            errs.append(f"row {a} outside radius of representative {i}")
        if compare(Fraction(int((C[a] == 2).sum()), nB), res.error_color_bound) > 0:
            errs.append(f"row {a} has too many error-colored pairs")
    for i, x in enumerate(res.representatives):
        for y in res.representatives[:i]:
            if dist(x, y) <= lim:
                errs.append(f"representatives {y},{x} too close")
    return errs


# ---------------------------------------------------------------------------
# greedy cover


@dataclass
class CoverResult:
    A_err: list
    A0: list
    blocks: list  # A_1..A_t
    centers: list  # b_1..b_t
    delta: Fraction
    sqrt_degree_violations: int = 0  # vertices of A0 with degree above sqrt(delta)|B|

    @property
    def t(self) -> int:
        return len(self.blocks)


def greedy_cover(G: BipartiteGraph, delta: RationalLike) -> CoverResult:
    delta = as_rational(delta)
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    nA, nB = G.nA, G.nB
    root, quarter = Power(delta, Fraction(1, 2)), Power(delta, Fraction(1, 4))
    alive = np.ones(nA, dtype=bool)
    adj = G.adj
    blocks, centers = [], []
    while True:
        res = int(alive.sum())
        if res == 0 or compare(res, quarter.scaled(nA)) < 0:
            break
        deg = adj[alive].sum(axis=0, dtype=np.int64)
        b = int(np.argmax(deg))  # argmax returns the smallest id among ties
        if compare(int(deg[b]), root.scaled(res)) < 0:
            break
        size = max(1, floor_times(root, res))
        cand = np.nonzero(alive & adj[:, b])[0][:size]
        blocks.append(cand.tolist())
        centers.append(b)
        alive[cand] = False
    rest = np.nonzero(alive)[0]
    degs = adj[rest].sum(axis=1, dtype=np.int64)
    # integer degrees: d <= x  iff  d <= floor(x)
    low = degs <= floor_times(quarter, nB)
    A0 = rest[low].tolist()
    A_err = rest[~low].tolist()
    viol = int((degs[low] > floor_times(root, nB)).sum())
    return CoverResult(A_err, A0, blocks, centers, delta, viol)


def verify_cover(G: BipartiteGraph, cov: CoverResult) -> dict:
    """Post-hoc check of every cover guarantee, from the output alone."""
    d = cov.delta
    nA, nB = G.nA, G.nB
    root, quarter = Power(d, Fraction(1, 2)), Power(d, Fraction(1, 4))
    parts = [cov.A_err, cov.A0] + list(cov.blocks)
    flat = [v for p in parts for v in p]
    checks = {"partition": sorted(flat) == list(range(nA))}
    ok_contain, ok_size = True, True
    residual = nA
    for blk, b in zip(cov.blocks, cov.centers):
        if not all(G.adj[a, b] for a in blk):
            ok_contain = False
        if len(blk) != max(1, floor_times(root, residual)):
            ok_size = False
        residual -= len(blk)
    checks["containment"] = ok_contain
    checks["sizes"] = ok_size
    checks["degree_bound"] = all(compare(int(G.adj[a].sum()), quarter.scaled(nB)) <= 0 for a in cov.A0)
    checks["error_size"] = compare(len(cov.A_err), quarter.scaled(nA)) <= 0
    # t <= delta^(-1/2)  <=>  t^2 * delta <= 1
    checks["count"] = cov.t * cov.t * d <= 1
    return checks


# ---------------------------------------------------------------------------
# homogeneous equipartition


@dataclass
class EquipartitionResult:
    partition: Partition  # over A then B
    P_A: Partition
    P_B: Partition
    audit: HomogeneityAudit
    proto_A: list
    proto_B: list
    chunk_size: int
    k: int
    size_cap_exceeded: bool = False
    notes: list = field(default_factory=list)


def _massage(protos: list[list[int]], s: int, threshold: Fraction) -> tuple[list[list[int]], list[tuple[int, int]]]:
    """Split big proto-blocks into chunks of size s; everything else is pool.

    Returns the chunks (tagged by proto index via a parallel list) and the
    pool as (proto index, vertex) pairs.
    """
    chunks: list[tuple[int, list[int]]] = []
    pool: list[tuple[int, int]] = []
    for j, blk in enumerate(protos):
        if len(blk) < threshold:
            pool.extend((j, v) for v in blk)
            continue
        q = len(blk) // s
        for c in range(q):
            chunks.append((j, blk[c * s : (c + 1) * s]))
        pool.extend((j, v) for v in blk[q * s :])
    return chunks, pool


def _drop_chunks(chunks: list, pool: list, count: int) -> None:
    """Move ``count`` chunks into the pool, taking from the most-chunked proto-blocks."""
    for _ in range(count):
        tally: dict[int, int] = {}
        for j, _blk in chunks:
            tally[j] = tally.get(j, 0) + 1
        j_best = max(sorted(tally), key=lambda j: tally[j])
        idx = max(i for i, (j, _b) in enumerate(chunks) if j == j_best)
        j, blk = chunks.pop(idx)
        pool.extend((j, v) for v in blk)


def _distribute(chunks: list, pool: list, nblocks_if_empty: int) -> list[list[int]]:
    """Spread the pool over the chunks (sizes differing by at most one), own proto-block first."""
    pool = sorted(pool)
    if not chunks:
        w = max(1, nblocks_if_empty)
        out: list[list[int]] = [[] for _ in range(w)]
        for i, (_j, v) in enumerate(pool):
            out[i * w // len(pool)].append(v)
        return [b for b in out if b]
    q = len(chunks)
    base, extra = divmod(len(pool), q)
    want: dict[int, int] = {}
    for j, _v in pool:
        want[j] = want.get(j, 0) + 1
    by_proto: dict[int, list[int]] = {}
    for i, (j, _b) in enumerate(chunks):
        by_proto.setdefault(j, []).append(i)
    # hand the larger caps to proto-blocks whose own pool overflows base caps
    caps = [base] * q
    remaining = extra
    for j in sorted(by_proto, key=lambda j: (-want.get(j, 0), j)):
        need = max(0, want.get(j, 0) - base * len(by_proto[j]))
        for i in by_proto[j][: min(need, remaining)]:
            caps[i] += 1
        remaining -= min(need, len(by_proto[j]), remaining)
    for i in range(q):
        if remaining == 0:
            break
        if caps[i] == base:
            caps[i] += 1
            remaining -= 1
    blocks = [list(b) for _j, b in chunks]
    left = []
    for j, v in pool:
        placed = False
        for i in by_proto.get(j, []):
            if caps[i] > 0:
                blocks[i].append(v)
                caps[i] -= 1
                placed = True
                break
        if not placed:
            left.append(v)
    i = 0
    for v in left:
        while caps[i] == 0:
            i += 1
        blocks[i].append(v)
        caps[i] -= 1
    return blocks


def _proto_blocks(adj: np.ndarray, delta: Fraction) -> list[list[int]]:
    colors = adj.astype(np.int8)
    G = EdgeColoredBipartiteGraph(colors, 2)
    res = packing_cluster(G, delta, Fraction(0))
    return [c for c in res.classes() if c]


def homogeneous_equipartition(
    G: BipartiteGraph,
    k: int,
    eps: RationalLike,
    size_cap: Optional[int] = None,
    delta: Optional[RationalLike] = None,
) -> EquipartitionResult:
    """Equipartition of A then B refining {A, B}, audited at eps.

    Proto-blocks come from packing each side by neighborhood distance
    ``delta`` (default eps); large proto-blocks are cut into equal chunks
    and the remainder is spread over the chunks.
    """
    eps = as_rational(eps)
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    delta = eps if delta is None else as_rational(delta)
    nA, nB = G.nA, G.nB
    if nA != nB:
        raise ValueError("sides must have equal size")
    if nA == 0:
        raise ValueError("empty graph")
    proto_A = _proto_blocks(G.adj, delta)
    proto_B = _proto_blocks(G.adj.T, delta)
    t = len(proto_A) + len(proto_B)
    small = eps * nA / t
    s = max(1, math.ceil(small))
    chA, poolA = _massage(proto_A, s, small)
    chB, poolB = _massage(proto_B, s, small)
    notes = []
    if len(chB) > len(chA):
        _drop_chunks(chB, poolB, len(chB) - len(chA))
    elif len(chA) > len(chB):
        _drop_chunks(chA, poolA, len(chA) - len(chB))
    nfallback = max(1, round(nA / s))
    blocks_A = _distribute(chA, poolA, nfallback)
    blocks_B = _distribute(chB, poolB, nfallback)
    P_A = Partition(VertexPart(G.names[0], nA), blocks_A)
    P_B = Partition(VertexPart(G.names[1], nB), blocks_B)
    P = combine([P_A, P_B], G.names[0] + G.names[1])
    if not is_equipartition(P):
        notes.append("not an equipartition")
    audit = audit_pair_homogeneity(G, P, eps)
    capped = size_cap is not None and len(P) > size_cap
    if capped:
        notes.append(f"size {len(P)} exceeds cap {size_cap}")
    return EquipartitionResult(P, P_A, P_B, audit, proto_A, proto_B, s, k, capped, notes)
