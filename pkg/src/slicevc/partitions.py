"""Vertex partitions and exact homogeneity / goodness audits."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .core import (
    BipartiteGraph,
    Density,
    GeneralThreeGraph,
    Graph,
    RationalLike,
    Threshold,
    TripartiteThreeGraph,
    VertexPart,
    as_rational,
    as_threshold,
    count_at_least,
    homogeneous_mask,
    rational_json,
)

MAX_WITNESSES = 10


class Partition:
    """Ordered list of disjoint nonempty blocks covering ``support``.

    ``support`` is the whole ground range unless the partition came from
    :func:`restrict`.
    """

    def __init__(self, ground: VertexPart, blocks: Iterable[Iterable[int]], support: Optional[Iterable[int]] = None):
        self.ground = ground
        self.blocks: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(int(v) for v in b)) for b in blocks)
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if b[0] < 0 or b[-1] >= ground.n:
                raise ValueError("block element outside the ground set")
            s = set(b)
            if len(s) != len(b) or seen & s:
                raise ValueError("blocks are not disjoint")
            seen |= s
        want = set(range(ground.n)) if support is None else set(int(v) for v in support)
        if seen != want:
            raise ValueError("blocks do not cover the ground set")
        self.support = tuple(sorted(want))

    @classmethod
    def trivial(cls, ground: VertexPart) -> "Partition":
        return cls(ground, [range(ground.n)] if ground.n else [])

    @classmethod
    def discrete(cls, ground: VertexPart) -> "Partition":
        return cls(ground, [[i] for i in range(ground.n)])

    @classmethod
    def from_labels(cls, ground: VertexPart, labels: Sequence[int]) -> "Partition":
        """Blocks ordered by label value; negative labels mean 'not in the support'."""
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (ground.n,):
            raise ValueError("one label per vertex required")
        support = np.nonzero(labels >= 0)[0]
        blocks = [np.nonzero(labels == lab)[0].tolist() for lab in np.unique(labels[support])]
        return cls(ground, blocks, support.tolist())

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self.ground == other.ground and self.blocks == other.blocks

    def __repr__(self) -> str:
        return f"Partition({self.ground.name}, {len(self.blocks)} blocks)"

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def labels(self) -> np.ndarray:
        """Block index per ground vertex, -1 outside the support."""
        lab = np.full(self.ground.n, -1, dtype=np.int64)
        for i, b in enumerate(self.blocks):
            lab[list(b)] = i
        return lab

    def canonical(self) -> "Partition":
        return Partition(self.ground, sorted(self.blocks, key=lambda b: b[0]), self.support)

    def refines(self, other: "Partition") -> bool:
        lab = other.labels()
        return all(len(set(lab[list(b)].tolist())) == 1 and lab[b[0]] >= 0 for b in self.blocks)

    def to_json(self) -> dict:
        return {"ground": self.ground.name, "blocks": [list(b) for b in sorted(self.blocks, key=lambda b: b[0])]}

    @classmethod
    def from_json(cls, data: dict, n: int) -> "Partition":
        return cls(VertexPart(data["ground"], n), data["blocks"])


def restrict(P: Partition, X: Iterable[int]) -> Partition:
    X = set(int(v) for v in X)
    if not X:
        raise ValueError("cannot restrict to an empty set")
    if not X <= set(P.support):
        raise ValueError("restriction set is not inside the partition's support")
    blocks = [[v for v in b if v in X] for b in P.blocks]
    return Partition(P.ground, [b for b in blocks if b], X)


def common_refinement(Ps: Sequence[Partition], ground: Optional[VertexPart] = None) -> Partition:
    """Nonempty intersections of one block from each input, in label-tuple order.

    With ``ground`` given the result lives on it; inputs may carry any ground
    of the same size (they are read as partitions of ``ground``).
    """
    if not Ps:
        if ground is None:
            raise ValueError("need a ground set for an empty refinement")
        return Partition.trivial(ground)
    g = Ps[0].ground
    support = Ps[0].support
    for P in Ps[1:]:
        if P.ground.n != g.n or P.support != support or (ground is None and P.ground != g):
            raise ValueError("partitions live on different ground sets")
    if ground is not None:
        if ground.n != g.n:
            raise ValueError("partitions live on different ground sets")
        g = ground
    sup = np.asarray(support, dtype=np.int64)
    if sup.size == 0:
        return Partition(g, [], [])
    keys = np.stack([P.labels()[sup] for P in Ps], axis=1)
    _, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    order = np.argsort(inv, kind="stable")
    bounds = np.flatnonzero(np.diff(inv[order])) + 1
    blocks = [sup[idx].tolist() for idx in np.split(order, bounds)]
    return Partition(g, blocks, support)


def is_equipartition(P: Partition) -> bool:
    s = P.sizes
    return not s or max(s) - min(s) <= 1


def combine(parts: Sequence[Partition], name: str = "V") -> Partition:
    """Disjoint union of partitions of consecutive parts (offset by earlier sizes)."""
    blocks = []
    off = 0
    for P in parts:
        if len(P.support) != P.ground.n:
            raise ValueError("combine needs partitions covering their parts")
        blocks.extend([[off + v for v in b] for b in P.blocks])
        off += P.ground.n
    return Partition(VertexPart(name, off), blocks)


def split(P: Partition, parts: Sequence[VertexPart]) -> list[Partition]:
    """Inverse of :func:`combine`; every block must lie inside one part."""
    out = []
    off = 0
    for part in parts:
        lo, hi = off, off + part.n
        bs = []
        for b in P.blocks:
            inside = [v for v in b if lo <= v < hi]
            if inside and len(inside) != len(b):
                raise ValueError("partition does not refine the parts")
            if inside:
                bs.append([v - lo for v in inside])
        out.append(Partition(part, bs))
        off = hi
    return out


# ---------------------------------------------------------------------------
# averaging


@dataclass
class AveragingResult:
    sigma: list
    hypothesis_failed: bool
    bound_holds: bool
    covered: int


def averaging_select(A: Iterable[int], P: Partition, a: RationalLike, b: RationalLike) -> AveragingResult:
    """Blocks Y with ``|A & Y| >= (1-a)|Y|``; checks the (1-b) coverage bound."""
    a, b = as_rational(a), as_rational(b)
    Aset = set(int(v) for v in A)
    X = len(P.support)
    eps = a * b
    hyp = len(Aset & set(P.support)) >= (1 - eps) * X and Aset <= set(P.support)
    sigma = [Y for Y in P.blocks if sum(1 for v in Y if v in Aset) >= (1 - a) * len(Y)]
    covered = sum(len(Y) for Y in sigma)
    return AveragingResult(sigma, not hyp, covered >= (1 - b) * X, covered)


# ---------------------------------------------------------------------------
# infimum helper


def infimum_threshold(hnum: np.ndarray, hden: np.ndarray, mass: np.ndarray, total: int) -> Fraction:
    """Smallest eps (as an infimum) with uncovered mass at most eps*total.

    An item with badness ``hnum/hden`` counts as covered at eps iff its
    badness is strictly below eps.
    """
    if total == 0:
        return Fraction(0)
    hnum = np.asarray(hnum, dtype=np.int64).reshape(-1)
    hden = np.asarray(hden, dtype=np.int64).reshape(-1)
    mass = np.asarray(mass, dtype=np.int64).reshape(-1)
    keep = (hden > 0) & (mass > 0)
    hnum, hden, mass = hnum[keep], hden[keep], mass[keep]
    if hnum.size == 0:
        return Fraction(1)
    g = np.gcd(hnum, hden)
    g[g == 0] = 1
    pairs = np.stack([hnum // g, hden // g], axis=1)
    base = int(pairs[:, 1].max()) + 1
    if int(pairs[:, 0].max()) < (1 << 62) // base:
        keys, inv = np.unique(pairs[:, 0] * base + pairs[:, 1], return_inverse=True)
        uniq = np.stack([keys // base, keys % base], axis=1)
    else:
        uniq, inv = np.unique(pairs, axis=0, return_inverse=True)
    msum = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(msum, inv.reshape(-1), mass)
    order = sorted(range(len(uniq)), key=lambda i: Fraction(int(uniq[i, 0]), int(uniq[i, 1])))
    best = Fraction(1)
    covered = 0
    for i in order:
        covered += int(msum[i])
        cand = max(Fraction(int(uniq[i, 0]), int(uniq[i, 1])), Fraction(total - covered, total))
        best = min(best, cand)
    return best


def _badness(counts: np.ndarray, sizes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    counts = np.asarray(counts, dtype=np.int64)
    sizes = np.asarray(sizes, dtype=np.int64)
    return np.minimum(counts, sizes - counts), sizes


# ---------------------------------------------------------------------------
# homogeneity audits


@dataclass
class HomogeneityAudit:
    epsilon: Threshold
    good_mass: int
    total_mass: int
    counts: np.ndarray  # edge count per block tuple
    sizes: np.ndarray  # product of block sizes per block tuple
    homogeneous: np.ndarray
    witnesses: list = field(default_factory=list)
    achieved_eps: Fraction = Fraction(0)
    extra: dict = field(default_factory=dict)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.good_mass, self.total_mass) if self.total_mass else Fraction(1)

    @property
    def passes(self) -> bool:
        return count_at_least(self.good_mass, self.total_mass, self.epsilon)

    def density(self, idx: tuple) -> Density:
        return Density(int(self.counts[idx]), int(self.sizes[idx]))

    def to_json(self) -> dict:
        eps = self.epsilon
        out = {
            "epsilon": rational_json(eps) if isinstance(eps, Fraction) else {"expr": eps.describe(), "float": float(eps)},
            "good_mass": self.good_mass,
            "total_mass": self.total_mass,
            "fraction": rational_json(self.fraction),
            "passes": self.passes,
            "achieved_eps": rational_json(self.achieved_eps),
            "witnesses": self.witnesses,
        }
        out.update(self.extra)
        return out


def _block_sums(arr: np.ndarray, labels_per_axis: Sequence[np.ndarray], nblocks: Sequence[int]) -> np.ndarray:
    """Sum an n-dimensional 0/1 array over blocks along every axis."""
    out = arr
    for ax, (lab, nb) in enumerate(zip(labels_per_axis, nblocks)):
        order = np.argsort(lab, kind="stable")
        sorted_lab = lab[order]
        starts = np.searchsorted(sorted_lab, np.arange(nb))
        out = np.take(out, order, axis=ax)
        out = np.add.reduceat(out, starts, axis=ax, dtype=np.int64) if out.shape[ax] else out
    return out


def _witness_list(counts: np.ndarray, sizes: np.ndarray, hom: np.ndarray, block_names) -> list:
    bad = np.argwhere(~hom & (sizes > 0))
    if bad.size == 0:
        return []
    h = np.minimum(counts, sizes - counts)[tuple(bad.T)] / sizes[tuple(bad.T)]
    mass = sizes[tuple(bad.T)]
    order = np.lexsort((-mass, -h))[:MAX_WITNESSES]
    out = []
    for i in order:
        idx = tuple(int(v) for v in bad[i])
        out.append({"blocks": [block_names(j, v) for j, v in enumerate(idx)], "density": {"num": int(counts[idx]), "den": int(sizes[idx])}})
    return out


def audit_pair_homogeneity(G: Union[BipartiteGraph, Graph], P: Partition, eps: Union[Threshold, RationalLike]) -> HomogeneityAudit:
    """Ordered pairs of V(G) lying in eps-homogeneous block pairs (diagonal included)."""
    t = as_threshold(eps)
    adj = G.full_adjacency()
    n = adj.shape[0]
    if P.ground.n != n or len(P.support) != n:
        raise ValueError("partition does not cover V(G)")
    lab = P.labels()
    nb = len(P)
    counts = _block_sums(adj, [lab, lab], [nb, nb])
    bs = np.asarray(P.sizes, dtype=np.int64)
    sizes = np.outer(bs, bs)
    hom = homogeneous_mask(counts, sizes, t)
    good = int(sizes[hom].sum())
    total = n * n
    hn, hd = _badness(counts, sizes)
    ach = infimum_threshold(hn, hd, sizes, total)
    wit = _witness_list(counts, sizes, hom, lambda j, v: v)
    return HomogeneityAudit(t, good, total, counts, sizes, hom, wit, ach)


def _part_offsets(sizes: Sequence[int]) -> list[int]:
    return [0, sizes[0], sizes[0] + sizes[1]]


def tripartite_block_parts(H: TripartiteThreeGraph, P: Partition) -> list[list[int]]:
    """Block indices of P lying in each of U, V, W; rejects P not refining them."""
    off = _part_offsets(H.sizes) + [sum(H.sizes)]
    per = [[], [], []]
    for i, b in enumerate(P.blocks):
        hits = [p for p in range(3) if off[p] <= b[0] < off[p + 1]]
        p = hits[0]
        if not (off[p] <= b[-1] < off[p + 1]):
            raise ValueError("partition does not refine the tripartition")
        per[p].append(i)
    return per


def audit_triple_homogeneity(H: Union[TripartiteThreeGraph, GeneralThreeGraph], P: Partition, eps: Union[Threshold, RationalLike]) -> HomogeneityAudit:
    """Ordered triples of V(H)^3 lying in eps-homogeneous block triples.

    For a tripartite H the ground is U then V then W; P must refine this
    tripartition.  Block triples meeting some part twice have density 0.
    The audit additionally reports the mass restricted to U x V x W
    (``cross_good_mass`` / ``cross_total_mass``).
    """
    t = as_threshold(eps)
    if isinstance(H, GeneralThreeGraph):
        n = H.n
        if P.ground.n != n or len(P.support) != n:
            raise ValueError("partition does not cover V(H)")
        lab = P.labels()
        nb = len(P)
        counts = _block_sums(H.tensor(), [lab] * 3, [nb] * 3)
        bs = np.asarray(P.sizes, dtype=np.int64)
        sizes = bs[:, None, None] * bs[None, :, None] * bs[None, None, :]
        hom = homogeneous_mask(counts, sizes, t)
        good = int(sizes[hom].sum())
        hn, hd = _badness(counts, sizes)
        ach = infimum_threshold(hn, hd, sizes, n**3)
        wit = _witness_list(counts, sizes, hom, lambda j, v: v)
        return HomogeneityAudit(t, good, n**3, counts, sizes, hom, wit, ach)

    N = sum(H.sizes)
    if P.ground.n != N or len(P.support) != N:
        raise ValueError("partition does not cover V(H)")
    per = tripartite_block_parts(H, P)
    lab = P.labels()
    off = _part_offsets(H.sizes)
    labs = []
    for p in range(3):
        local = lab[off[p] : off[p] + H.sizes[p]]
        remap = {g: i for i, g in enumerate(per[p])}
        labs.append(np.asarray([remap[int(g)] for g in local], dtype=np.int64))
    nbs = [len(per[p]) for p in range(3)]
    counts = _block_sums(H.tensor, labs, nbs)
    bsz = [np.asarray([len(P.blocks[i]) for i in per[p]], dtype=np.int64) for p in range(3)]
    sizes = bsz[0][:, None, None] * bsz[1][None, :, None] * bsz[2][None, None, :]
    hom = homogeneous_mask(counts, sizes, t)
    cross_total = int(np.prod(H.sizes))
    cross_good = int(sizes[hom].sum())
    total = N**3
    # six orderings of each cross triple; everything else has density 0
    good = total - 6 * cross_total + 6 * cross_good
    hn, hd = _badness(counts, sizes)
    # triples meeting a part twice are non-edges: badness 0, always covered
    rest = total - 6 * cross_total
    ach = infimum_threshold(np.append(hn.reshape(-1), 0), np.append(hd.reshape(-1), 1), np.append(6 * sizes.reshape(-1), rest), total)
    cross_ach = infimum_threshold(hn, hd, sizes, cross_total)
    wit = _witness_list(counts, sizes, hom, lambda j, v: per[j][v])
    extra = {
        "cross_good_mass": cross_good,
        "cross_total_mass": cross_total,
        "cross_fraction": rational_json(Fraction(cross_good, cross_total) if cross_total else Fraction(1)),
        "cross_achieved_eps": rational_json(cross_ach),
    }
    return HomogeneityAudit(t, good, total, counts, sizes, hom, wit, ach, extra)


def cross_fraction(audit: HomogeneityAudit) -> Fraction:
    g, tot = audit.extra.get("cross_good_mass"), audit.extra.get("cross_total_mass")
    if g is None:
        return audit.fraction
    return Fraction(g, tot) if tot else Fraction(1)


# ---------------------------------------------------------------------------
# goodness audits


def _neighborhood_counts(H: TripartiteThreeGraph, part: int, X: Sequence[int]) -> np.ndarray:
    """``|N_H(yz) & X|`` for every pair of the two other parts (in part order)."""
    idx = np.asarray(sorted(set(int(v) for v in X)), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("empty set")
    if idx[0] < 0 or idx[-1] >= H.sizes[part]:
        raise ValueError("vertex id outside the part")
    return np.take(H.tensor, idx, axis=part).sum(axis=part, dtype=np.int64)


@dataclass
class SetGoodness:
    is_good: bool
    exceptional_count: int
    total_pairs: int
    achieved_eps: Fraction


def almost_good_set(H: TripartiteThreeGraph, part: Union[int, str], X: Iterable[int], eps: Union[Threshold, RationalLike]) -> SetGoodness:
    """Count opposite pairs whose neighborhood fraction in X is not eps-extreme."""
    t = as_threshold(eps)
    p = H.part_index(part)
    X = list(X)
    c = _neighborhood_counts(H, p, X)
    m = len(set(X))
    sizes = np.full(c.shape, m, dtype=np.int64)
    hom = homogeneous_mask(c, sizes, t)
    exc = int((~hom).sum())
    total = int(c.size)
    hn, hd = _badness(c, sizes)
    ach = infimum_threshold(hn, hd, np.ones_like(hn), total)
    return SetGoodness(count_at_least(total - exc, total, t), exc, total, ach)


@dataclass
class GoodnessAudit:
    epsilon: Threshold
    part: str
    blocks: list  # SetGoodness per block, in partition order
    covered: Density
    is_good: bool
    achieved_eps: Fraction

    def to_json(self) -> dict:
        eps = self.epsilon
        return {
            "epsilon": rational_json(eps) if isinstance(eps, Fraction) else {"expr": eps.describe(), "float": float(eps)},
            "part": self.part,
            "covered": self.covered.to_json(),
            "is_good": self.is_good,
            "achieved_eps": rational_json(self.achieved_eps),
            "blocks": [
                {"exceptional": b.exceptional_count, "pairs": b.total_pairs, "almost_good": b.is_good, "achieved_eps": rational_json(b.achieved_eps)}
                for b in self.blocks
            ],
        }


def almost_good_partition(H: TripartiteThreeGraph, part: Union[int, str], P: Partition, eps: Union[Threshold, RationalLike]) -> GoodnessAudit:
    t = as_threshold(eps)
    p = H.part_index(part)
    if P.ground.n != H.sizes[p] or len(P.support) != H.sizes[p]:
        raise ValueError("partition does not cover the part")
    nb = len(P)
    lab = P.labels()
    # sum over blocks along the partitioned axis only
    order = np.argsort(lab, kind="stable")
    starts = np.searchsorted(lab[order], np.arange(nb))
    block_counts = np.add.reduceat(np.take(H.tensor, order, axis=p), starts, axis=p, dtype=np.int64)
    block_counts = np.moveaxis(block_counts, p, 0)
    res = []
    for i, b in enumerate(P.blocks):
        c = block_counts[i]
        sizes = np.full(c.shape, len(b), dtype=np.int64)
        hom = homogeneous_mask(c, sizes, t)
        exc = int((~hom).sum())
        hn, hd = _badness(c, sizes)
        ach = infimum_threshold(hn, hd, np.ones_like(hn), int(c.size))
        res.append(SetGoodness(count_at_least(int(c.size) - exc, int(c.size), t), exc, int(c.size), ach))
    n = H.sizes[p]
    cov = sum(len(b) for b, r in zip(P.blocks, res) if r.is_good)
    # a block passes at every eps above its own infimum, so this is the
    # infimum at which the whole partition passes
    e = [r.achieved_eps for r in res]
    ach = infimum_threshold(
        np.asarray([x.numerator for x in e], dtype=np.int64),
        np.asarray([x.denominator for x in e], dtype=np.int64),
        np.asarray(P.sizes, dtype=np.int64),
        n,
    ) if n else Fraction(0)
    return GoodnessAudit(t, H.names[p], res, Density(cov, n) if n else Density(0, 1), count_at_least(cov, n, t), ach)


def almost_good_set_graph(G: BipartiteGraph, X: Iterable[int], eps: Union[Threshold, RationalLike]) -> tuple[bool, int]:
    """Is X ⊆ B seen as nearly all-or-nothing by all but an eps fraction of A?"""
    t = as_threshold(eps)
    idx = np.asarray(sorted(set(int(v) for v in X)), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("empty set")
    if idx[0] < 0 or idx[-1] >= G.nB:
        raise ValueError("vertex id outside B")
    c = G.adj[:, idx].sum(axis=1, dtype=np.int64)
    hom = homogeneous_mask(c, np.full(c.shape, idx.size, dtype=np.int64), t)
    bad = int((~hom).sum())
    return count_at_least(G.nA - bad, G.nA, t), bad
