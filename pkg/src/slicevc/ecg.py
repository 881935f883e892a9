"""Homogeneous pair partitions of edge-colored bipartite graphs.

Colors 0 and 1 are the sparse/dense colors; color 2 is the error color.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import (
    EdgeColoredBipartiteGraph,
    Power,
    RationalLike,
    VertexPart,
    as_rational,
    compare,
    floor_times,
    rational_json,
)
from .graphreg import _pack, packing_cluster
from .partitions import Partition, _block_sums, infimum_threshold
from .vc import BUDGET_EXHAUSTED, find_uk_copy

__all__ = ["EdgeColoredBipartiteGraph", "EchomResult", "audit_echom", "vcremoval_partition"]


@dataclass
class EchomResult:
    P_A: Partition
    P_B: Partition
    sigma0: list  # (i, j) block index pairs
    sigma1: list
    epsilon: Fraction  # threshold at which sigma0 / sigma1 were selected
    achieved_eps: Fraction
    covered: int
    total: int
    checks: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return max(len(self.P_A), len(self.P_B))

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.covered, self.total) if self.total else Fraction(1)

    @property
    def passes(self) -> bool:
        return (self.total - self.covered) <= self.epsilon * self.total

    def to_json(self) -> dict:
        return {
            "P_A": self.P_A.to_json(),
            "P_B": self.P_B.to_json(),
            "sigma0": [list(p) for p in self.sigma0],
            "sigma1": [list(p) for p in self.sigma1],
            "epsilon": rational_json(self.epsilon),
            "achieved_eps": rational_json(self.achieved_eps),
            "coverage": rational_json(self.coverage),
            "size": self.size,
            "checks": self.checks,
            "flags": self.flags,
        }


def _pair_counts(G: EdgeColoredBipartiteGraph, P_A: Partition, P_B: Partition):
    la, lb = P_A.labels(), P_B.labels()
    na, nb = len(P_A), len(P_B)
    c0 = _block_sums(G.colors == 0, [la, lb], [na, nb])
    c1 = _block_sums(G.colors == 1, [la, lb], [na, nb])
    sz = np.outer(np.asarray(P_A.sizes, dtype=np.int64), np.asarray(P_B.sizes, dtype=np.int64))
    return c0, c1, sz


def audit_echom(G: EdgeColoredBipartiteGraph, P_A: Partition, P_B: Partition, eps: Optional[RationalLike] = None) -> EchomResult:
    """Select every block pair that is (1-eps)-monochromatic in E0 or E1.

    With ``eps=None`` the pairs are selected at the smallest eps for which
    the selection covers a (1-eps) share of A x B.
    """
    if len(P_A.support) != G.nA or len(P_B.support) != G.nB:
        raise ValueError("partitions must cover A and B")
    c0, c1, sz = _pair_counts(G, P_A, P_B)
    total = G.nA * G.nB
    impurity = np.minimum(sz - c0, sz - c1)
    ach = infimum_threshold(impurity, sz, sz, total)
    e = ach if eps is None else as_rational(eps)
    # pair (X,Y) in sigma_alpha iff |E_alpha & XxY| >= (1-e)|X||Y|
    s0 = (sz - c0) * e.denominator <= e.numerator * sz
    s1 = (sz - c1) * e.denominator <= e.numerator * sz
    if e >= Fraction(1, 2):
        s1 &= ~s0
    sigma0 = [tuple(int(v) for v in p) for p in np.argwhere(s0)]
    sigma1 = [tuple(int(v) for v in p) for p in np.argwhere(s1)]
    covered = int(sz[s0 | s1].sum())
    return EchomResult(P_A, P_B, sigma0, sigma1, e, ach, covered, total)


def vcremoval_partition(
    G: EdgeColoredBipartiteGraph,
    k: int,
    eps: RationalLike,
    delta: RationalLike,
    strict: bool = False,
    uk_budget: Optional[int] = None,
) -> EchomResult:
    """Two-sided packing construction of a homogeneous pair partition.

    1. pack A at radius delta|B|; rows with many error pairs are exceptional (U)
    2. B_err = error neighborhoods of the A-representatives
    3. pack B' = B - B_err against A' = A - U
    4. B_0 = B_err plus the exceptional rows of step 3
    5. A_0 = U plus the error neighborhoods of the B-representatives
    """
    if G.r != 2:
        raise ValueError("expected colors E0, E1, E2")
    eps, delta = as_rational(eps), as_rational(delta)
    nA, nB = G.nA, G.nB
    C = G.colors
    E2 = C == 2
    checks: dict = {}
    flags: list = []
    if E2.sum() > eps * nA * nB:
        flags.append("error color exceeds eps|A||B|")
    checks["error_color_ok"] = bool(E2.sum() <= eps * nA * nB)

    if uk_budget is not None and k >= 1:
        found = find_uk_copy(G, 0, 1, k, uk_budget)
        checks["uk_free"] = "unknown" if found is BUDGET_EXHAUSTED else found is None
        if found is not None and found is not BUDGET_EXHAUSTED:
            flags.append(f"E0/E1 copy of U({k}) present")

    # step 1
    pa = packing_cluster(G, delta, eps)
    U = np.zeros(nA, dtype=bool)
    U[pa.exceptional] = True
    m = pa.m
    # step 2
    B_err = np.zeros(nB, dtype=bool)
    for x in pa.representatives:
        B_err |= E2[x]
    bnd = Fraction(int(B_err.sum()), max(1, m * nB))
    checks["B_err_bound"] = m == 0 or compare(bnd, Power(eps, Fraction(1, 2))) <= 0
    # step 3
    A1 = np.nonzero(~U)[0]
    B1 = np.nonzero(~B_err)[0]
    nA1 = A1.size
    if B1.size and nA1:
        sub = C[np.ix_(A1, B1)].T  # rows B', columns A'
        e2deg = (sub == 2).sum(axis=1)
        # exceptional iff deg > 2 eps^(1/4) |A'|
        # integer degrees: d > x  iff  d > floor(x)
        V = e2deg > floor_times(Power(eps, Fraction(1, 4), 2), nA1)
        reps_b, assign_b = _pack(sub, delta, V, nA1)
        e2_sub = int((sub == 2).sum())
        checks["E2_restricted_bound"] = compare(Fraction(e2_sub, nA1 * B1.size), Power(eps, Fraction(1, 2), 2)) <= 0
    else:
        V = np.zeros(B1.size, dtype=bool)
        reps_b, assign_b = [], np.full(B1.size, -1, dtype=np.int64)
    p = len(reps_b)
    ys = [int(B1[j]) for j in reps_b]
    # step 4
    g = np.full(nB, -1, dtype=np.int64)
    g[B1] = assign_b
    B0 = g < 0
    # step 5
    A0 = U.copy()
    for y in ys:
        A0 |= E2[:, y]
    f = pa.assignment.copy()
    f[A0] = -1

    labels_A = np.where(f >= 0, f + 1, 0)
    labels_B = np.where(g >= 0, g + 1, 0)
    P_A = Partition.from_labels(VertexPart("A", nA), labels_A)
    P_B = Partition.from_labels(VertexPart("B", nB), labels_B)
    res = audit_echom(G, P_A, P_B)
    checks["m"], checks["p"] = m, p
    checks["A0"], checks["B0"] = int(A0.sum()), int(B0.sum())
    checks["B_err"] = int(B_err.sum())
    res.checks = checks
    res.flags = flags
    if strict:
        # the guarantee 2*delta^(1/16), reported only
        res.checks["guarantee_2delta_1_16"] = float(Power(delta, Fraction(1, 16), 2))
    # self-consistency: the returned selection passes at its own eps
    assert res.passes or res.achieved_eps == 1
    return res
