"""Triads, triangle counts and decomposition-level audits of tripartite 3-graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

import numpy as np

from .core import (
    Density,
    GeneralThreeGraph,
    Power,
    RationalLike,
    Threshold,
    TripartiteThreeGraph,
    as_rational,
    as_threshold,
    compare,
    density_triple,
    homogeneous_mask,
    rational_json,
)
from .partitions import (
    HomogeneityAudit,
    Partition,
    almost_good_partition,
    almost_good_set,
    audit_triple_homogeneity,
    cross_fraction,
    split,
)

TRIAD_LIMIT = 10**6


@dataclass
class Triad:
    X: np.ndarray  # ids in the first part
    Y: np.ndarray
    Z: np.ndarray
    P: np.ndarray  # |X| x |Y| edge mask
    Q: np.ndarray  # |X| x |Z|
    R: np.ndarray  # |Y| x |Z|
    key: tuple = ()

    def __post_init__(self) -> None:
        self.X, self.Y, self.Z = (np.asarray(s, dtype=np.int64) for s in (self.X, self.Y, self.Z))
        self.P, self.Q, self.R = (np.asarray(m, dtype=bool) for m in (self.P, self.Q, self.R))
        if self.P.shape != (self.X.size, self.Y.size) or self.Q.shape != (self.X.size, self.Z.size) or self.R.shape != (self.Y.size, self.Z.size):
            raise ValueError("triad edge sets do not match the declared parts")

    def triangle_mask(self) -> np.ndarray:
        return self.P[:, :, None] & self.Q[:, None, :] & self.R[None, :, :]


def triangle_count(T: Triad) -> int:
    """Sum over xy in P of |N_Q(x) & N_R(y)|."""
    common = T.Q.astype(np.int64) @ T.R.T.astype(np.int64)
    return int(common[T.P].sum())


def triangle_iter(T: Triad) -> Iterator[tuple[int, int, int]]:
    for i, j in zip(*np.nonzero(T.P)):
        for l in np.nonzero(T.Q[i] & T.R[j])[0]:
            yield int(T.X[i]), int(T.Y[j]), int(T.Z[l])


def triad_density(H: Union[TripartiteThreeGraph, GeneralThreeGraph], T: Triad) -> Optional[Density]:
    """Share of the triad's triangles that are edges of H; None when it has none."""
    if isinstance(H, GeneralThreeGraph):
        if len(set(T.X.tolist()) | set(T.Y.tolist()) | set(T.Z.tolist())) != T.X.size + T.Y.size + T.Z.size:
            raise ValueError("triad parts overlap")
        sub = H.tensor()[np.ix_(T.X, T.Y, T.Z)]
    else:
        sub = H.tensor[np.ix_(T.X, T.Y, T.Z)]
    tri = T.triangle_mask()
    total = int(tri.sum())
    if total == 0:
        return None
    return Density(int((tri & sub).sum()), total)


# ---------------------------------------------------------------------------
# decompositions


@dataclass
class TripartiteDecomposition:
    """Vertex partitions of the three parts plus a labelling of the pairs of
    every cross block pair; pairs with equal label form one pair-class.

    ``pairs[(s, i, j)]`` for ``s`` in {"AB", "AC", "BC"} is an int array of
    shape ``|X_i| x |Y_j|`` holding labels ``0..L-1``; missing entries mean
    the trivial pair partition (all labels 0).
    """

    P_A: Partition
    P_B: Partition
    P_C: Partition
    pairs: dict = field(default_factory=dict)

    def blocks(self, s: str) -> tuple:
        return {"A": self.P_A, "B": self.P_B, "C": self.P_C}[s].blocks

    def pair_labels(self, s: str, i: int, j: int) -> np.ndarray:
        lab = self.pairs.get((s, i, j))
        if lab is None:
            X, Y = self.blocks(s[0])[i], self.blocks(s[1])[j]
            return np.zeros((len(X), len(Y)), dtype=np.int64)
        return np.asarray(lab, dtype=np.int64)

    def triad_count(self) -> int:
        n = {"A": len(self.P_A), "B": len(self.P_B), "C": len(self.P_C)}
        counts = {}
        for s in ("AB", "AC", "BC"):
            # object dtype: products can exceed int64 for fine decompositions
            m = np.ones((n[s[0]], n[s[1]]), dtype=object)
            for (t, i, j), lab in self.pairs.items():
                if t == s:
                    m[i, j] = _nlabels(np.asarray(lab))
            counts[s] = m
        ab, ac, bc = counts["AB"], counts["AC"], counts["BC"]
        # sum over (i, j, l) of ab[i, j] * ac[i, l] * bc[j, l]
        return int(sum((ab[i, :, None] * ac[i, None, :] * bc).sum() for i in range(n["A"]))) if n["A"] else 0

    def to_json(self) -> dict:
        return {
            "vertex_partitions": {"A": self.P_A.to_json(), "B": self.P_B.to_json(), "C": self.P_C.to_json()},
            "pair_partitions": [
                {"pair": s, "blocks": [i, j], "labels": np.asarray(lab).tolist()} for (s, i, j), lab in sorted(self.pairs.items())
            ],
        }


def _nlabels(lab: np.ndarray) -> int:
    return int(lab.max()) + 1 if lab.size else 1


def enumerate_triads(D: TripartiteDecomposition, allow_large: bool = False) -> Iterator[Triad]:
    """Lazily yield every triad; refuses more than a million unless allowed."""
    if not allow_large and D.triad_count() > TRIAD_LIMIT:
        raise ValueError(f"decomposition has more than {TRIAD_LIMIT} triads; pass allow_large")
    for i, j, l in itertools.product(range(len(D.P_A)), range(len(D.P_B)), range(len(D.P_C))):
        X, Y, Z = D.P_A.blocks[i], D.P_B.blocks[j], D.P_C.blocks[l]
        lab_ab, lab_ac, lab_bc = D.pair_labels("AB", i, j), D.pair_labels("AC", i, l), D.pair_labels("BC", j, l)
        for a, b, c in itertools.product(range(_nlabels(lab_ab)), range(_nlabels(lab_ac)), range(_nlabels(lab_bc))):
            yield Triad(X, Y, Z, lab_ab == a, lab_ac == b, lab_bc == c, key=(i, j, l, a, b, c))


@dataclass
class DecompositionAudit:
    epsilon: Threshold
    sigma: list  # triad keys (i, j, l, a, b, c)
    mass: Density  # homogeneous triangle mass over |A||B||C|
    triangle_total: int  # sum of all triad triangle counts
    undefined: int  # triads without triangles

    def passes(self) -> bool:
        return compare(1 - self.mass.value, self.epsilon) <= 0


def audit_decomposition(H: TripartiteThreeGraph, D: TripartiteDecomposition, eps: Union[Threshold, RationalLike]) -> DecompositionAudit:
    t = as_threshold(eps)
    sigma = []
    mass = 0
    tri_total = 0
    undefined = 0
    for i, j, l in itertools.product(range(len(D.P_A)), range(len(D.P_B)), range(len(D.P_C))):
        X, Y, Z = (np.asarray(b, dtype=np.int64) for b in (D.P_A.blocks[i], D.P_B.blocks[j], D.P_C.blocks[l]))
        lab_ab, lab_ac, lab_bc = D.pair_labels("AB", i, j), D.pair_labels("AC", i, l), D.pair_labels("BC", j, l)
        na, nb, nc = _nlabels(lab_ab), _nlabels(lab_ac), _nlabels(lab_bc)
        # every (x, y, z) is a triangle of exactly one triad
        code = (lab_ab[:, :, None] * nb + lab_ac[:, None, :]) * nc + lab_bc[None, :, :]
        sub = H.tensor[np.ix_(X, Y, Z)]
        ntri = np.bincount(code.reshape(-1), minlength=na * nb * nc)
        nedge = np.bincount(code.reshape(-1), weights=sub.reshape(-1), minlength=na * nb * nc).astype(np.int64)
        tri_total += int(ntri.sum())
        hom = homogeneous_mask(nedge, ntri, t)
        undefined += int((ntri == 0).sum())
        for c in np.nonzero(hom)[0]:
            a, rem = divmod(int(c), nb * nc)
            b, cc = divmod(rem, nc)
            sigma.append((i, j, l, a, b, cc))
            mass += int(ntri[c])
    total = int(np.prod(H.sizes))
    return DecompositionAudit(t, sigma, Density(mass, total) if total else Density(0, 1), tri_total, undefined)


def trivial_decomposition(H: TripartiteThreeGraph) -> TripartiteDecomposition:
    from .core import VertexPart

    return TripartiteDecomposition(*(Partition.trivial(VertexPart(nm, n)) for nm, n in zip(H.names, H.sizes)))


# ---------------------------------------------------------------------------
# symmetry and goodness audits


@dataclass
class SymmetryReport:
    part_eps: tuple  # infimum eps at which each whole part is almost good
    hypothesis_eps: Fraction  # max of the three
    density: Density
    conclusion_at_infimum: bool  # density within the closed interval 4*eps^(1/16) at hypothesis_eps
    hypothesis_below_one_percent: bool
    at_eps: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "part_eps": [rational_json(e) for e in self.part_eps],
            "hypothesis_eps": rational_json(self.hypothesis_eps),
            "density": self.density.to_json(),
            "conclusion_at_infimum": self.conclusion_at_infimum,
            "hypothesis_below_one_percent": self.hypothesis_below_one_percent,
            "at_eps": self.at_eps,
        }


def _within_closed(d: Fraction, t: Power) -> bool:
    return compare(d, t) <= 0 or compare(1 - d, t) <= 0


def symmetry_audit(H: TripartiteThreeGraph, eps: Optional[RationalLike] = None) -> SymmetryReport:
    """Check whether all three parts are almost good, and whether the total
    density is then within ``4 eps^(1/16)`` of 0 or 1."""
    goods = [almost_good_set(H, p, range(H.sizes[p]), eps if eps is not None else Fraction(1, 2)) for p in range(3)]
    part_eps = tuple(g.achieved_eps for g in goods)
    e_star = max(part_eps)
    dens = density_triple(H, range(H.sizes[0]), range(H.sizes[1]), range(H.sizes[2]))
    concl = _within_closed(dens.value, Power(e_star, Fraction(1, 16), 4)) if e_star > 0 else dens.value in (0, 1)
    at = None
    if eps is not None:
        e = as_rational(eps)
        hyp = all(g.is_good for g in goods)
        at = {
            "eps": rational_json(e),
            "hypothesis": hyp,
            "conclusion": dens.is_homogeneous(Power(e, Fraction(1, 16), 4)) if e > 0 else dens.value in (0, 1),
        }
    return SymmetryReport(part_eps, e_star, dens, concl, e_star < Fraction(1, 100), at)


@dataclass
class GoodhomReport:
    hypothesis: dict  # part name -> GoodnessAudit at eps
    hypothesis_holds: bool
    hypothesis_eps: Fraction  # infimum over eps of the hypothesis
    working: HomogeneityAudit
    guarantee: HomogeneityAudit  # audit at 28 eps^(1/64)
    guarantee_at_infimum: bool

    @property
    def fraction(self) -> Fraction:
        return self.working.fraction

    @property
    def cross_fraction(self) -> Fraction:
        return cross_fraction(self.working)

    def to_json(self) -> dict:
        return {
            "hypothesis": {k: v.to_json() for k, v in self.hypothesis.items()},
            "hypothesis_holds": self.hypothesis_holds,
            "hypothesis_eps": rational_json(self.hypothesis_eps),
            "working": self.working.to_json(),
            "guarantee": self.guarantee.to_json(),
            "guarantee_at_infimum": self.guarantee_at_infimum,
        }


def goodhom_audit(H: TripartiteThreeGraph, P: Partition, eps: RationalLike, working_eps: Optional[RationalLike] = None) -> GoodhomReport:
    """Almost-goodness of each side, then triple homogeneity at the working
    threshold and at ``28 eps^(1/64)``."""
    eps = as_rational(eps)
    from .core import VertexPart

    sides = split(P, [VertexPart(nm, n) for nm, n in zip(H.names, H.sizes)])
    hyp = {H.names[p]: almost_good_partition(H, p, sides[p], eps) for p in range(3)}
    e_star = max(a.achieved_eps for a in hyp.values())
    working = audit_triple_homogeneity(H, P, eps if working_eps is None else working_eps)
    guarantee = audit_triple_homogeneity(H, P, Power(eps, Fraction(1, 64), 28)) if eps > 0 else audit_triple_homogeneity(H, P, Fraction(1, 10**9))
    # closed-interval version at the infimum: uncovered share at most 28 e*^(1/64)
    if e_star > 0:
        g_star = audit_triple_homogeneity(H, P, Power(e_star, Fraction(1, 64), 28))
        at_inf = compare(1 - g_star.fraction, Power(e_star, Fraction(1, 64), 28)) <= 0
    else:
        at_inf = working.achieved_eps == 0
    return GoodhomReport(hyp, all(a.is_good for a in hyp.values()), e_star, working, guarantee, at_inf)
