"""Homogeneous partitions of 3-graphs with bounded slicewise VC-dimension.

The construction runs in three layers:

* ``slice_reduce`` / ``group_slices``: every vertex x of U gets a homogeneous
  equipartition of its slice graph and a small reduced colored graph on the
  blocks; vertices with identical reduced graphs form a class.
* ``mainslice_partition``: for one class X, a partition of V that is almost
  good for H[X, V, W] (Steps I-VII below).
* ``slvc_partition`` / ``slvccor_partition``: the refinements over classes and
  over the three roles, and the reduction of a general 3-graph to a
  tripartite one.

Every bound that the construction relies on is recorded in a run log with its
achieved value; in working mode a failing bound is reported, never raised.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .constants import TheoreticalConstants, theoretical_constants
from .core import (
    BipartiteGraph,
    EdgeColoredBipartiteGraph,
    GeneralThreeGraph,
    Power,
    RationalLike,
    TripartiteThreeGraph,
    VertexPart,
    as_rational,
    compare,
    count_at_least,
    count_at_most,
    homogeneous_mask,
    tripartitize,
)
from .ecg import EchomResult, vcremoval_partition
from .graphreg import greedy_cover, homogeneous_equipartition
from .partitions import (
    GoodnessAudit,
    HomogeneityAudit,
    Partition,
    _block_sums,
    almost_good_partition,
    almost_good_set,
    audit_triple_homogeneity,
    combine,
    common_refinement,
)
from .triads import GoodhomReport, goodhom_audit
from .vc import BUDGET_EXHAUSTED, find_uk_copy

log = logging.getLogger(__name__)

__all__ = [
    "WorkingParams",
    "RunLog",
    "SliceReduction",
    "SliceGrouping",
    "MainSliceResult",
    "SLVCResult",
    "SLVCCorResult",
    "slice_reduce",
    "group_slices",
    "mainslice_partition",
    "slvc_partition",
    "slvccor_partition",
    "theoretical_constants",
]

# reduced-graph colors
F0, F1, F2 = 0, 1, 2

UK_SAMPLE_LIMIT = 40  # largest |A| for which the U(k) sanity search runs


@dataclass(frozen=True)
class WorkingParams:
    k: int = 3
    eps_slice: Fraction = Fraction(1, 20)
    eps_working: Fraction = Fraction(1, 10)
    delta_cover: Fraction = Fraction(1, 100)
    delta_pack: Fraction = Fraction(1, 20)
    size_caps: tuple = ()  # (name, cap) pairs: "slice", "refinement"
    strict_mode: bool = False
    uk_check: bool = False
    uk_budget: int = 10**5

    def __post_init__(self) -> None:
        for name in ("eps_slice", "eps_working", "delta_cover", "delta_pack"):
            v = as_rational(getattr(self, name))
            if not (0 < v < 1):
                raise ValueError(f"{name} must lie in (0, 1)")
            object.__setattr__(self, name, v)
        if self.k < 1:
            raise ValueError("k must be at least 1")

    def cap(self, name: str) -> Optional[int]:
        return dict(self.size_caps).get(name)


# ---------------------------------------------------------------------------
# run log


@dataclass
class RunLog:
    """Per-step bound checks; ``formula`` is the bound's formula evaluated at the
    working epsilon (strict report only), ``achieved`` the measured value."""

    strict: bool = False
    rows: list = field(default_factory=list)

    def add(self, step: str, bound: str, achieved, ok: bool, formula=None) -> bool:
        pv = "n/a" if (formula is None or not self.strict) else _fmt(formula)
        self.rows.append((step, bound, pv, _fmt(achieved), bool(ok)))
        return bool(ok)

    def extend(self, other: "RunLog", prefix: str = "") -> None:
        for step, b, pv, av, ok in other.rows:
            self.rows.append((prefix + step, b, pv, av, ok))

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r[4]]


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, Fraction):
        return f"{float(x):.6g}"
    if isinstance(x, Power):
        return f"{float(x):.6g}"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


# ---------------------------------------------------------------------------
# slice reduction


@dataclass
class SliceReduction:
    x: int
    ell: int  # blocks per side of the slice equipartition
    labels_V: np.ndarray  # 0 = error block B0, i >= 1 = i-th block in canonical order
    labels_W: np.ndarray
    F: np.ndarray  # (r+1) x (s+1) colors; row 0 and column 0 are F2
    irregular: int  # number of irregular block pairs
    audit_fraction: Fraction

    @property
    def r(self) -> int:
        return self.F.shape[0] - 1

    @property
    def s(self) -> int:
        return self.F.shape[1] - 1

    def key(self) -> tuple:
        return (self.ell, self.F.shape, self.F.tobytes())


def _canonical_order(F: np.ndarray, axis: int) -> np.ndarray:
    """Indices sorted by degree profile (#F0, #F1, #F2), then by index."""
    prof = np.stack([(F == c).sum(axis=1 - axis) for c in (F0, F1, F2)], axis=1)
    keys = [prof[:, 2], prof[:, 1], prof[:, 0]]
    return np.lexsort([np.arange(prof.shape[0])] + keys)


def _reduce_slice(G: BipartiteGraph, x: int, eps: Fraction, cap: Optional[int]) -> SliceReduction:
    eq = homogeneous_equipartition(G, 0, eps, size_cap=cap)
    PV, PW = eq.P_A, eq.P_B
    lv, lw = len(PV), len(PW)
    ell = max(lv, lw)
    counts = _block_sums(G.adj, [PV.labels(), PW.labels()], [lv, lw])
    sizes = np.outer(np.asarray(PV.sizes, dtype=np.int64), np.asarray(PW.sizes, dtype=np.int64))
    irr = ~homogeneous_mask(counts, sizes, eps)
    # blocks with at least eps*ell irregular partners are pooled into the error block
    err_v = irr.sum(axis=1) * eps.denominator >= eps.numerator * ell
    err_w = irr.sum(axis=0) * eps.denominator >= eps.numerator * ell
    keep_v, keep_w = np.nonzero(~err_v)[0], np.nonzero(~err_w)[0]
    c, z = counts[np.ix_(keep_v, keep_w)], sizes[np.ix_(keep_v, keep_w)]
    Fk = np.full(c.shape, F2, dtype=np.int8)
    Fk[(z - c) * eps.denominator <= eps.numerator * z] = F1  # d >= 1 - eps
    Fk[(c * eps.denominator <= eps.numerator * z) & (Fk != F1)] = F0  # d <= eps
    ov, ow = _canonical_order(Fk, 0), _canonical_order(Fk, 1)
    Fk = Fk[np.ix_(ov, ow)]
    F = np.full((Fk.shape[0] + 1, Fk.shape[1] + 1), F2, dtype=np.int8)
    F[1:, 1:] = Fk
    relab_v = np.zeros(lv, dtype=np.int64)
    relab_v[keep_v[ov]] = np.arange(1, len(ov) + 1)
    relab_w = np.zeros(lw, dtype=np.int64)
    relab_w[keep_w[ow]] = np.arange(1, len(ow) + 1)
    return SliceReduction(x, ell, relab_v[PV.labels()], relab_w[PW.labels()], F, int(irr.sum()), eq.audit.fraction)


def slice_reduce(H: TripartiteThreeGraph, x: int, eps_slice: RationalLike, size_cap: Optional[int] = None) -> SliceReduction:
    """Reduced colored graph of the slice of ``x`` (a vertex of the first part)."""
    nU = H.sizes[0]
    if not (0 <= x < nU):
        raise ValueError("x must be a vertex of the first part")
    G = BipartiteGraph(H.tensor[x], (H.names[1], H.names[2]))
    return _reduce_slice(G, x, as_rational(eps_slice), size_cap)


@dataclass
class SliceGrouping:
    reductions: list  # SliceReduction per x in U
    classes: list  # member lists (sorted), ordered by smallest member
    error_classes: list  # indices into classes that were pooled
    U_err: list

    @property
    def good_classes(self) -> list:
        bad = set(self.error_classes)
        return [c for i, c in enumerate(self.classes) if i not in bad]


def group_slices(
    H: TripartiteThreeGraph,
    eps_slice: RationalLike,
    threads: int = 1,
    eps_err: Optional[RationalLike] = None,
    size_cap: Optional[int] = None,
) -> SliceGrouping:
    """Classes of U with equal reduced graphs; classes below
    ``eps_err |U| / #classes`` are pooled into U_err."""
    eps = as_rational(eps_slice)
    eps_err = eps if eps_err is None else as_rational(eps_err)
    nU = H.sizes[0]
    xs = list(range(nU))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            reds = list(ex.map(lambda x: slice_reduce(H, x, eps, size_cap), xs))
    else:
        reds = [slice_reduce(H, x, eps, size_cap) for x in xs]
    groups: dict = {}
    for red in reds:
        groups.setdefault(red.key(), []).append(red.x)
    classes = sorted(groups.values(), key=lambda m: m[0])
    nE = len(classes)
    err = [i for i, m in enumerate(classes) if len(m) * nE * eps_err.denominator < eps_err.numerator * nU]
    U_err = sorted(x for i in err for x in classes[i])
    return SliceGrouping(reds, classes, err, U_err)


# ---------------------------------------------------------------------------
# the per-class construction


@dataclass
class MainSliceResult:
    P_V: Partition
    audit: GoodnessAudit
    runlog: RunLog
    flags: list
    n_cover_blocks: int  # |X-partition|
    n_error_blocks: int
    pieces: dict = field(default_factory=dict)  # per-A summaries


def _frac(num: int, den: int) -> Fraction:
    return Fraction(num, den) if den else Fraction(0)


def _cover_labels(cov, n: int) -> tuple[np.ndarray, dict]:
    """0 = error part, 1 = low-degree part, j+1 = j-th carved block."""
    lab = np.zeros(n, dtype=np.int64)
    lab[cov.A0] = 1
    for j, blk in enumerate(cov.blocks):
        lab[blk] = j + 2
    return lab, {j + 2: c for j, c in enumerate(cov.centers)}


def mainslice_partition(
    H: TripartiteThreeGraph,
    slices: Sequence[SliceReduction],
    params: WorkingParams,
    threads: int = 1,
) -> MainSliceResult:
    """Partition of V almost good for H = H[X, V, W], where all x in X share one
    reduced graph.  ``slices[i]`` is the reduction of the i-th vertex of X."""
    eps = params.eps_working
    rl = RunLog(params.strict_mode)
    flags: list = []
    nX, nV, nW = H.sizes
    if len(slices) != nX or nX == 0:
        raise ValueError("one slice reduction per vertex of X required")
    F = slices[0].F
    if any(s.F.shape != F.shape or not np.array_equal(s.F, F) for s in slices):
        raise ValueError("slices do not share one reduced graph")
    r, s = F.shape[0] - 1, F.shape[1] - 1
    ell = slices[0].ell
    T = H.tensor
    labV = np.stack([sl.labels_V for sl in slices])  # X x V
    labW = np.stack([sl.labels_W for sl in slices])  # X x W

    # hypotheses that can be checked directly
    sz_ok = True
    for sl in slices:
        for lab, n in ((sl.labels_V, nV), (sl.labels_W, nW)):
            bc = np.bincount(lab)[1:]
            bc = bc[bc > 0]
            if bc.size and (bc.min() < n // ell or bc.max() > -(-n // ell)):
                sz_ok = False
    rl.add("hyp", "block sizes |V|/l", sz_ok, sz_ok)
    rl.add("hyp", "r >= (1-eps) l", _frac(r, ell), r >= (1 - eps) * ell, formula=1 - eps)
    f2p = (F[1:, 1:] == F2).sum(axis=1) if r and s else np.zeros(0)
    f2q = (F[1:, 1:] == F2).sum(axis=0) if r and s else np.zeros(0)
    worst = max([_frac(int(v), s) for v in f2p] + [_frac(int(v), r) for v in f2q] + [Fraction(0)])
    rl.add("hyp", "|N_F2(p)| <= eps|Q|", worst, worst <= eps, formula=eps)

    # Step I: Gamma = triples whose pair colors are F0/F1 and agree with H
    E = F[labV[:, :, None], labW[:, None, :]]  # X x V x W
    gamma = ((E == F1) & T) | ((E == F0) & ~T)
    del E
    g_mass = int(gamma.sum(dtype=np.int64))
    tot = nX * nV * nW
    rl.add("I", "|Gamma| >= (1-3eps)|U||V||W|", _frac(g_mass, tot), g_mass >= (1 - 3 * eps) * tot, formula=1 - 3 * eps)
    degW = gamma.sum(axis=(0, 1), dtype=np.int64)
    degV = gamma.sum(axis=(0, 2), dtype=np.int64)
    W_good = degW * eps.denominator >= (eps.denominator - eps.numerator) * nX * nV
    V_good = degV * eps.denominator >= (eps.denominator - eps.numerator) * nX * nW
    nWg, nVg = int(W_good.sum()), int(V_good.sum())
    rl.add("I", "|W_good| >= (1-eps)|W|", _frac(nWg, nW), nWg >= (1 - eps) * nW, formula=1 - 2 * Power(eps, Fraction(1, 4)).__float__())
    rl.add("I", "|V_good| >= (1-eps)|V|", _frac(nVg, nV), nVg >= (1 - eps) * nV)
    # good pairs: nearly all of the opposite good part completes them in Gamma
    cXV = gamma[:, :, W_good].sum(axis=2, dtype=np.int64)
    cXW = gamma[:, V_good, :].sum(axis=1, dtype=np.int64)
    Ggood_XV = V_good[None, :] & (cXV * eps.denominator >= (eps.denominator - eps.numerator) * nWg) if nWg else np.zeros((nX, nV), bool)
    Ggood_XW = W_good[None, :] & (cXW * eps.denominator >= (eps.denominator - eps.numerator) * nVg) if nVg else np.zeros((nX, nW), bool)
    P_bad = (labV == 0) | ~Ggood_XV
    Q_bad = (labW == 0) | ~Ggood_XW
    pb, qb = P_bad.sum(axis=1), Q_bad.sum(axis=1)
    U_good = (pb * eps.denominator <= eps.numerator * max(nVg, 1)) & (qb * eps.denominator <= eps.numerator * max(nWg, 1))
    ug = np.nonzero(U_good)[0]
    n_uerr = nX - ug.size
    rl.add("I", "|U_err| <= 3eps|U|", _frac(n_uerr, nX), n_uerr <= 3 * eps * nX, formula=3 * float(Power(eps, Fraction(1, 8))))
    if ug.size == 0:
        flags.append("no good vertices in X")
        P_V = Partition.trivial(VertexPart(H.names[1], nV))
        return MainSliceResult(P_V, almost_good_partition(H, 1, P_V, eps), rl, flags, 0, 0)

    # Step II: greedy cover of every good Q-color, then the common refinement
    wg = np.nonzero(W_good)[0]
    cover_labels, centers = [], []
    Qgood = Ggood_XW[np.ix_(ug, wg)]
    labWg = labW[np.ix_(ug, wg)]
    for v in range(1, s + 1):
        adj = (labWg == v) & Qgood
        cov = greedy_cover(BipartiteGraph(adj), params.delta_cover)
        lab, cen = _cover_labels(cov, ug.size)
        cover_labels.append(lab)
        centers.append({j: int(wg[c]) for j, c in cen.items()})
    Xg = VertexPart("Ugood", int(ug.size))
    covers = [Partition.from_labels(Xg, lab) for lab in cover_labels]
    XP = common_refinement(covers, Xg) if covers else Partition.trivial(Xg)
    nblocks = len(XP)
    cap = params.cap("refinement")
    if cap is not None and nblocks > cap:
        flags.append(f"refinement size {nblocks} exceeds cap {cap}")
    rl.add("II", "|X| <= (2l)^l eps^-l", nblocks, True)
    stacked = np.stack(cover_labels, axis=1) if cover_labels else np.zeros((ug.size, 0), dtype=np.int64)
    work = []
    n_err = 0
    for blk in XP.blocks:
        bl = np.asarray(blk, dtype=np.int64)
        row = stacked[bl[0]]
        if len(bl) * nblocks * eps.denominator <= eps.numerator * ug.size or (row == 0).any():
            n_err += 1
            continue
        S = [v + 1 for v in range(s) if row[v] >= 2]
        if not S:
            flags.append("block with no usable colors moved to the error part")
            n_err += 1
            continue
        work.append((ug[bl], {v: centers[v - 1][int(row[v - 1])] for v in S}))
    rl.add("II", "error blocks of the X-partition", n_err, True)

    # Steps III-VI per block A
    def run(item):
        return _process_block(H, item[0], item[1], gamma, labV, labW, Ggood_XV, Ggood_XW, F, r, ell, params)

    if threads > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            outs = list(ex.map(run, work))
    else:
        outs = [run(it) for it in work]
    D_list = []
    pieces = {}
    for idx, (out, sub) in enumerate(outs):
        rl.extend(sub)
        D_list.append(out["D_V"])
        flags.extend(out["flags"])
        pieces[idx] = out["summary"]

    # Step VII
    ground = VertexPart(H.names[1], nV)
    P_V = common_refinement(D_list, ground) if D_list else Partition.trivial(ground)
    audit = almost_good_partition(H, 1, P_V, eps)
    rl.add("VII", "P_V almost eps-good for H[X,V,W]", audit.achieved_eps, audit.is_good, formula=6 * float(Power(eps, Fraction(1, 512))))
    # self-consistency: passes at its own achieved parameter
    if audit.achieved_eps < 1:
        again = almost_good_partition(H, 1, P_V, audit.achieved_eps + Fraction(1, 10**12))
        assert again.is_good
    return MainSliceResult(P_V, audit, rl, flags, nblocks, n_err, pieces)


def _process_block(H, A, S_centers: dict, gamma, labV, labW, Ggood_XV, Ggood_XW, F, r, ell, params: WorkingParams):
    """Steps III-VI for one block A (row ids into X) of the cover refinement."""
    eps = params.eps_working
    rl = RunLog(params.strict_mode)
    flags: list = []
    nX, nV, nW = H.sizes
    nA = len(A)
    T = H.tensor[A]  # A x V x W
    Sv = sorted(S_centers)
    lab_A = labV[A]
    gg = Ggood_XV[A]
    cut = Power(eps, Fraction(1, 16), r)
    colors = {}
    for v in Sv:
        c = S_centers[v]
        colv = F[1:, v]
        n1, n0 = int((colv == F1).sum()), int((colv == F0).sum())
        in_c0, in_c1 = compare(n1, cut) <= 0, compare(n0, cut) <= 0
        Pv = F[lab_A, v]  # A x V color of each pair under q_v
        base = gg & gamma[A, :, c]
        P1 = (Pv == F1) & base
        P0 = (Pv == F0) & base
        if in_c1 and not in_c0:
            P0[:] = False  # case (a)
        elif in_c0 and not in_c1:
            P1[:] = False  # case (b)
        col = np.full((nA, nV), 2, dtype=np.int8)
        col[P0] = 0
        col[P1] = 1
        colors[v] = col
        e2 = (col == 2).sum(axis=1).max()
        rl.add("III", f"max |N_P2(x)| <= eps|V| (v={v})", _frac(int(e2), nV), e2 <= eps * nV, formula=4 * float(Power(eps, Fraction(1, 16))))
        if params.uk_check and nA <= UK_SAMPLE_LIMIT:
            found = find_uk_copy(EdgeColoredBipartiteGraph(col, 2), 0, 1, params.k, params.uk_budget)
            ok = found is None
            rl.add("III", f"no P0/P1 copy of U(k) (v={v})", "unknown" if found is BUDGET_EXHAUSTED else ok, ok or found is BUDGET_EXHAUSTED)
    # Step IV
    res: dict[int, EchomResult] = {}
    for v in Sv:
        res[v] = vcremoval_partition(EdgeColoredBipartiteGraph(colors[v], 2), params.k, eps, params.delta_pack)
        rl.add("IV", f"vcremoval homogeneous (v={v})", res[v].achieved_eps, res[v].passes, formula=2 * float(Power(params.delta_pack, Fraction(1, 16))))
    gA = VertexPart("A", nA)
    gV = VertexPart(H.names[1], nV)
    D_A = common_refinement([res[v].P_A for v in Sv], gA)
    D_V = common_refinement([res[v].P_B for v in Sv], gV)

    # Step V: triads (X, Y, v) with X in D_A, Y in D_V, v in {0} + S
    la, lv = D_A.labels(), D_V.labels()
    na, nv = len(D_A), len(D_V)
    nS = len(Sv) + 1
    # vmap[x, z]: index of the Q-color containing xz (0 = the rest)
    # only good pairs keep their color; everything else falls into color 0
    vmap = np.zeros((nA, nW), dtype=np.int64)
    labW_A, qgood = labW[A], Ggood_XW[A]
    for i, v in enumerate(Sv):
        vmap[(labW_A == v) & qgood] = i + 1
    ntri = np.zeros((na, nv, nS), dtype=np.int64)
    nG = np.zeros_like(ntri)
    nH = np.zeros_like(ntri)
    stack = np.full((nS, nA, nV), 2, dtype=np.int8)
    for i, v in enumerate(Sv):
        stack[i + 1] = colors[v]
    for xi in range(nA):
        vm = vmap[xi]  # W
        cnt_v = np.bincount(vm, minlength=nS)  # |N_{Q_v}(x)|
        pc = stack[vm, xi, :].T  # V x W: P-color of xy under the Q-color of xz
        g = pc == T[xi]
        # per (Y, v) sums
        code = (lv[:, None] * nS + vm[None, :]).ravel()
        nG[la[xi]] += np.bincount(code, weights=g.ravel(), minlength=nv * nS).astype(np.int64).reshape(nv, nS)
        nH[la[xi]] += np.bincount(code, weights=T[xi].ravel(), minlength=nv * nS).astype(np.int64).reshape(nv, nS)
        ntri[la[xi]] += np.outer(np.bincount(lv, minlength=nv), cnt_v)
    den, num = eps.denominator, eps.numerator
    t_A = (ntri > 0) & (nG * den >= (den - num) * ntri)
    # Omega: (X, Y) nearly inside one non-error P-color of v
    t_1 = np.zeros_like(t_A)
    szA = np.bincount(la, minlength=na)
    szV = np.bincount(lv, minlength=nv)
    box = np.outer(szA, szV)
    for i, v in enumerate(Sv):
        for tau in (0, 1):
            c = _block_sums(colors[v] == tau, [la, lv], [na, nv])
            t_1[:, :, i + 1] |= c * den >= (den - num) * box
    big = ntri * den * ell >= (den - num) * (box[:, :, None] * nW)
    t_good = t_A & t_1 & big
    hom = homogeneous_mask(nH[t_good], ntri[t_good], eps)
    n_good = int(t_good.sum())
    rl.add("V", "every good triad eps-homogeneous", _frac(int((~hom).sum()), max(n_good, 1)), bool(hom.all()), formula=3 * float(Power(eps, Fraction(1, 32))))
    cov_mass = int(ntri[t_good].sum())
    rl.add("V", "good triads cover (1-eps)|A||V||W|", _frac(cov_mass, nA * nV * nW), cov_mass >= (1 - eps) * nA * nV * nW)

    # Step VI
    per_Y = (ntri * t_good).sum(axis=(0, 2))
    in_V = per_Y * den >= (den - num) * nA * szV * nW
    HA = TripartiteThreeGraph(T, H.names)
    good_Y = 0
    for y in np.nonzero(in_V)[0]:
        if almost_good_set(HA, 1, D_V.blocks[y], eps).is_good:
            good_Y += 1
    n_in = int(in_V.sum())
    rl.add("VI", "blocks of V_A almost eps-good", _frac(good_Y, max(n_in, 1)), good_Y == n_in)
    covV = int(szV[in_V].sum())
    rl.add("VI", "|union V_A| >= (1-eps)|V|", _frac(covV, nV), covV >= (1 - eps) * nV)
    summary = {"size": nA, "colors": len(Sv), "D_A": na, "D_V": nv, "good_triads": n_good}
    return {"D_V": D_V, "flags": flags, "summary": summary}, rl


# ---------------------------------------------------------------------------
# assembly

# (first, second, third) roles; the partition built is of the second role
ROLES = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass
class SideRun:
    part: str  # name of the part that was partitioned
    partition: Partition
    grouping: SliceGrouping
    classes: list  # MainSliceResult per good class


@dataclass
class SLVCResult:
    partition: Partition  # over U then V then W
    sides: dict  # part name -> Partition
    runs: list  # SideRun per role
    report: GoodhomReport
    runlog: RunLog
    flags: list
    constants: Optional[TheoreticalConstants] = None

    @property
    def fraction(self) -> Fraction:
        return self.report.fraction


def _partition_second(H: TripartiteThreeGraph, params: WorkingParams, threads: int, rl: RunLog, flags: list, tag: str) -> SideRun:
    """Partition of the second part of H, refined over the slice classes of the first."""
    eps = params.eps_working
    grp = group_slices(H, params.eps_slice, threads, eps_err=eps, size_cap=params.cap("slice"))
    nU = H.sizes[0]
    nE = len(grp.classes)
    rl.add(f"{tag}:classes", "number of slice classes", nE, True)
    rl.add(f"{tag}:classes", "|U_err| <= eps|U|", _frac(len(grp.U_err), nU), len(grp.U_err) <= eps * nU, formula=eps)
    results = []
    parts = []
    for ci, members in enumerate(grp.good_classes):
        sub = H.restrict([members, range(H.sizes[1]), range(H.sizes[2])])
        ms = mainslice_partition(sub, [grp.reductions[x] for x in members], params, threads)
        rl.extend(ms.runlog, f"{tag}:class{ci}:")
        flags.extend(f"{tag}: {f}" for f in ms.flags)
        results.append(ms)
        parts.append(ms.P_V)
    ground = VertexPart(H.names[1], H.sizes[1])
    P = common_refinement(parts, ground) if parts else Partition.trivial(ground)
    return SideRun(H.names[1], P, grp, results)


def slvc_partition(H: TripartiteThreeGraph, params: Optional[WorkingParams] = None, threads: int = 1, tau=None) -> SLVCResult:
    """Partition P_U + P_V + P_W of a tripartite 3-graph with equal parts, audited
    for triple homogeneity at ``params.eps_working``."""
    params = params or WorkingParams()
    n = H.sizes[0]
    if H.sizes != (n, n, n):
        raise ValueError("parts must have equal size")
    if n == 0:
        raise ValueError("empty parts")
    rl = RunLog(params.strict_mode)
    flags: list = []
    sides: dict = {}
    runs = []
    for order in ROLES:
        Hp = H.permuted(order)
        tag = "".join(H.names[i] for i in order)
        run = _partition_second(Hp, params, threads, rl, flags, tag)
        sides[run.part] = run.partition
        runs.append(run)
    P = combine([sides[nm] for nm in H.names], "".join(H.names))
    report = goodhom_audit(H, P, params.eps_working)
    rl.add("final", "triple audit fraction >= 1-eps", report.fraction, report.working.passes, formula=1 - params.eps_working)
    consts = None
    if params.strict_mode:
        consts = theoretical_constants(params.k, params.eps_working if tau is None else tau)
    return SLVCResult(P, sides, runs, report, rl, flags, consts)


@dataclass
class SLVCCorResult:
    partition: Partition  # of V(H)
    audit: HomogeneityAudit
    tripartite: SLVCResult
    tripartite_audit: HomogeneityAudit  # audit of the pulled-back blocks on the tripartite graph
    diagonal_mass: int

    @property
    def fraction(self) -> Fraction:
        return self.audit.fraction


def slvccor_partition(H: GeneralThreeGraph, params: Optional[WorkingParams] = None, threads: int = 1) -> SLVCCorResult:
    """Homogeneous partition of a general 3-graph via its tripartite copy."""
    params = params or WorkingParams()
    n = H.n
    if n == 0:
        raise ValueError("empty vertex set")
    tp = tripartitize(H)
    res = slvc_partition(tp.graph, params, threads)
    ground = VertexPart("V", n)
    pulled = [Partition(ground, res.sides[nm].blocks) for nm in tp.graph.names]
    Q = common_refinement(pulled, ground)
    assert len(Q) <= len(pulled[0]) * len(pulled[1]) * len(pulled[2])
    eps = params.eps_working
    audit = audit_triple_homogeneity(H, Q, eps)
    # the same blocks on the tripartite copy: both audits range over all n^3
    # ordered triples, and tuples with a repeated vertex are non-edges in both
    Qs = [Partition(VertexPart(nm, n), Q.blocks) for nm in tp.graph.names]
    t_audit = audit_triple_homogeneity(tp.graph, combine(Qs, "".join(tp.graph.names)), eps)
    diag = n**3 - n * (n - 1) * (n - 2)
    assert t_audit.extra["cross_total_mass"] == audit.total_mass
    assert t_audit.extra["cross_good_mass"] == audit.good_mass
    return SLVCCorResult(Q, audit, res, t_audit, diag)
