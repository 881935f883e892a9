"""Shattering-based VC-dimension, slicewise VC-dimension and U(k) search.

A graph is read as the set system of its vertex neighborhoods over its own
vertex set.  A subset S is shattered when the traces ``N(x) & S`` realise all
``2**|S|`` subsets; shattered sets are closed downward, so the search proceeds
level by level, extending only sets whose every facet is already shattered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .core import (
    BipartiteGraph,
    EdgeColoredBipartiteGraph,
    GeneralThreeGraph,
    Graph,
    TripartiteThreeGraph,
    slice_graph,
)

Vertex = tuple  # (part name, id)


@dataclass(frozen=True)
class ShatterWitness:
    shattered: tuple
    # frozenset of positions in ``shattered`` -> witness vertex
    witnesses: dict = field(hash=False)

    def to_json(self) -> dict:
        return {
            "shattered": [list(v) for v in self.shattered],
            "witnesses": [
                {"subset": sorted(S), "vertex": list(w)}
                for S, w in sorted(self.witnesses.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            ],
        }


@dataclass(frozen=True)
class VCResult:
    value: int
    witness: Optional[ShatterWitness]
    capped: bool

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness": None if self.witness is None else self.witness.to_json(),
            "capped": self.capped,
        }


def _labels(G: Union[BipartiteGraph, Graph]) -> list:
    if isinstance(G, BipartiteGraph):
        return [(G.names[0], i) for i in range(G.nA)] + [(G.names[1], j) for j in range(G.nB)]
    return [("V", i) for i in range(G.n)]


def _trace_codes(adj: np.ndarray, cols: tuple) -> np.ndarray:
    weights = np.left_shift(np.int64(1), np.arange(len(cols), dtype=np.int64))
    return adj[:, list(cols)].astype(np.int64) @ weights


def _is_shattered(adj: np.ndarray, cols: tuple) -> bool:
    return np.unique(_trace_codes(adj, cols)).size == 1 << len(cols)


def vc_of_adjacency(adj: np.ndarray, cap: int) -> tuple[int, Optional[tuple]]:
    """Largest shattered column set (size at most cap) of a square 0/1 matrix.

    Row x is the set N(x).  Returns the value and the lexicographically first
    shattered set of that size.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    n = adj.shape[0]
    adj = np.asarray(adj, dtype=bool)
    best: Optional[tuple] = ()
    if cap == 0 or n == 0:
        return 0, ()
    level = [(i,) for i in range(n) if _is_shattered(adj, (i,))]
    if not level:
        return 0, ()
    k = 1
    best = level[0]
    while k < cap and (1 << (k + 1)) <= n:
        known = set(level)
        nxt = []
        for S in level:
            for e in range(S[-1] + 1, n):
                T = S + (e,)
                if any(T[:i] + T[i + 1 :] not in known for i in range(k)):
                    continue
                if _is_shattered(adj, T):
                    nxt.append(T)
        if not nxt:
            break
        level = nxt
        k += 1
        best = level[0]
    return k, best


def _witness(adj: np.ndarray, cols: tuple, labels: list) -> ShatterWitness:
    codes = _trace_codes(adj, cols)
    wit = {}
    for x, c in enumerate(codes.tolist()):
        S = frozenset(i for i in range(len(cols)) if (c >> i) & 1)
        if S not in wit:
            wit[S] = labels[x]
    return ShatterWitness(tuple(labels[c] for c in cols), wit)


def vc_dimension(G: Union[BipartiteGraph, Graph], cap: int) -> VCResult:
    adj = G.full_adjacency()
    value, cols = vc_of_adjacency(adj, cap)
    witness = _witness(adj, cols, _labels(G)) if value > 0 else None
    return VCResult(value, witness, capped=value == cap and cap > 0)


@dataclass(frozen=True)
class SVCResult:
    value: int
    worst_slice: Optional[tuple]
    witness: Optional[ShatterWitness]
    capped: bool

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "worst_slice": None if self.worst_slice is None else list(self.worst_slice),
            "witness": None if self.witness is None else self.witness.to_json(),
            "capped": self.capped,
        }


def _slices(H: Union[TripartiteThreeGraph, GeneralThreeGraph]):
    if isinstance(H, TripartiteThreeGraph):
        for p in range(3):
            for x in range(H.sizes[p]):
                yield (H.names[p], x), slice_graph(H, x, p)
    else:
        for x in range(H.n):
            yield ("V", x), slice_graph(H, x)


def slicewise_vc(H: Union[TripartiteThreeGraph, GeneralThreeGraph], cap: int) -> SVCResult:
    """Maximum VC-dimension over all slice graphs; ties go to the first slice."""
    best: Optional[tuple] = None
    best_res: Optional[VCResult] = None
    seen: dict = {}
    for label, G in _slices(H):
        key = (G.adj.shape, G.adj.tobytes())
        if key in seen:
            continue
        res = vc_dimension(G, cap)
        seen[key] = res.value
        if best_res is None or res.value > best_res.value:
            best, best_res = label, res
            if res.value >= cap:
                break
    if best_res is None:
        return SVCResult(0, None, None, False)
    return SVCResult(best_res.value, best, best_res.witness, best_res.capped)


# ---------------------------------------------------------------------------
# U(k) copies in edge-colored bipartite graphs


@dataclass(frozen=True)
class UkWitness:
    left: tuple
    # frozenset S of positions in ``left`` -> right vertex id
    right: dict = field(hash=False)
    colors: tuple = (0, 1)
    side: str = "B"  # part holding the right side

    def check(self, G: EdgeColoredBipartiteGraph) -> bool:
        u, v = self.colors
        C = G.colors if self.side == "B" else G.colors.T
        for S, y in self.right.items():
            for i, x in enumerate(self.left):
                want = u if i in S else v
                if C[x, y] != want:
                    return False
        return len(self.right) == 1 << len(self.left)

    def to_json(self) -> dict:
        return {
            "left": list(self.left),
            "right": [{"subset": sorted(S), "vertex": y} for S, y in sorted(self.right.items(), key=lambda kv: sorted(kv[0]))],
            "colors": list(self.colors),
            "side": self.side,
        }


class _BudgetExhausted:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "BUDGET_EXHAUSTED"

    def __bool__(self) -> bool:
        return False


BUDGET_EXHAUSTED = _BudgetExhausted()
DEFAULT_BUDGET = 10**8


def _bitsets(mask: np.ndarray) -> list[int]:
    # row i -> python int with bit j set iff mask[i, j]
    packed = np.packbits(mask, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


class _Search:
    def __init__(self, Nu: list[int], Nv: list[int], k: int, budget: int):
        self.Nu, self.Nv, self.k = Nu, Nv, k
        self.budget = budget
        self.nodes = 0

    def run(self, full: int):
        # cands[S] is indexed by the bitmask of S over the chosen prefix
        return self._dfs([], [full], 0)

    def _dfs(self, chosen: list, cands: list, start: int):
        if len(chosen) == self.k:
            return chosen, cands
        for x in range(start, len(self.Nu)):
            if len(self.Nu) - x < self.k - len(chosen):
                break
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfBudget
            nu, nv = self.Nu[x], self.Nv[x]
            # bit m of the new index records whether position m lies in S
            m = len(chosen)
            ordered = [0] * (1 << (m + 1))
            ok = True
            for idx, C in enumerate(cands):
                a, b = C & nv, C & nu
                if not a or not b:
                    ok = False
                    break
                ordered[idx] = a
                ordered[idx | (1 << m)] = b
            if not ok:
                continue
            found = self._dfs(chosen + [x], ordered, x + 1)
            if found is not None:
                return found
        return None


class _OutOfBudget(Exception):
    pass


def find_uk_copy(G: EdgeColoredBipartiteGraph, u: int, v: int, k: int, budget: int = DEFAULT_BUDGET):
    """Search for an ``E_u/E_v``-copy of U(k) with right side in B, then in A.

    Returns a :class:`UkWitness`, ``None`` when no copy exists, or
    ``BUDGET_EXHAUSTED`` when the node budget ran out first.
    """
    G.check_color(u)
    G.check_color(v)
    if u == v:
        raise ValueError("colors must differ")
    if k < 1:
        raise ValueError("k must be at least 1")
    exhausted = False
    for side, C in (("B", G.colors), ("A", G.colors.T)):
        n_right = C.shape[1]
        if C.shape[0] < k or n_right < (1 << k):
            continue
        s = _Search(_bitsets(C == u), _bitsets(C == v), k, budget)
        try:
            found = s.run((1 << n_right) - 1)
        except _OutOfBudget:
            exhausted = True
            continue
        if found is not None:
            chosen, cands = found
            right = {}
            for idx, cset in enumerate(cands):
                S = frozenset(i for i in range(k) if (idx >> i) & 1)
                right[S] = _lowest_bit(cset)
            return UkWitness(tuple(chosen), right, (u, v), side)
    return BUDGET_EXHAUSTED if exhausted else None


def uk_pattern_graph(k: int) -> BipartiteGraph:
    """Canonical U(k): left a_1..a_k, right b_S for S in subsets of [k] (bitmask order)."""
    adj = np.zeros((k, 1 << k), dtype=bool)
    for S in range(1 << k):
        for i in range(k):
            adj[i, S] = bool((S >> i) & 1)
    return BipartiteGraph(adj)


def pair_neighborhood_graph(H: Union[TripartiteThreeGraph, GeneralThreeGraph]) -> BipartiteGraph:
    """Bipartite graph joining each vertex z to every pair xy with xyz an edge."""
    if isinstance(H, TripartiteThreeGraph):
        t = H.tensor
        nU, nV, nW = H.sizes
        n = nU + nV + nW
        off = H.global_offsets()
        pairs = []
        cols = []
        for (p, q, r) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            tt = np.moveaxis(t, (p, q, r), (0, 1, 2))
            for a, b in itertools.product(range(tt.shape[0]), range(tt.shape[1])):
                pairs.append((off[p] + a, off[q] + b))
                col = np.zeros(n, dtype=bool)
                col[off[r] : off[r] + tt.shape[2]] = tt[a, b]
                cols.append(col)
        adj = np.array(cols, dtype=bool).T if cols else np.zeros((n, 0), dtype=bool)
        return BipartiteGraph(adj, ("V", "P"))
    T = H.tensor()
    cols = [T[a, b] for a, b in itertools.combinations(range(H.n), 2)]
    adj = np.array(cols, dtype=bool).T if cols else np.zeros((H.n, 0), dtype=bool)
    return BipartiteGraph(adj, ("V", "P"))
