"""Vertex parts, dense (hyper)graph containers, exact densities and thresholds.

All adjacency is stored as numpy boolean arrays: a bipartite graph is an
``nA x nB`` matrix, a tripartite 3-graph an ``nU x nV x nW`` tensor.  Every
density is an integer count pair and every threshold test is carried out in
exact rational arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

RationalLike = Union[Fraction, int, str, float]


def as_rational(x: RationalLike) -> Fraction:
    """Convert user input to an exact rational.

    Floats go through their shortest decimal repr, so ``0.05`` becomes 1/20
    rather than the binary approximation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class Power:
    """The real number ``coef * base ** exponent`` kept symbolically.

    Used for thresholds such as ``4 * eps**(1/16)`` so that comparisons stay
    exact: ``x < c*b**(p/q)`` iff ``(x/c)**q < b**p`` for nonnegative x.
    """

    base: Fraction
    exponent: Fraction = Fraction(1)
    coef: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", as_rational(self.base))
        object.__setattr__(self, "exponent", as_rational(self.exponent))
        object.__setattr__(self, "coef", as_rational(self.coef))
        if self.base < 0 or self.coef <= 0 or self.exponent <= 0:
            raise ValueError("Power needs base >= 0, coef > 0, exponent > 0")

    def compare(self, x: Fraction) -> int:
        """Sign of ``x - value`` computed exactly."""
        x = as_rational(x)
        if x < 0:
            return -1
        p, q = self.exponent.numerator, self.exponent.denominator
        lhs = (x / self.coef) ** q
        rhs = self.base**p
        return (lhs > rhs) - (lhs < rhs)

    def __float__(self) -> float:
        return float(self.coef) * float(self.base) ** float(self.exponent)

    def scaled(self, factor: RationalLike) -> "Power":
        return Power(self.base, self.exponent, self.coef * as_rational(factor))

    def describe(self) -> str:
        e = self.exponent
        core = f"{self.base}" if e == 1 else f"({self.base})^({e})"
        return core if self.coef == 1 else f"{self.coef}*{core}"


Threshold = Union[Fraction, Power]


def as_threshold(t: Union[Threshold, RationalLike]) -> Threshold:
    return t if isinstance(t, Power) else as_rational(t)


def compare(x: RationalLike, t: Threshold) -> int:
    """Exact three-way comparison of a rational against a threshold."""
    x = as_rational(x)
    if isinstance(t, Power):
        return t.compare(x)
    t = as_rational(t)
    return (x > t) - (x < t)


def threshold_float(t: Threshold) -> float:
    return float(t)


def in_homogeneous_range(d: RationalLike, t: Threshold) -> bool:
    """True iff ``d`` lies in ``[0, t) U (1 - t, 1]``."""
    d = as_rational(d)
    return compare(d, t) < 0 or compare(1 - d, t) < 0


def count_at_least(count: int, total: int, t: Threshold) -> bool:
    """True iff ``count >= (1 - t) * total``, i.e. the shortfall is at most t."""
    if total == 0:
        return True
    return compare(Fraction(total - count, total), t) <= 0


def count_at_most(count: int, total: int, t: Threshold) -> bool:
    """True iff ``count <= t * total``."""
    if total == 0:
        return count <= 0
    return compare(Fraction(count, total), t) <= 0


def floor_times(t: Threshold, m: int) -> int:
    """Exact ``floor(t * m)`` for a nonnegative integer m."""
    if m == 0:
        return 0
    if not isinstance(t, Power):
        return int((as_rational(t) * m) // 1)
    # binary search on the integer answer; compare is exact
    lo, hi = 0, 1
    while compare(hi, t.scaled(m)) <= 0:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if compare(mid, t.scaled(m)) <= 0:
            lo = mid
        else:
            hi = mid
    return lo


def homogeneous_mask(counts: np.ndarray, sizes: np.ndarray, t: Threshold) -> np.ndarray:
    """Vectorised ``in_homogeneous_range(counts/sizes, t)``; zero sizes give False."""
    counts = np.asarray(counts, dtype=np.int64)
    sizes = np.asarray(sizes, dtype=np.int64)
    out = np.zeros(counts.shape, dtype=bool)
    pos = sizes > 0
    if not isinstance(t, Power):
        t = as_rational(t)
        p, q = t.numerator, t.denominator
        bound = int(sizes.max(initial=0)) * max(abs(p), q, 1)
        if bound < 2**62:
            c, s = counts[pos], sizes[pos]
            out[pos] = (c * q < p * s) | ((s - c) * q < p * s)
            return out
    pairs = np.stack([counts[pos], sizes[pos]], axis=-1)
    if pairs.size == 0:
        return out
    uniq, inv = np.unique(pairs, axis=0, return_inverse=True)
    flags = np.array([in_homogeneous_range(Fraction(int(c), int(s)), t) for c, s in uniq], dtype=bool)
    out[pos] = flags[inv.reshape(-1)]
    return out


@dataclass(frozen=True)
class Density:
    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den <= 0 or self.num < 0 or self.num > self.den:
            raise ValueError(f"invalid density {self.num}/{self.den}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def is_homogeneous(self, t: Union[Threshold, RationalLike]) -> bool:
        return in_homogeneous_range(self.value, as_threshold(t))

    def __float__(self) -> float:
        return self.num / self.den

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Density):
            return self.num * other.den == other.num * self.den
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other: "Density") -> bool:
        return self.num * other.den < other.num * self.den

    def to_json(self) -> dict:
        return {"num": self.num, "den": self.den}


def rational_json(x: Fraction) -> dict:
    x = as_rational(x)
    return {"num": x.numerator, "den": x.denominator}


@dataclass(frozen=True)
class VertexPart:
    name: str
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("part size must be nonnegative")

    def ids(self) -> range:
        return range(self.n)


def _index_array(ids: Iterable[int], n: int, what: str = "vertex") -> np.ndarray:
    arr = np.asarray(sorted(set(int(i) for i in ids)), dtype=np.int64)
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise ValueError(f"unknown {what} id")
    return arr


def _nonempty(arr: np.ndarray) -> np.ndarray:
    if arr.size == 0:
        raise ValueError("empty side")
    return arr


class BipartiteGraph:
    """Bipartite graph with parts A and B and a dense boolean adjacency matrix."""

    def __init__(self, adj: np.ndarray, names: tuple[str, str] = ("A", "B")):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2:
            raise ValueError("adjacency must be a matrix")
        self.adj = adj
        self.adj.setflags(write=False)
        self.names = names

    @classmethod
    def from_edges(cls, nA: int, nB: int, edges: Iterable[tuple[int, int]], names=("A", "B")) -> "BipartiteGraph":
        adj = np.zeros((nA, nB), dtype=bool)
        for a, b in edges:
            if not (0 <= a < nA and 0 <= b < nB):
                raise ValueError(f"edge ({a},{b}) out of range")
            adj[a, b] = True
        return cls(adj, names)

    @property
    def nA(self) -> int:
        return self.adj.shape[0]

    @property
    def nB(self) -> int:
        return self.adj.shape[1]

    @property
    def parts(self) -> tuple[VertexPart, VertexPart]:
        return VertexPart(self.names[0], self.nA), VertexPart(self.names[1], self.nB)

    def edge_count(self) -> int:
        return int(self.adj.sum())

    def edges(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.adj))]

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(self.adj.T.copy(), (self.names[1], self.names[0]))

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "BipartiteGraph":
        return BipartiteGraph(self.adj[np.ix_(np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))].copy(), self.names)

    def full_adjacency(self) -> np.ndarray:
        """Symmetric adjacency over A then B (A ids first)."""
        n = self.nA + self.nB
        m = np.zeros((n, n), dtype=bool)
        m[: self.nA, self.nA :] = self.adj
        m[self.nA :, : self.nA] = self.adj.T
        return m

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BipartiteGraph) and self.adj.shape == other.adj.shape and bool(np.array_equal(self.adj, other.adj))


class Graph:
    """Simple undirected graph on ``range(n)``."""

    def __init__(self, adj: np.ndarray):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(adj, adj.T) or adj.diagonal().any():
            raise ValueError("adjacency must be symmetric with empty diagonal")
        self.adj = adj
        self.adj.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"bad edge ({a},{b})")
            adj[a, b] = adj[b, a] = True
        return cls(adj)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def edge_count(self) -> int:
        return int(self.adj.sum()) // 2

    def full_adjacency(self) -> np.ndarray:
        return self.adj


PART_ORDER = (0, 1, 2)


class TripartiteThreeGraph:
    """Tripartite 3-graph stored as a boolean ``nU x nV x nW`` tensor."""

    def __init__(self, tensor: np.ndarray, names: tuple[str, str, str] = ("U", "V", "W")):
        tensor = np.asarray(tensor, dtype=bool)
        if tensor.ndim != 3:
            raise ValueError("tensor must be 3-dimensional")
        self.tensor = tensor
        self.tensor.setflags(write=False)
        self.names = names

    @classmethod
    def from_edges(cls, sizes: tuple[int, int, int], edges: Iterable[tuple[int, int, int]], names=("U", "V", "W")) -> "TripartiteThreeGraph":
        t = np.zeros(sizes, dtype=bool)
        for e in edges:
            if any(not (0 <= e[i] < sizes[i]) for i in range(3)):
                raise ValueError(f"edge {e} out of range")
            t[e] = True
        return cls(t, names)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(int(s) for s in self.tensor.shape)  # type: ignore[return-value]

    @property
    def parts(self) -> tuple[VertexPart, VertexPart, VertexPart]:
        return tuple(VertexPart(nm, n) for nm, n in zip(self.names, self.sizes))  # type: ignore[return-value]

    def part_index(self, part: Union[int, str]) -> int:
        if isinstance(part, (int, np.integer)):
            if part not in PART_ORDER:
                raise ValueError(f"unknown part {part}")
            return int(part)
        if part not in self.names:
            raise ValueError(f"unknown part {part!r}")
        return self.names.index(part)

    def edge_count(self) -> int:
        return int(self.tensor.sum())

    def edges(self) -> list[tuple[int, int, int]]:
        return [tuple(int(c) for c in e) for e in zip(*np.nonzero(self.tensor))]  # type: ignore[misc]

    def permuted(self, order: Sequence[int]) -> "TripartiteThreeGraph":
        """Reorder the parts so that new part i is old part ``order[i]``."""
        order = tuple(int(o) for o in order)
        if sorted(order) != [0, 1, 2]:
            raise ValueError("order must be a permutation of (0,1,2)")
        return TripartiteThreeGraph(np.ascontiguousarray(self.tensor.transpose(order)), tuple(self.names[o] for o in order))  # type: ignore[arg-type]

    def restrict(self, ids: Sequence[Sequence[int]]) -> "TripartiteThreeGraph":
        idx = [np.asarray(i, dtype=np.int64) for i in ids]
        return TripartiteThreeGraph(self.tensor[np.ix_(*idx)].copy(), self.names)

    def global_offsets(self) -> tuple[int, int, int]:
        a, b, _ = self.sizes
        return (0, a, a + b)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TripartiteThreeGraph) and self.tensor.shape == other.tensor.shape and bool(np.array_equal(self.tensor, other.tensor))


class GeneralThreeGraph:
    """3-graph on ``range(n)`` with edges given as 3-element vertex sets."""

    def __init__(self, n: int, edges: Iterable[Iterable[int]]):
        if n < 0:
            raise ValueError("n must be nonnegative")
        canon = set()
        for e in edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != 3 or len(set(t)) != 3:
                raise ValueError(f"edge {tuple(e)} is not a 3-element set")
            if t[0] < 0 or t[2] >= n:
                raise ValueError(f"edge {t} out of range")
            canon.add(t)
        self.n = n
        self.edge_list: tuple[tuple[int, int, int], ...] = tuple(sorted(canon))
        self._tensor: np.ndarray | None = None

    @property
    def vertices(self) -> VertexPart:
        return VertexPart("V", self.n)

    def edge_count(self) -> int:
        return len(self.edge_list)

    def tensor(self) -> np.ndarray:
        """Symmetric ``n x n x n`` membership tensor of all ordered placements."""
        if self._tensor is None:
            t = np.zeros((self.n,) * 3, dtype=bool)
            if self.edge_list:
                e = np.asarray(self.edge_list, dtype=np.int64)
                for perm in itertools.permutations(range(3)):
                    t[e[:, perm[0]], e[:, perm[1]], e[:, perm[2]]] = True
            t.setflags(write=False)
            self._tensor = t
        return self._tensor

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GeneralThreeGraph) and self.n == other.n and self.edge_list == other.edge_list


class EdgeColoredBipartiteGraph:
    """Coloring of every cross pair of ``A x B`` by one of the colors ``0..r``."""

    def __init__(self, colors: np.ndarray, r: int):
        colors = np.asarray(colors)
        if colors.ndim != 2:
            raise ValueError("color array must be a matrix")
        if r < 1:
            raise ValueError("need at least two colors")
        if colors.size and (colors.min() < 0 or colors.max() > r):
            raise ValueError("colors not a partition of the cross pairs: value out of range")
        self.colors = colors.astype(np.int8, copy=True)
        self.colors.setflags(write=False)
        self.r = int(r)

    @classmethod
    def from_masks(cls, masks: Sequence[np.ndarray]) -> "EdgeColoredBipartiteGraph":
        stack = np.asarray([np.asarray(m, dtype=bool) for m in masks])
        if stack.ndim != 3:
            raise ValueError("masks must be equal-shape matrices")
        cover = stack.sum(axis=0)
        if not np.all(cover == 1):
            raise ValueError("colors not a partition of the cross pairs")
        return cls(np.argmax(stack, axis=0), len(masks) - 1)

    @property
    def nA(self) -> int:
        return self.colors.shape[0]

    @property
    def nB(self) -> int:
        return self.colors.shape[1]

    def mask(self, c: int) -> np.ndarray:
        self.check_color(c)
        return self.colors == c

    def check_color(self, c: int) -> None:
        if not (0 <= int(c) <= self.r):
            raise ValueError(f"invalid color index {c}")

    def color_size(self, c: int) -> int:
        return int((self.colors == c).sum())

    def transpose(self) -> "EdgeColoredBipartiteGraph":
        return EdgeColoredBipartiteGraph(self.colors.T, self.r)

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "EdgeColoredBipartiteGraph":
        return EdgeColoredBipartiteGraph(self.colors[np.ix_(np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))], self.r)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EdgeColoredBipartiteGraph) and self.r == other.r and self.colors.shape == other.colors.shape and bool(np.array_equal(self.colors, other.colors))


# ---------------------------------------------------------------------------
# operations


def density_pair(G: Union[BipartiteGraph, Graph], X: Iterable[int], Y: Iterable[int]) -> Density:
    """Edge density of ``(X, Y)``; for a bipartite graph X is in A and Y in B."""
    if isinstance(G, BipartiteGraph):
        xs = _nonempty(_index_array(X, G.nA))
        ys = _nonempty(_index_array(Y, G.nB))
    else:
        xs = _nonempty(_index_array(X, G.n))
        ys = _nonempty(_index_array(Y, G.n))
    num = int(G.adj[np.ix_(xs, ys)].sum())
    return Density(num, int(xs.size * ys.size))


def density_triple(H: Union[TripartiteThreeGraph, GeneralThreeGraph], X: Iterable[int], Y: Iterable[int], Z: Iterable[int]) -> Density:
    if isinstance(H, TripartiteThreeGraph):
        nU, nV, nW = H.sizes
        xs, ys, zs = (_nonempty(_index_array(S, n)) for S, n in ((X, nU), (Y, nV), (Z, nW)))
        t = H.tensor
    else:
        xs, ys, zs = (_nonempty(_index_array(S, H.n)) for S in (X, Y, Z))
        t = H.tensor()
    num = int(t[np.ix_(xs, ys, zs)].sum())
    return Density(num, int(xs.size * ys.size * zs.size))


def slice_graph(H: Union[TripartiteThreeGraph, GeneralThreeGraph], x: int, part: Union[int, str] = 0) -> Union[BipartiteGraph, Graph]:
    """Link graph of ``x``: pairs completing x to an edge.

    For a tripartite H the slice at a vertex of ``part`` is the bipartite
    graph between the two remaining parts, in their original order.
    """
    if isinstance(H, TripartiteThreeGraph):
        p = H.part_index(part)
        if not (0 <= int(x) < H.sizes[p]):
            raise ValueError(f"unknown vertex id {x} in part {H.names[p]}")
        others = tuple(i for i in PART_ORDER if i != p)
        sl = np.take(H.tensor, int(x), axis=p)
        return BipartiteGraph(sl.copy(), (H.names[others[0]], H.names[others[1]]))
    if not (0 <= int(x) < H.n):
        raise ValueError(f"unknown vertex id {x}")
    return Graph(H.tensor()[int(x)].copy())


def neighborhood(H: Union[TripartiteThreeGraph, GeneralThreeGraph], x: tuple, y: tuple) -> np.ndarray:
    """Vertices completing the pair ``xy`` to an edge.

    For a tripartite H, ``x`` and ``y`` are ``(part, id)`` tuples in distinct
    parts and the result is indexed by the third part.  For a general H they
    are plain ids (or 1-tuples) and the result is indexed by all of V(H).
    """
    if isinstance(H, TripartiteThreeGraph):
        (px, ix), (py, iy) = x, y
        px, py = H.part_index(px), H.part_index(py)
        if px == py:
            raise ValueError("pair lies inside one part")
        for p, i in ((px, ix), (py, iy)):
            if not (0 <= int(i) < H.sizes[p]):
                raise ValueError("unknown vertex id")
        idx: list = [slice(None)] * 3
        idx[px], idx[py] = int(ix), int(iy)
        return np.asarray(H.tensor[tuple(idx)], dtype=bool).copy()
    xi = int(x[0]) if isinstance(x, tuple) else int(x)
    yi = int(y[0]) if isinstance(y, tuple) else int(y)
    if xi == yi:
        raise ValueError("pair has a repeated vertex")
    if not (0 <= xi < H.n and 0 <= yi < H.n):
        raise ValueError("unknown vertex id")
    return H.tensor()[xi, yi].copy()


@dataclass(frozen=True)
class Tripartization:
    graph: TripartiteThreeGraph
    # part name -> list mapping the new id to the original vertex
    to_original: dict

    def from_original(self, part: str, v: int) -> int:
        return self.to_original[part].index(v)


def tripartitize(H: GeneralThreeGraph) -> Tripartization:
    """Three copies A, B, C of V(H); ``a_v b_v' c_v''`` is an edge iff {v,v',v''} is."""
    t = H.tensor().copy()
    g = TripartiteThreeGraph(t, ("A", "B", "C"))
    ident = list(range(H.n))
    return Tripartization(g, {"A": ident, "B": list(ident), "C": list(ident)})
