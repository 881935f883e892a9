"""Seeded instance generators.

Randomness comes from SplitMix64 evaluated at an index: the draw for item i
of stream s under seed S is

    mix(mix(S + s*G) + (i + 1)*G)      (all arithmetic mod 2**64)

with G = 0x9E3779B97F4A7C15 and mix the SplitMix64 finaliser (shifts
30/27/31, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).  This is
the same sequence a sequential SplitMix64 seeded with ``mix(S + s*G)``
produces, so any language can reproduce a corpus, and items can be drawn
in any order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..core import BipartiteGraph, EdgeColoredBipartiteGraph, GeneralThreeGraph, TripartiteThreeGraph, as_rational

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
M1 = 0xBF58476D1CE4E5B9
M2 = 0x94D049BB133111EB

# stream ids
S_CLASSES = 1  # +part index
S_PATTERN = 8
S_NOISE = 9
S_WEIGHTS = 10  # +part index
S_RANDOM = 16


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * M1) & MASK
    z = ((z ^ (z >> 27)) * M2) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK
        return mix64(self.state)


def stream_state(seed: int, stream: int) -> int:
    return mix64((seed + stream * GAMMA) & MASK)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(M2)
    return z ^ (z >> np.uint64(31))


def hash_indices(seed: int, stream: int, idx: np.ndarray) -> np.ndarray:
    """Draw of every index in ``idx`` (uint64 array)."""
    base = np.uint64(stream_state(seed, stream))
    with np.errstate(over="ignore"):
        z = base + (np.asarray(idx, dtype=np.uint64) + np.uint64(1)) * np.uint64(GAMMA)
        return _mix_array(z)


def hash_range(seed: int, stream: int, start: int, stop: int) -> np.ndarray:
    return hash_indices(seed, stream, np.arange(start, stop, dtype=np.uint64))


def probability_cutoff(p) -> int:
    """A draw h succeeds iff ``h < floor(p * 2**64)``."""
    p = as_rational(p)
    if not (0 <= p <= 1):
        raise ValueError("probability outside [0, 1]")
    return min(MASK + 1, (p.numerator << 64) // p.denominator)


def bernoulli(seed: int, stream: int, start: int, stop: int, p) -> np.ndarray:
    cut = probability_cutoff(p)
    if cut == 0:
        return np.zeros(stop - start, dtype=bool)
    if cut > MASK:
        return np.ones(stop - start, dtype=bool)
    return hash_range(seed, stream, start, stop) < np.uint64(cut)


def balanced_labels(n: int, d: int, seed: int, stream: int) -> np.ndarray:
    """Labels i mod d, shuffled by sorting positions on their draws."""
    order = np.argsort(hash_range(seed, stream, 0, n), kind="stable")
    lab = np.empty(n, dtype=np.int64)
    lab[order] = np.arange(n) % d
    return lab


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    d: int = 2
    noise: Fraction = Fraction(0)
    seed: int = 0
    p: Fraction = Fraction(1, 2)

    def __post_init__(self) -> None:
        object.__setattr__(self, "noise", as_rational(self.noise))
        object.__setattr__(self, "p", as_rational(self.p))
        if not (0 <= self.noise < 1):
            raise ValueError("noise must lie in [0, 1)")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")


@dataclass
class ClassBased:
    graph: TripartiteThreeGraph
    classes: tuple  # label array per part
    pattern: np.ndarray  # d x d x d


def class_pattern(d: int, seed: int, p=Fraction(1, 2)) -> np.ndarray:
    return bernoulli(seed, S_PATTERN, 0, d**3, p).reshape(d, d, d)


def _noisy_tensor(shape: tuple, seed: int, noise, base_fn) -> np.ndarray:
    """Build the tensor one U-slice at a time, flipping noisy triples."""
    nU, nV, nW = shape
    t = np.zeros(shape, dtype=bool)
    cut = probability_cutoff(noise)
    plane = nV * nW
    for x in range(nU):
        sl = base_fn(x)
        if cut:
            flips = (hash_range(seed, S_NOISE, x * plane, (x + 1) * plane) < np.uint64(cut)).reshape(nV, nW)
            sl = sl ^ flips
        t[x] = sl
    return t


def gen_class_based(n: int, d: int, noise=0, seed: int = 0, pattern: Optional[np.ndarray] = None, p=Fraction(1, 2)) -> ClassBased:
    """Tripartite 3-graph whose edges follow a pattern on class triples, plus noise."""
    if d < 1:
        raise ValueError("d must be at least 1")
    labs = tuple(balanced_labels(n, d, seed, S_CLASSES + i) for i in range(3))
    pat = class_pattern(d, seed, p) if pattern is None else np.asarray(pattern, dtype=bool)
    if pat.shape != (d, d, d):
        raise ValueError("pattern must be d x d x d")
    lv, lw = labs[1], labs[2]

    def base(x):
        return pat[labs[0][x]][np.ix_(lv, lw)]

    t = _noisy_tensor((n, n, n), seed, noise, base)
    return ClassBased(TripartiteThreeGraph(t), labs, pat)


def gen_threshold(n: int, seed: int = 0, theta: Optional[int] = None) -> TripartiteThreeGraph:
    """Edge xyz iff f(x)+f(y)+f(z) <= theta with 32-bit weights per vertex."""
    w = [(hash_range(seed, S_WEIGHTS + i, 0, n) >> np.uint64(32)).astype(np.int64) for i in range(3)]
    sums = w[0][:, None, None] + w[1][None, :, None] + w[2][None, None, :]
    if theta is None:
        flat = sums.reshape(-1)
        if flat.size == 0:
            theta = 0
        else:
            k = (flat.size - 1) // 2
            theta = int(np.partition(flat, k)[k])
    return TripartiteThreeGraph(sums <= theta)


def gen_slice_template(n: int, d: int, noise=0, seed: int = 0, c: int = 2) -> ClassBased:
    """U is split into d templates; each template fixes one blow-up slice on V x W."""
    labU = balanced_labels(n, d, seed, S_CLASSES)
    labV = balanced_labels(n, c, seed, S_CLASSES + 1)
    labW = balanced_labels(n, c, seed, S_CLASSES + 2)
    pats = bernoulli(seed, S_PATTERN, 0, d * c * c, Fraction(1, 2)).reshape(d, c, c)

    def base(x):
        return pats[labU[x]][np.ix_(labV, labW)]

    t = _noisy_tensor((n, n, n), seed, noise, base)
    return ClassBased(TripartiteThreeGraph(t), (labU, labV, labW), pats)


def gen_random(n: int, p=Fraction(1, 2), seed: int = 0) -> TripartiteThreeGraph:
    t = bernoulli(seed, S_RANDOM, 0, n**3, p).reshape(n, n, n)
    return TripartiteThreeGraph(t)


@dataclass
class BlowupGraph:
    graph: BipartiteGraph
    classes: tuple  # (labels on A, labels on B)
    pattern: np.ndarray  # d x d
    noise_mask: np.ndarray


def gen_blowup_graph(n: int, d: int, noise=0, seed: int = 0, pattern: Optional[np.ndarray] = None) -> BlowupGraph:
    """Bipartite blow-up of a d x d pattern with independent pair flips."""
    la = balanced_labels(n, d, seed, S_CLASSES)
    lb = balanced_labels(n, d, seed, S_CLASSES + 1)
    pat = bernoulli(seed, S_PATTERN, 0, d * d, Fraction(1, 2)).reshape(d, d) if pattern is None else np.asarray(pattern, dtype=bool)
    if pat.shape != (d, d):
        raise ValueError("pattern must be d x d")
    adj = pat[np.ix_(la, lb)]
    flips = bernoulli(seed, S_NOISE, 0, n * n, noise).reshape(n, n)
    return BlowupGraph(BipartiteGraph(adj ^ flips), (la, lb), pat, flips)


def gen_blowup_ecg(n: int, d: int, noise=0, seed: int = 0, pattern: Optional[np.ndarray] = None) -> tuple[EdgeColoredBipartiteGraph, BlowupGraph]:
    """E1 = blow-up edges, E0 = the rest, noisy pairs recolored E2."""
    bg = gen_blowup_graph(n, d, 0, seed, pattern)
    flips = bernoulli(seed, S_NOISE, 0, n * n, noise).reshape(n, n)
    colors = bg.graph.adj.astype(np.int8)
    colors[flips] = 2
    bg.noise_mask = flips
    return EdgeColoredBipartiteGraph(colors, 2), bg


def gen_class_based_general(n: int, d: int, noise=0, seed: int = 0, p=Fraction(1, 2)) -> tuple[GeneralThreeGraph, np.ndarray]:
    """General 3-graph: {x,y,z} is an edge iff its class multiset is in a pattern (plus noise)."""
    lab = balanced_labels(n, d, seed, S_CLASSES)
    pat = class_pattern(d, seed, p)
    # symmetrise: a class multiset is present iff its sorted representative is
    sym = np.zeros_like(pat)
    for a in range(d):
        for b in range(d):
            for c in range(d):
                s = tuple(sorted((a, b, c)))
                sym[a, b, c] = pat[s]
    cut = probability_cutoff(noise)
    edges = []
    for x in range(n):
        for y in range(x + 1, n):
            zs = np.arange(y + 1, n)
            if zs.size == 0:
                continue
            present = sym[lab[x], lab[y]][lab[zs]]
            if cut:
                idx = (x * n + y) * n + zs
                present = present ^ (hash_indices(seed, S_NOISE, idx.astype(np.uint64)) < np.uint64(cut))
            edges.extend((x, y, int(z)) for z in zs[present])
    return GeneralThreeGraph(n, edges), lab


def gen_uk(k: int) -> BipartiteGraph:
    from ..vc import uk_pattern_graph

    return uk_pattern_graph(k)


KINDS = ("class_based", "threshold", "slice_template", "random", "blowup_graph", "blowup_ecg", "class_based_general", "uk")


def generate(spec: GenSpec):
    """Dispatch on ``spec.kind``; returns the bare graph object."""
    k = spec.kind
    if k == "class_based":
        return gen_class_based(spec.n, spec.d, spec.noise, spec.seed, p=spec.p).graph
    if k == "threshold":
        return gen_threshold(spec.n, spec.seed)
    if k == "slice_template":
        return gen_slice_template(spec.n, spec.d, spec.noise, spec.seed).graph
    if k == "random":
        return gen_random(spec.n, spec.p, spec.seed)
    if k == "blowup_graph":
        return gen_blowup_graph(spec.n, spec.d, spec.noise, spec.seed).graph
    if k == "blowup_ecg":
        return gen_blowup_ecg(spec.n, spec.d, spec.noise, spec.seed)[0]
    if k == "class_based_general":
        return gen_class_based_general(spec.n, spec.d, spec.noise, spec.seed, spec.p)[0]
    if k == "uk":
        return gen_uk(spec.d)
    raise ValueError(f"unknown generator kind {k!r}")
