"""Flat-file formats: 3-graphs, graphs, edge-colored graphs, JSON reports, run logs.

Text formats are line oriented; blank lines and ``#`` comments are ignored.

    3graph tripartite nU nV nW      3graph general n
    graph bipartite nA nB           graph general n
    ecg nA nB r

followed by one edge (``ecg``: one ``a b color`` triple) per line.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from ..core import BipartiteGraph, EdgeColoredBipartiteGraph, GeneralThreeGraph, Graph, TripartiteThreeGraph
from ..partitions import Partition

AnyGraph = Union[TripartiteThreeGraph, GeneralThreeGraph, BipartiteGraph, Graph, EdgeColoredBipartiteGraph]

RUNLOG_HEADER = ("step", "bound_name", "paper_formula_value", "achieved_value", "pass")


class InputError(ValueError):
    """Malformed input; the message carries ``source:line``."""

    def __init__(self, source: str, line: int, msg: str):
        super().__init__(f"{source}:{line}: {msg}" if line else f"{source}: {msg}")
        self.source, self.line = source, line


def _records(text: str) -> Iterable[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield no, s.split()


def _ints(tok: list[str], source: str, no: int, count: int) -> list[int]:
    if len(tok) != count:
        raise InputError(source, no, f"expected {count} fields, got {len(tok)}")
    try:
        vals = [int(t) for t in tok]
    except ValueError:
        raise InputError(source, no, f"non-integer field in {' '.join(tok)!r}") from None
    return vals


def parse_graph_text(text: str, source: str = "<input>", default_color: Optional[int] = None) -> AnyGraph:
    recs = _records(text)
    try:
        no, head = next(recs)
    except StopIteration:
        raise InputError(source, 1, "missing header") from None
    kind = head[0]
    if kind == "3graph":
        if len(head) < 2 or head[1] not in ("tripartite", "general"):
            raise InputError(source, no, "header must be '3graph tripartite nU nV nW' or '3graph general n'")
        if head[1] == "tripartite":
            sizes = _ints(head[2:], source, no, 3)
            return _read_tripartite(recs, sizes, source, no)
        (n,) = _ints(head[2:], source, no, 1)
        return _read_general3(recs, n, source, no)
    if kind == "graph":
        if len(head) < 2 or head[1] not in ("bipartite", "general"):
            raise InputError(source, no, "header must be 'graph bipartite nA nB' or 'graph general n'")
        if head[1] == "bipartite":
            nA, nB = _ints(head[2:], source, no, 2)
            _nonneg(source, no, nA, nB)
            adj = np.zeros((nA, nB), dtype=bool)
            for no, tok in recs:
                a, b = _ints(tok, source, no, 2)
                _check(source, no, a, nA, "A")
                _check(source, no, b, nB, "B")
                adj[a, b] = True
            return BipartiteGraph(adj)
        (n,) = _ints(head[2:], source, no, 1)
        _nonneg(source, no, n)
        adj = np.zeros((n, n), dtype=bool)
        for no, tok in recs:
            a, b = _ints(tok, source, no, 2)
            _check(source, no, a, n, "V")
            _check(source, no, b, n, "V")
            if a == b:
                raise InputError(source, no, "loop")
            adj[a, b] = adj[b, a] = True
        return Graph(adj)
    if kind == "ecg":
        nA, nB, r = _ints(head[1:], source, no, 3)
        _nonneg(source, no, nA, nB)
        if r < 1 or r > 126:
            raise InputError(source, no, "r must lie in [1, 126]")
        colors = np.full((nA, nB), -1, dtype=np.int8)
        for no, tok in recs:
            a, b, c = _ints(tok, source, no, 3)
            _check(source, no, a, nA, "A")
            _check(source, no, b, nB, "B")
            if not (0 <= c <= r):
                raise InputError(source, no, f"color {c} outside [0, {r}]")
            if colors[a, b] >= 0 and colors[a, b] != c:
                raise InputError(source, no, f"pair ({a}, {b}) colored twice")
            colors[a, b] = c
        missing = colors < 0
        if missing.any():
            if default_color is None:
                a, b = np.argwhere(missing)[0]
                raise InputError(source, 0, f"pair ({a}, {b}) has no color ({int(missing.sum())} missing); pass --default-color to fill")
            if not (0 <= default_color <= r):
                raise InputError(source, 0, f"default color {default_color} outside [0, {r}]")
            colors[missing] = default_color
        return EdgeColoredBipartiteGraph(colors, r)
    raise InputError(source, no, f"unknown header {kind!r}")


def _nonneg(source: str, no: int, *ns: int) -> None:
    if any(n < 0 for n in ns):
        raise InputError(source, no, "negative size")


def _check(source: str, no: int, v: int, n: int, part: str) -> None:
    if not (0 <= v < n):
        raise InputError(source, no, f"vertex {v} outside part {part} of size {n}")


def _read_tripartite(recs, sizes: list[int], source: str, head_line: int) -> TripartiteThreeGraph:
    _nonneg(source, head_line, *sizes)
    t = np.zeros(tuple(sizes), dtype=bool)
    for no, tok in recs:
        x, y, z = _ints(tok, source, no, 3)
        for v, n, p in zip((x, y, z), sizes, "UVW"):
            _check(source, no, v, n, p)
        t[x, y, z] = True
    return TripartiteThreeGraph(t)


def _read_general3(recs, n: int, source: str, head_line: int) -> GeneralThreeGraph:
    _nonneg(source, head_line, n)
    edges = []
    for no, tok in recs:
        e = _ints(tok, source, no, 3)
        for v in e:
            _check(source, no, v, n, "V")
        if len(set(e)) != 3:
            raise InputError(source, no, "edge with a repeated vertex")
        edges.append(e)
    return GeneralThreeGraph(n, edges)


def read_graph(path: Union[str, Path], default_color: Optional[int] = None) -> AnyGraph:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise InputError(str(p), 0, f"cannot read: {e.strerror}") from None
    return parse_graph_text(text, str(p), default_color)


def format_graph(G: AnyGraph) -> str:
    out = io.StringIO()
    if isinstance(G, TripartiteThreeGraph):
        out.write("3graph tripartite {} {} {}\n".format(*G.sizes))
        for e in G.edges():
            out.write("{} {} {}\n".format(*e))
    elif isinstance(G, GeneralThreeGraph):
        out.write(f"3graph general {G.n}\n")
        for e in G.edge_list:
            out.write("{} {} {}\n".format(*e))
    elif isinstance(G, BipartiteGraph):
        out.write(f"graph bipartite {G.nA} {G.nB}\n")
        for a, b in G.edges():
            out.write(f"{a} {b}\n")
    elif isinstance(G, Graph):
        out.write(f"graph general {G.n}\n")
        for a, b in zip(*np.nonzero(np.triu(G.adj, 1))):
            out.write(f"{a} {b}\n")
    elif isinstance(G, EdgeColoredBipartiteGraph):
        out.write(f"ecg {G.nA} {G.nB} {G.r}\n")
        for (a, b), c in np.ndenumerate(G.colors):
            out.write(f"{a} {b} {c}\n")
    else:
        raise TypeError(f"cannot format {type(G).__name__}")
    return out.getvalue()


def write_graph(G: AnyGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(format_graph(G))


# ---------------------------------------------------------------------------
# JSON and CSV


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(obj, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(obj))


def read_partition(path: Union[str, Path], n: int) -> Partition:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as e:
        raise InputError(str(p), 0, f"cannot read: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(str(p), e.lineno, f"invalid JSON: {e.msg}") from None
    try:
        return Partition.from_json(data, n)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(str(p), 0, f"invalid partition: {e}") from None


def format_runlog(rows: Iterable[tuple]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(RUNLOG_HEADER)
    for step, bound, pv, av, ok in rows:
        w.writerow((step, bound, pv, av, "true" if ok else "false"))
    return out.getvalue()


def write_runlog(rows: Iterable[tuple], path: Union[str, Path]) -> None:
    Path(path).write_text(format_runlog(rows))
