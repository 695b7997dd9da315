"""Immutable undirected simple graphs in compressed-row form.

Nodes are dense integers ``0..n-1``; the labels they were ingested under are
kept in :attr:`Graph.labels`.  Neighbor lists are sorted, symmetric, free of
self-loops and duplicates.
"""

from __future__ import annotations

import logging
import os
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import EmptyGraphError, FormatError, InvalidParameterError
from .rng import as_generator

logger = logging.getLogger(__name__)

# pairs per random block when drawing ER / Chung-Lu edges
_PAIR_BLOCK = 1 << 20


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph.

    Attributes:
        indptr: Row pointers, length ``n + 1``.
        indices: Concatenated sorted neighbor lists, length ``2 m``.
        labels: Original label of each node (``labels[i]`` for node ``i``).
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        indptr.flags.writeable = False
        indices.flags.writeable = False
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        n = indptr.size - 1
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))
        elif len(self.labels) != n:
            raise InvalidParameterError(f"{len(self.labels)} labels for {n} nodes")
        self._check()

    def _check(self):
        n = self.n
        if n < 0 or self.indptr[0] != 0 or self.indptr[-1] != self.indices.size:
            raise InvalidParameterError("malformed row pointers")
        if np.any(np.diff(self.indptr) < 0):
            raise InvalidParameterError("row pointers must be nondecreasing")
        if self.indices.size % 2:
            raise InvalidParameterError("odd number of adjacency entries; graph is not symmetric")
        if self.indices.size == 0:
            return
        if self.indices.min() < 0 or self.indices.max() >= n:
            raise InvalidParameterError("neighbor index out of range")
        rows = np.repeat(np.arange(n), np.diff(self.indptr))
        if np.any(rows == self.indices):
            raise InvalidParameterError("self-loop present")
        # sorted and duplicate-free within each row
        same_row = rows[1:] == rows[:-1]
        if np.any(same_row & (self.indices[1:] <= self.indices[:-1])):
            raise InvalidParameterError("neighbor lists must be strictly increasing")
        fwd = rows * n + self.indices
        rev = np.sort(self.indices * n + rows)
        if not np.array_equal(fwd, rev):
            raise InvalidParameterError("adjacency is not symmetric")

    # construction -----------------------------------------------------------

    @classmethod
    def from_arrays(cls, n: int, src, dst, labels: Sequence[Hashable] = ()) -> "Graph":
        """Build from endpoint arrays; self-loops and duplicates are dropped."""
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise InvalidParameterError("src and dst must have the same length")
        keep = src != dst
        lo = np.minimum(src[keep], dst[keep])
        hi = np.maximum(src[keep], dst[keep])
        key = np.unique(lo * n + hi)
        lo, hi = key // n, key % n
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(indptr, cols, tuple(labels))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    # structure --------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.indptr.size - 1

    @property
    def m(self) -> int:
        return self.indices.size // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.flags.writeable = False
        return d

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``i < j``, sorted."""
        rows = np.repeat(np.arange(self.n), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Sparse adjacency matrix (float64); shares the index arrays."""
        data = np.ones(self.indices.size)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def label_index(self) -> dict:
        return {label: i for i, label in enumerate(self.labels)}

    def node_ids(self, labels: Iterable[Hashable]) -> np.ndarray:
        """Map original labels to NodeIds; unknown labels raise ``KeyError``."""
        index = self.label_index
        return np.array([index[label] for label in labels], dtype=np.int64)

    def is_connected(self) -> bool:
        return self.n > 0 and component_labels(self)[0] == 1

    def subgraph(self, nodes) -> "Graph":
        """Induced subgraph on ``nodes`` (kept in the given order)."""
        nodes = np.asarray(nodes, dtype=np.int64)
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[nodes] = np.arange(nodes.size)
        e = self.edges()
        keep = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0) if e.size else np.zeros(0, bool)
        e = e[keep]
        return Graph.from_arrays(
            nodes.size, remap[e[:, 0]], remap[e[:, 1]], labels=[self.labels[i] for i in nodes]
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ingestion ------------------------------------------------------------------


def from_edge_list(pairs: Iterable[tuple[Hashable, Hashable]]) -> Graph:
    """Build a graph from labelled pairs.

    Labels get dense ids in first-seen order.  Duplicate edges and self-loops
    are dropped (their count is logged).  A node that only ever appears in a
    self-loop is still assigned an id.

    Raises:
        EmptyGraphError: if no edge survives.
    """
    index: dict = {}
    src, dst = [], []
    for a, b in pairs:
        for label in (a, b):
            if label not in index:
                index[label] = len(index)
        src.append(index[a])
        dst.append(index[b])
    n = len(index)
    g = Graph.from_arrays(n, src, dst, labels=list(index))
    if g.m == 0:
        raise EmptyGraphError("empty graph")
    dropped = len(src) - g.m
    if dropped:
        logger.warning("dropped %d duplicate or self-loop edge record(s)", dropped)
    return g


def parse_edge_lines(lines: Iterable[str]) -> list[tuple[str, str]]:
    pairs = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected two labels, got {len(parts)} field(s)")
        pairs.append((parts[0], parts[1]))
    return pairs


def read_edge_list(path: str | os.PathLike) -> Graph:
    """Read a whitespace-separated edge-list file (``#`` comments allowed)."""
    with open(path, encoding="utf-8") as fh:
        return from_edge_list(parse_edge_lines(fh))


def format_edge_list(g: Graph) -> str:
    return "".join(f"{i} {j}\n" for i, j in g.edges())


def write_edge_list(g: Graph, path: str | os.PathLike, header: str | None = None) -> None:
    """Write edges with dense integer labels, one ``i j`` per line, ``i < j``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        fh.write(format_edge_list(g))


# generators -----------------------------------------------------------------


def _pair_blocks(n: int):
    """Yield ``(i, j)`` index arrays covering all pairs ``i < j`` in row-major order."""
    row_len = n - 1 - np.arange(n)
    ends = np.cumsum(row_len)
    start = 0
    while start < n - 1:
        base = ends[start - 1] if start else 0
        stop = max(start + 1, int(np.searchsorted(ends, base + _PAIR_BLOCK, side="right")))
        stop = min(stop, n - 1)
        rows = np.arange(start, stop)
        lens = row_len[rows]
        i = np.repeat(rows, lens)
        first = np.repeat(np.cumsum(lens) - lens, lens)
        j = np.arange(i.size) - first + i + 1
        yield i, j
        start = stop


def _bernoulli_pairs(n: int, prob, rng: np.random.Generator) -> Graph:
    src, dst = [], []
    for i, j in _pair_blocks(n):
        p = prob(i, j)
        hit = rng.random(i.size) < p
        src.append(i[hit])
        dst.append(j[hit])
    if not src:
        return Graph.empty(n)
    return Graph.from_arrays(n, np.concatenate(src), np.concatenate(dst))


def generate_er(n: int, p: float, seed) -> Graph:
    """Erdos-Renyi G(n, p): every pair is an edge independently with probability ``p``."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")
    rng = as_generator(seed)
    return _bernoulli_pairs(int(n), lambda i, j: p, rng)


def generate_chung_lu(weights, seed) -> Graph:
    """Chung-Lu graph: pair ``(i, j)`` is an edge with probability ``min(1, w_i w_j / sum(w))``.

    Pairs are visited in the same order as :func:`generate_er`, so equal
    weights ``w`` reproduce ``generate_er(n, w / n, seed)``.
    """
    w = np.asarray(weights, dtype=float).ravel()
    if w.size < 1:
        raise InvalidParameterError("weights must be nonempty")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise InvalidParameterError("all weights must be positive and finite")
    total = w.sum()
    rng = as_generator(seed)
    return _bernoulli_pairs(w.size, lambda i, j: np.minimum(1.0, w[i] * w[j] / total), rng)


def chung_lu_expected_edges(weights) -> float:
    """Exact expected edge count of :func:`generate_chung_lu` (with clamping)."""
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    p = np.minimum(1.0, np.outer(w, w) / total)
    return float((p.sum() - np.trace(p)) / 2)


def power_law_weights(n: int, m: float, exponent: float = 2.5) -> np.ndarray:
    """Heavy-tailed Chung-Lu weights whose expected edge count is ``m``.

    Shape ``w_i ∝ (i + 1) ** (-1 / (exponent - 1))`` gives a degree tail with
    the requested power-law exponent; the scale is found by bisection on the
    exact clamped expected edge count.
    """
    if n < 2:
        raise InvalidParameterError("need n >= 2")
    if exponent <= 2:
        raise InvalidParameterError("exponent must exceed 2")
    if not 0 < m < n * (n - 1) / 2:
        raise InvalidParameterError(f"target edge count {m} not achievable with n={n}")
    shape = (np.arange(n) + 1.0) ** (-1.0 / (exponent - 1.0))
    shape /= shape.mean()
    lo, hi = 1e-9, float(n)
    if chung_lu_expected_edges(shape * hi) < m:
        raise InvalidParameterError(f"target edge count {m} not reachable for exponent {exponent}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if chung_lu_expected_edges(shape * mid) < m:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * hi:
            break
    return shape * 0.5 * (lo + hi)


# structural queries ---------------------------------------------------------


def component_labels(g: Graph) -> tuple[int, np.ndarray]:
    return connected_components(g.adjacency, directed=False)


def largest_connected_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest component.

    Ties between equally large components go to the one containing the
    smallest NodeId.  Returns the subgraph and ``mapping`` where
    ``mapping[new_id] = old_id`` (ascending, so node order is preserved).
    """
    if g.n == 0:
        return g, np.zeros(0, dtype=np.int64)
    ncomp, comp = component_labels(g)
    sizes = np.bincount(comp, minlength=ncomp)
    first_node = np.full(ncomp, g.n)
    np.minimum.at(first_node, comp, np.arange(g.n))
    best = min(range(ncomp), key=lambda c: (-sizes[c], first_node[c]))
    mapping = np.flatnonzero(comp == best)
    if mapping.size == g.n:
        return g, mapping
    return g.subgraph(mapping), mapping


def two_coloring(g: Graph) -> np.ndarray | None:
    """BFS 2-coloring (0/1 per node), or ``None`` when an odd cycle exists."""
    color = np.full(g.n, -1, dtype=np.int8)
    indptr, indices = g.indptr, g.indices
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            cu = color[u]
            for v in indices[indptr[u] : indptr[u + 1]]:
                if color[v] < 0:
                    color[v] = 1 - cu
                    queue.append(v)
                elif color[v] == cu:
                    return None
    return color


def is_bipartite(g: Graph) -> bool:
    return two_coloring(g) is not None


@dataclass(frozen=True)
class DegreeHistogram:
    """Empirical degree distribution: ``counts[k]`` nodes have degree ``k``."""

    counts: dict[int, int]
    n: int

    @property
    def fractions(self) -> dict[int, float]:
        """``P(k)``, the fraction of nodes with degree ``k``."""
        return {k: c / self.n for k, c in self.counts.items()}

    def to_rows(self) -> list[tuple[int, int, float]]:
        return [(k, c, c / self.n) for k, c in sorted(self.counts.items())]


def degree_distribution(g: Graph) -> DegreeHistogram:
    counts = Counter(int(d) for d in g.degrees)
    return DegreeHistogram(dict(sorted(counts.items())), g.n)
