"""Sensor-set construction: friends of random individuals (FOS), EV and NEV top-k."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError
from .graph import Graph
from .rng import as_generator
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, ev_centrality, nev_centrality

METHODS = ("fos", "ev", "nev")

# relative gap below which two centrality scores count as tied
DEFAULT_TIE_TOL = 1e-6


@dataclass(frozen=True)
class FosSample:
    sampled: np.ndarray
    nominated: np.ndarray


@dataclass(frozen=True)
class SensorSet:
    """A deduplicated set of monitored nodes.

    ``nodes`` is in rank order for EV/NEV (best first) and ascending NodeId
    for FOS. ``scores`` holds the centrality of each listed node (``None``
    for FOS). ``provenance`` records how the set was produced: the FOS sample,
    or the score cutoff for EV/NEV.
    """

    nodes: np.ndarray
    method: str
    scores: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)
    seed: object = None

    @property
    def k(self) -> int:
        return int(self.nodes.size)

    def __len__(self) -> int:
        return self.k

    def __contains__(self, node) -> bool:
        return bool(np.any(self.nodes == node))

    def as_set(self) -> frozenset:
        return frozenset(int(i) for i in self.nodes)

    def to_rows(self, labels=None):
        """CSV rows ``(node_id, method, rank, score)``; score is ``"NA"`` for FOS."""
        rows = []
        for rank, node in enumerate(self.nodes, 1):
            label = labels[node] if labels is not None else int(node)
            score = "NA" if self.scores is None else repr(float(self.scores[rank - 1]))
            rows.append((label, self.method, rank, score))
        return rows


class SensorSuite(NamedTuple):
    fos: SensorSet
    ev: SensorSet
    nev: SensorSet


def fos_inclusion_probability(n: int, d_j: int, k: int) -> float:
    """Chance that a node of degree ``d_j`` is nominated by a uniform sample of ``k`` out of ``n``.

    Equals ``1 - C(n - d_j, k) / C(n, k)``.  The ratio is evaluated in log
    space as ``sum_{i < d_j} log(1 - k / (n - i))``, which neither overflows
    nor suffers the cancellation of log-gamma differences at large ``n``.
    """
    if n < 1 or not 0 <= d_j < n:
        raise InvalidParameterError(f"need 0 <= d_j < n, got d_j={d_j}, n={n}")
    if not 1 <= k <= n:
        raise InvalidParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n - d_j < k:
        return 1.0
    log_ratio = np.sum(np.log1p(-k / (n - np.arange(d_j, dtype=float))))
    return float(min(1.0, max(0.0, -np.expm1(log_ratio))))


def fos_from_sample(g: Graph, sample) -> FosSample:
    """Nominated friends of an explicit sample: the union of their neighbor lists."""
    sampled = np.asarray(sample, dtype=np.int64)
    if sampled.size and (sampled.min() < 0 or sampled.max() >= g.n):
        raise InvalidParameterError("sample contains node ids outside the graph")
    if np.unique(sampled).size != sampled.size:
        raise InvalidParameterError("sample must not repeat nodes")
    if sampled.size == 0:
        return FosSample(sampled, np.zeros(0, dtype=np.int64))
    nominated = np.unique(np.concatenate([g.neighbors(i) for i in sampled]))
    return FosSample(sampled, nominated)


def fos_select(g: Graph, sample_size: int, seed) -> SensorSet:
    """Sample ``sample_size`` nodes without replacement and monitor their friends.

    A sampled node ends up in the set only when another sampled node nominates
    it.  The sample itself is kept in ``provenance["sample"]``.
    """
    if not 1 <= sample_size <= g.n:
        raise InvalidParameterError(f"sample_size must lie in [1, {g.n}], got {sample_size}")
    rng = as_generator(seed)
    sample = rng.choice(g.n, size=sample_size, replace=False)
    fos = fos_from_sample(g, sample)
    return SensorSet(
        fos.nominated,
        "fos",
        provenance={"sample": tuple(int(i) for i in fos.sampled)},
        seed=seed if isinstance(seed, (int, np.integer)) else None,
    )


def rank_top_k(scores, k: int, tie_tol: float = DEFAULT_TIE_TOL) -> np.ndarray:
    """Indices of the ``k`` largest scores, ties going to the smaller index.

    Scores whose sorted neighbors differ by at most ``tie_tol * max|score|``
    form one tie group, so power-iteration noise cannot decide between nodes
    that are equal in exact arithmetic.
    """
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    if not 1 <= k <= n:
        raise InvalidParameterError(f"k must lie in [1, {n}], got {k}")
    order = np.lexsort((np.arange(n), -scores))
    ranked = scores[order]
    scale = max(float(np.max(np.abs(scores))), np.finfo(float).tiny)
    group = np.concatenate([[0], np.cumsum(-np.diff(ranked) > tie_tol * scale)])
    order = order[np.lexsort((order, group))]
    return order[:k]


def _top_k_set(g, k, centrality, method, tol, max_iter, tie_tol) -> SensorSet:
    if not 1 <= k <= g.n:
        raise InvalidParameterError(f"k must lie in [1, {g.n}], got {k}")
    c = centrality(g, tol, max_iter)
    nodes = rank_top_k(c.scores, k, tie_tol)
    return SensorSet(
        nodes,
        method,
        scores=c.scores[nodes],
        provenance={"cutoff": float(c.scores[nodes[-1]]), "iterations": c.iterations},
    )


def ev_select(
    g: Graph, k: int, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, tie_tol: float = DEFAULT_TIE_TOL
) -> SensorSet:
    """The ``k`` nodes with the largest eigenvector centrality."""
    return _top_k_set(g, k, ev_centrality, "ev", tol, max_iter, tie_tol)


def nev_select(
    g: Graph, k: int, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, tie_tol: float = DEFAULT_TIE_TOL
) -> SensorSet:
    """The ``k`` nodes with the largest random-walk stationary probability.

    On a connected non-bipartite graph this is the top-``k`` by degree.
    """
    return _top_k_set(g, k, nev_centrality, "nev", tol, max_iter, tie_tol)


def matched_sensor_suite(
    g: Graph,
    sample_size: int,
    seed,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> SensorSuite:
    """FOS set plus EV and NEV sets of the same size."""
    fos = fos_select(g, sample_size, seed)
    if fos.k == 0:
        raise InvalidParameterError("FOS sample nominated no friends; cannot size EV/NEV sets")
    ev = ev_select(g, fos.k, tol, max_iter, tie_tol)
    nev = nev_select(g, fos.k, tol, max_iter, tie_tol)
    return SensorSuite(fos, ev, nev)
