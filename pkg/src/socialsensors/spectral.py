"""Eigenvector (EV) and normalized-eigenvector (NEV) centrality by power iteration.

EV scores are the Perron vector of the adjacency matrix ``A``.  NEV scores are
the stationary distribution of the simple random walk, i.e. the eigenvalue-1
eigenvector of ``B = A D`` with ``D = diag(1 / deg)``; on a connected
non-bipartite graph it is proportional to the degree vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BipartiteGraphError, DisconnectedGraphError, InvalidParameterError, NotConvergedError
from .graph import Graph, is_bipartite

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class CentralityScores:
    """Per-node centrality scores.

    Attributes:
        scores: Nonnegative score per NodeId. Unit Euclidean norm for EV,
            unit sum for NEV.
        method: ``"EV"`` or ``"NEV"``.
        iterations: Power-iteration steps taken.
        residual: ``max |M x - mu x|`` at the returned vector, where ``M`` is
            ``A`` (EV, ``mu`` the Rayleigh quotient) or ``B`` (NEV, ``mu = 1``).
        eigenvalue: Rayleigh quotient ``x'Ax / x'x`` for EV; 1.0 for NEV.
    """

    scores: np.ndarray
    method: str
    iterations: int
    residual: float
    eigenvalue: float

    def to_rows(self, labels=None):
        labels = labels if labels is not None else range(self.scores.size)
        return [(label, float(s), self.method) for label, s in zip(labels, self.scores)]


@dataclass(frozen=True)
class SpectralDiagnostic:
    """Leading adjacency eigenvalue and the early-growth exponent ``beta*lambda1 - gamma``."""

    lambda1: float
    growth_exponent: float
    beta: float
    gamma: float

    @property
    def grows(self) -> bool:
        return self.growth_exponent > 0


def _check_iteration_args(tol, max_iter):
    if not tol > 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise InvalidParameterError(f"max_iter must be >= 1, got {max_iter}")


def _require_connected(g: Graph):
    if not g.is_connected():
        raise DisconnectedGraphError(
            f"graph with {g.n} nodes is not connected; extract the largest component first"
        )


def ev_centrality(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> CentralityScores:
    """Dominant eigenvector of the adjacency matrix.

    Starts from the all-ones vector and iterates ``x <- (A + I) x`` with
    Euclidean renormalization.  The identity shift leaves the eigenvectors
    unchanged but makes the Perron root strictly dominant in modulus, so the
    iteration also converges on bipartite graphs (where ``-lambda1`` is an
    eigenvalue of ``A`` and the unshifted iteration oscillates).

    Stops when the max-abs change between successive normalized iterates
    drops below ``tol``.

    Raises:
        DisconnectedGraphError: if ``g`` is not connected.
        NotConvergedError: after ``max_iter`` steps without convergence.
    """
    _check_iteration_args(tol, max_iter)
    _require_connected(g)
    A = g.adjacency
    x = np.full(g.n, 1.0 / np.sqrt(g.n))
    diff = np.inf
    for it in range(1, max_iter + 1):
        y = A @ x + x
        y /= np.linalg.norm(y)
        diff = np.max(np.abs(y - x))
        x = y
        if diff < tol:
            break
    else:
        raise NotConvergedError(
            f"EV power iteration did not converge in {max_iter} steps (last change {diff:.3e})",
            last_iterate=x,
            residual=float(diff),
            iterations=max_iter,
        )
    Ax = A @ x
    lam = float(x @ Ax / (x @ x))
    residual = float(np.max(np.abs(Ax - lam * x)))
    return CentralityScores(x, "EV", it, residual, lam)


def nev_centrality(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> CentralityScores:
    """Stationary distribution of the simple random walk on ``g``.

    Iterates ``p <- B p`` from the uniform distribution, where column ``j`` of
    ``B`` spreads mass ``1/deg(j)`` to each neighbor of ``j``.  ``B`` is never
    formed: each step is one sweep ``A @ (p / deg)``.  The vector is
    renormalized to unit sum every step to stop floating-point drift.

    Raises:
        DisconnectedGraphError: if ``g`` is not connected.
        BipartiteGraphError: if ``g`` has no odd cycle (the walk is periodic).
        NotConvergedError: after ``max_iter`` steps without convergence.
    """
    _check_iteration_args(tol, max_iter)
    _require_connected(g)
    if is_bipartite(g):
        raise BipartiteGraphError(
            "aperiodicity precondition violated: graph is bipartite (no odd cycle), "
            "so the random walk is periodic and has no limiting distribution"
        )
    A = g.adjacency
    inv_deg = 1.0 / g.degrees
    p = np.full(g.n, 1.0 / g.n)
    diff = np.inf
    for it in range(1, max_iter + 1):
        q = A @ (p * inv_deg)
        q /= q.sum()
        diff = np.max(np.abs(q - p))
        p = q
        if diff < tol:
            break
    else:
        raise NotConvergedError(
            f"NEV power iteration did not converge in {max_iter} steps (last change {diff:.3e})",
            last_iterate=p,
            residual=float(diff),
            iterations=max_iter,
        )
    residual = float(np.max(np.abs(A @ (p * inv_deg) - p)))
    return CentralityScores(p, "NEV", it, residual, 1.0)


def growth_diagnostic(
    g: Graph, beta: float, gamma: float, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> SpectralDiagnostic:
    """Early-epidemic exponent: ``I(t)`` grows roughly like ``exp((beta*lambda1 - gamma) t)``."""
    if beta < 0 or gamma < 0:
        raise InvalidParameterError("rates must be nonnegative")
    lam = ev_centrality(g, tol, max_iter).eigenvalue
    return SpectralDiagnostic(lam, beta * lam - gamma, beta, gamma)
