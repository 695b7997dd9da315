"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):

* :class:`InvalidParameterError` - the caller passed something outside an
  operation's documented domain (bad probability, k > n, ...).
* :class:`PreconditionError` - the inputs are well-formed but the data does
  not satisfy what the algorithm needs (disconnected graph, bipartite graph,
  no epidemic, power iteration did not converge, ...).  Each instance carries
  a short ``precondition`` name.
"""

from __future__ import annotations


class SocialSensorsError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(SocialSensorsError, ValueError):
    """An argument lies outside the operation's domain."""


class FormatError(InvalidParameterError):
    """An input file does not follow the expected layout."""


class PreconditionError(SocialSensorsError):
    """The data violates an algorithmic precondition."""

    precondition = "precondition"

    def __init__(self, message: str, precondition: str | None = None):
        if precondition is not None:
            self.precondition = precondition
        super().__init__(message)


class EmptyGraphError(PreconditionError):
    precondition = "nonempty-graph"


class DisconnectedGraphError(PreconditionError):
    precondition = "connected-graph"


class BipartiteGraphError(PreconditionError):
    precondition = "aperiodicity (odd cycle required)"


class NotConvergedError(PreconditionError):
    """Power iteration hit ``max_iter``; keeps the last iterate for inspection."""

    precondition = "convergence"

    def __init__(self, message: str, last_iterate=None, residual: float = float("nan"), iterations: int = 0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations


class NoEpidemicError(PreconditionError):
    precondition = "no epidemic"


class NoObservableEventsError(PreconditionError):
    precondition = "observable events"
