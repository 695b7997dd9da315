"""Method-of-moments estimators of the infection and recovery rates.

Both estimators average event indicators over a fully observed state history
up to ``T_obs``.  Two normalizations are offered:

``"paper-exact"``
    Divide by ``n * T_obs``, every node-step in the window.
``"risk-set"``
    Divide by the number of node-steps actually at risk: susceptible with at
    least one infected neighbor (infection), or infected (recovery).

The first counts node-steps that could never produce an event, so it sits
below the true rate whenever most nodes are not at risk; the second is the
ratio estimator that is consistent for ``beta`` and ``gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..epidemic import NodeState
from ..errors import InvalidParameterError, NoObservableEventsError
from ..graph import Graph

VARIANTS = ("paper-exact", "risk-set")

_S, _I, _R = int(NodeState.S), int(NodeState.I), int(NodeState.R)


@dataclass(frozen=True)
class RateEstimates:
    beta_hat: float | None
    gamma_hat: float | None
    variant: str
    T_obs: int


def _window(history, T_obs: int, variant: str) -> np.ndarray:
    if variant not in VARIANTS:
        raise InvalidParameterError(f"variant must be one of {VARIANTS}, got {variant!r}")
    h = np.asarray(history)
    if h.ndim != 2:
        raise InvalidParameterError("history must be a (T, n) state matrix")
    if T_obs < 2:
        raise InvalidParameterError(f"T_obs must be >= 2, got {T_obs}")
    if T_obs > h.shape[0]:
        raise InvalidParameterError(f"T_obs={T_obs} exceeds the {h.shape[0]} recorded steps")
    return h[:T_obs]


def beta_terms(history, g: Graph, T_obs: int) -> tuple[float, int]:
    """Sum of ``I_it S_i,t-1 / (#infected neighbors at t-1)`` and the at-risk count.

    Node-steps with no infected neighbor contribute nothing to either.
    """
    h = _window(history, T_obs, "risk-set")
    if h.shape[1] != g.n:
        raise InvalidParameterError(f"history has {h.shape[1]} columns for a graph of {g.n} nodes")
    prev, cur = h[:-1], h[1:]
    k = np.rint((g.adjacency @ (prev == _I).T.astype(float)).T)
    at_risk = (prev == _S) & (k > 0)
    infected_now = at_risk & (cur == _I)
    total = float(np.sum(1.0 / k[infected_now]))
    return total, int(np.count_nonzero(at_risk))


def estimate_beta_mom(history, g: Graph, T_obs: int, variant: str = "paper-exact") -> RateEstimates:
    """Infection-rate estimate from the first ``T_obs`` steps of ``history``.

    Raises:
        NoObservableEventsError: if no susceptible node ever had an infected
            neighbor inside the window.
    """
    _window(history, T_obs, variant)
    total, at_risk = beta_terms(history, g, T_obs)
    if at_risk == 0:
        raise NoObservableEventsError("no transmission events observable")
    n = np.asarray(history).shape[1]
    denom = n * T_obs if variant == "paper-exact" else at_risk
    return RateEstimates(total / denom, None, variant, T_obs)


def estimate_gamma_mom(history, T_obs: int, variant: str = "paper-exact") -> RateEstimates:
    """Recovery-rate estimate from the first ``T_obs`` steps of ``history``.

    Raises:
        NoObservableEventsError: risk-set variant with no infected node-step.
    """
    h = _window(history, T_obs, variant)
    prev, cur = h[:-1], h[1:]
    infected = prev == _I
    recoveries = int(np.count_nonzero(infected & (cur == _R)))
    if variant == "paper-exact":
        return RateEstimates(None, recoveries / (h.shape[1] * T_obs), variant, T_obs)
    exposure = int(np.count_nonzero(infected))
    if exposure == 0:
        raise NoObservableEventsError("no infected node-steps observable")
    return RateEstimates(None, recoveries / exposure, variant, T_obs)


def estimate_rates(history, g: Graph, T_obs: int, variant: str = "paper-exact") -> RateEstimates:
    b = estimate_beta_mom(history, g, T_obs, variant)
    c = estimate_gamma_mom(history, T_obs, variant)
    return RateEstimates(b.beta_hat, c.gamma_hat, variant, T_obs)
