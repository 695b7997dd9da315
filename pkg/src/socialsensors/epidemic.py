"""Discrete-time stochastic SIR dynamics on a contact graph.

At each step every susceptible node with ``k`` infected neighbors becomes
infected with probability ``min(1, beta * k)`` (``"linear"`` mode) or
``1 - (1 - beta) ** k`` (``"complement"`` mode); every infected node recovers
with probability ``gamma``; recovered nodes stay recovered.  All draws in a
step use the states at the start of that step.

Time is 1-based: ``t = 1`` is the seeded state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidParameterError
from .graph import Graph
from .rng import as_generator

CLAMP_MODES = ("linear", "complement")
POPULATION = "population"


class NodeState(IntEnum):
    S = 0
    I = 1  # noqa: E741
    R = 2


_S, _I, _R = int(NodeState.S), int(NodeState.I), int(NodeState.R)
STATE_CODES = {"S": _S, "I": _I, "R": _R}
STATE_LETTERS = "SIR"


@dataclass(frozen=True)
class EpidemicParams:
    beta: float
    gamma: float
    clamp_mode: str = "linear"

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta >= 0):
            raise InvalidParameterError(f"beta must be a nonnegative number, got {self.beta}")
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidParameterError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.clamp_mode not in CLAMP_MODES:
            raise InvalidParameterError(f"clamp_mode must be one of {CLAMP_MODES}, got {self.clamp_mode!r}")
        if self.clamp_mode == "complement" and self.beta > 1:
            raise InvalidParameterError("complement mode needs beta <= 1")

    def infection_probability(self, infected_neighbors) -> np.ndarray:
        k = np.asarray(infected_neighbors, dtype=float)
        if self.clamp_mode == "linear":
            return np.minimum(1.0, self.beta * k)
        return -np.expm1(k * np.log1p(-self.beta)) if self.beta < 1 else (k > 0).astype(float)


@dataclass(frozen=True)
class Seeding:
    """Initially infected nodes: an explicit list, or ``count`` nodes drawn uniformly."""

    nodes: tuple[int, ...] | None = None
    count: int | None = None
    seed: int | None = None

    @classmethod
    def explicit(cls, nodes: Sequence[int]) -> "Seeding":
        return cls(nodes=tuple(int(i) for i in nodes))

    @classmethod
    def random(cls, count: int, seed: int | None = None) -> "Seeding":
        """``count`` uniform nodes; drawn from ``seed`` or, if ``None``, from the simulation stream."""
        return cls(count=int(count), seed=seed)

    def resolve(self, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
        if self.nodes is not None:
            nodes = np.asarray(self.nodes, dtype=np.int64)
            if nodes.size and (nodes.min() < 0 or nodes.max() >= n):
                raise InvalidParameterError(f"seeding node out of range [0, {n})")
            if np.unique(nodes).size != nodes.size:
                raise InvalidParameterError("seeding nodes must be distinct")
            return nodes
        if self.count is None or not 0 <= self.count <= n:
            raise InvalidParameterError(f"seeding count must lie in [0, {n}], got {self.count}")
        source = as_generator(self.seed) if self.seed is not None else rng
        if source is None:
            raise InvalidParameterError("random seeding needs a seed")
        return np.sort(source.choice(n, size=self.count, replace=False))


def _as_seeding(seeding) -> Seeding:
    if isinstance(seeding, Seeding):
        return seeding
    if isinstance(seeding, (int, np.integer)):
        return Seeding.random(int(seeding))
    return Seeding.explicit(seeding)


@dataclass(frozen=True)
class GroupSeries:
    """Per-step compartment counts for one node group (index ``t - 1``)."""

    nodes: np.ndarray
    S: np.ndarray
    I: np.ndarray  # noqa: E741
    R: np.ndarray
    new_infections: np.ndarray

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.new_infections)


@dataclass(frozen=True)
class SimulationTrace:
    """Result of :func:`simulate`.

    ``history`` (when recorded) has shape ``(T, n)`` with state codes
    0/1/2 for S/I/R; row ``t - 1`` is time ``t``.
    """

    T: int
    population: GroupSeries
    groups: dict[str, GroupSeries]
    params: EpidemicParams
    seeded: np.ndarray
    seed: object = None
    history: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.population.size

    @property
    def times(self) -> np.ndarray:
        return np.arange(1, self.T + 1)

    def series(self, group: str) -> GroupSeries:
        if group == POPULATION:
            return self.population
        try:
            return self.groups[group]
        except KeyError:
            raise KeyError(f"group {group!r} was not tracked") from None

    def group_names(self) -> list[str]:
        return [POPULATION, *self.groups]

    def to_rows(self):
        """Rows ``(t, group, S, I, R, new_infections, cumulative)``, grouped by group."""
        rows = []
        for name in self.group_names():
            s = self.series(name)
            cum = s.cumulative
            for t in range(self.T):
                rows.append((t + 1, name, int(s.S[t]), int(s.I[t]), int(s.R[t]), int(s.new_infections[t]), int(cum[t])))
        return rows


def _transition(states, infected_neighbors, params: EpidemicParams, rng: np.random.Generator):
    """Draw one synchronous step in place; returns (newly infected, newly recovered) ids.

    Draw order: at-risk susceptibles in ascending id, then infected nodes in
    ascending id.  Susceptibles with no infected neighbor need no draw.
    """
    at_risk = np.flatnonzero((states == _S) & (infected_neighbors > 0))
    infected = np.flatnonzero(states == _I)
    p = params.infection_probability(infected_neighbors[at_risk])
    new_inf = at_risk[rng.random(at_risk.size) < p]
    recovered = infected[rng.random(infected.size) < params.gamma]
    states[new_inf] = _I
    states[recovered] = _R
    return new_inf, recovered


def _infected_neighbors(g: Graph, states) -> np.ndarray:
    return np.rint(g.adjacency @ (states == _I).astype(float)).astype(np.int64)


def step(g: Graph, states, params: EpidemicParams, rng) -> np.ndarray:
    """One synchronous SIR step; returns a new state array."""
    states = np.asarray(states)
    if states.shape != (g.n,):
        raise InvalidParameterError(f"states must have length {g.n}")
    rng = as_generator(rng)
    out = states.astype(np.int8, copy=True)
    _transition(out, _infected_neighbors(g, out), params, rng)
    return out


def simulate(
    g: Graph,
    params: EpidemicParams,
    seeding,
    T: int,
    groups: Mapping[str, Sequence[int]] | None = None,
    seed=None,
    record_history: bool = False,
) -> SimulationTrace:
    """Run ``T - 1`` SIR steps from the seeded state.

    Args:
        g: Contact graph.
        params: Rates and clamp mode.
        seeding: A :class:`Seeding`, an explicit node list, or a count of
            uniformly drawn nodes (drawn from the simulation stream).
        T: Horizon; the trace covers ``t = 1..T``.
        groups: Named node sets whose counts are tracked every step.
        seed: Seed or Generator for the dynamics.
        record_history: Keep the full ``(T, n)`` state matrix.

    Returns:
        The :class:`SimulationTrace`. ``new_infections[0]`` counts the seeded
        nodes so the cumulative series starts at ``|seeding|``.
    """
    if T < 1:
        raise InvalidParameterError(f"T must be >= 1, got {T}")
    rng = as_generator(seed)
    seeded = _as_seeding(seeding).resolve(g.n, rng)
    groups = dict(groups or {})
    if POPULATION in groups:
        raise InvalidParameterError(f"group name {POPULATION!r} is reserved")
    names = list(groups)
    members = [np.unique(np.asarray(groups[k], dtype=np.int64)) for k in names]
    for name, idx in zip(names, members):
        if idx.size and (idx.min() < 0 or idx.max() >= g.n):
            raise InvalidParameterError(f"group {name!r} has node ids outside the graph")
    # row 0 = population, then one row per group
    M = np.zeros((len(names) + 1, g.n))
    M[0] = 1.0
    for r, idx in enumerate(members, 1):
        M[r, idx] = 1.0
    sizes = M.sum(axis=1).astype(np.int64)

    counts_S = np.zeros((M.shape[0], T), dtype=np.int64)
    counts_I = np.zeros_like(counts_S)
    counts_new = np.zeros_like(counts_S)

    states = np.zeros(g.n, dtype=np.int8)
    states[seeded] = _I
    history = np.empty((T, g.n), dtype=np.int8) if record_history else None

    def record(t, new_mask):
        counts_S[:, t] = np.rint(M @ (states == _S)).astype(np.int64)
        counts_I[:, t] = np.rint(M @ (states == _I)).astype(np.int64)
        counts_new[:, t] = np.rint(M @ new_mask).astype(np.int64)
        if history is not None:
            history[t] = states

    first = np.zeros(g.n)
    first[seeded] = 1.0
    record(0, first)
    A = g.adjacency
    new_mask = np.zeros(g.n)
    for t in range(1, T):
        infected = states == _I
        if not infected.any():
            # absorbing: nothing changes and no further draws are consumed
            counts_S[:, t:] = counts_S[:, t - 1 : t]
            counts_I[:, t:] = 0
            if history is not None:
                history[t:] = states
            break
        k = np.rint(A @ infected.astype(float)).astype(np.int64)
        new_inf, _ = _transition(states, k, params, rng)
        new_mask[:] = 0.0
        new_mask[new_inf] = 1.0
        record(t, new_mask)

    counts_R = sizes[:, None] - counts_S - counts_I

    def series(r, nodes):
        return GroupSeries(nodes, counts_S[r], counts_I[r], counts_R[r], counts_new[r])

    population = series(0, np.arange(g.n))
    tracked = {name: series(r, idx) for r, (name, idx) in enumerate(zip(names, members), 1)}
    return SimulationTrace(
        T=T,
        population=population,
        groups=tracked,
        params=params,
        seeded=seeded,
        seed=seed if isinstance(seed, (int, np.integer)) else None,
        history=history,
    )


def group_incidence(trace: SimulationTrace, group) -> tuple[np.ndarray, np.ndarray]:
    """Per-step new infections and their running sum for ``group``.

    ``group`` is a tracked group name, ``"population"``, or a node collection.
    A node collection is matched against tracked groups first and otherwise
    computed from the recorded history.

    Raises:
        InvalidParameterError: if the group is neither tracked nor derivable.
    """
    if isinstance(group, str):
        try:
            s = trace.series(group)
        except KeyError as exc:
            raise InvalidParameterError(str(exc)) from None
        return s.new_infections.copy(), s.cumulative
    nodes = np.unique(np.asarray(list(group), dtype=np.int64))
    if nodes.size == trace.n:
        s = trace.population
        return s.new_infections.copy(), s.cumulative
    for s in trace.groups.values():
        if np.array_equal(s.nodes, nodes):
            return s.new_infections.copy(), s.cumulative
    if trace.history is None:
        raise InvalidParameterError("group was not tracked and no state history was recorded")
    if nodes.size and (nodes.min() < 0 or nodes.max() >= trace.n):
        raise InvalidParameterError("group has node ids outside the graph")
    h = trace.history[:, nodes]
    new = np.zeros(trace.T, dtype=np.int64)
    new[0] = np.count_nonzero(h[0] == _I)
    new[1:] = np.count_nonzero((h[:-1] == _S) & (h[1:] == _I), axis=1)
    return new, np.cumsum(new)
