"""Replication harness: graph, matched sensor suite, SIR run, peaks, lead times, forecasts.

Every replication ``r`` draws from independent streams
``(master_seed, tag, r)`` with tags ``graph``, ``fos``, ``seeding`` and
``dynamics``, so results depend only on the config and not on the worker
count or scheduling.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..config import ScenarioConfig
from ..epidemic import EpidemicParams, Seeding, SimulationTrace, simulate
from ..errors import InvalidParameterError, SocialSensorsError
from ..graph import Graph, generate_chung_lu, generate_er, largest_connected_component, power_law_weights, read_edge_list
from ..report import write_csv
from ..rng import derive_rng
from ..sensors import SensorSuite, matched_sensor_suite
from .forecast import ForecastReport, forecast_peak_cubic
from .peaks import PeakReport, lead_time, peak_time

logger = logging.getLogger(__name__)

METHODS = ("population", "fos", "ev", "nev")
FORECAST_METHODS = ("ev", "nev")
DISPLAY_NAMES = {
    "population": "Population",
    "fos": "FOS Sensor",
    "ev": "EV Sensor",
    "nev": "NEV Sensor",
}

LEAD_HEADER = ("replication", "method", "peak_time", "lead_time", "extinct_flag")
AGGREGATE_HEADER = ("method", "median_peak", "median_lead", "iqr_lead", "n_effective")
FORECAST_HEADER = ("replication", "method", "predicted_peak", "actual_peak", "bias")
SUMMARY_HEADER = ("group", "peak_time", "lead_time")
FAILURE_HEADER = ("replication", "error")


@dataclass
class ReplicationResult:
    replication: int
    n: int
    m: int
    sensor_size: int
    extinct: bool
    peaks: dict[str, PeakReport | None]
    forecasts: dict[str, ForecastReport | None] = field(default_factory=dict)
    trace: SimulationTrace | None = None
    suite: SensorSuite | None = None

    def lead(self, method: str) -> int | None:
        pop, s = self.peaks.get("population"), self.peaks.get(method)
        if method == "population" or pop is None or s is None:
            return None
        return lead_time(pop, s)


@dataclass
class Failure:
    replication: int
    error: str


@dataclass
class BenchmarkResult:
    config: ScenarioConfig
    replications: list[ReplicationResult]
    failures: list[Failure]

    @property
    def failure_count(self) -> int:
        return len(self.failures)

    def effective(self) -> list[ReplicationResult]:
        return [r for r in self.replications if not r.extinct]

    def lead_rows(self):
        rows = []
        for r in self.replications:
            for method in METHODS:
                p = r.peaks.get(method)
                rows.append((r.replication, method, p.peak_time if p else None, r.lead(method), r.extinct))
        return rows

    def median_peaks(self) -> dict[str, float | None]:
        out = {}
        for method in METHODS:
            vals = [r.peaks[method].peak_time for r in self.effective() if r.peaks.get(method)]
            out[method] = float(np.median(vals)) if vals else None
        return out

    def aggregate_rows(self):
        """Per method: median peak, median and IQR of lead time, number of usable replications."""
        rows = []
        for method in METHODS:
            usable = [r for r in self.effective() if r.peaks.get(method) and r.peaks.get("population")]
            peaks = [r.peaks[method].peak_time for r in usable]
            if method == "population" or not usable:
                leads = []
            else:
                leads = [r.lead(method) for r in usable]
            med_peak = float(np.median(peaks)) if peaks else None
            med_lead = float(np.median(leads)) if leads else None
            iqr = float(np.subtract(*np.percentile(leads, [75, 25]))) if leads else None
            rows.append((method, med_peak, med_lead, iqr, len(usable)))
        return rows

    def aggregate(self) -> dict[str, dict]:
        return {row[0]: dict(zip(AGGREGATE_HEADER[1:], row[1:])) for row in self.aggregate_rows()}

    def forecast_rows(self):
        rows = []
        for r in self.replications:
            for method in FORECAST_METHODS:
                f = r.forecasts.get(method)
                if f is not None:
                    rows.append((r.replication, method, f.predicted_peak, f.actual_peak, f.bias))
        return rows

    def summary_rows(self):
        """Four-row ``group, peak_time, lead_time`` table from median peaks."""
        peaks = self.median_peaks()
        pop = peaks["population"]
        rows = []
        for method in METHODS:
            peak = peaks[method]
            lead = None if method == "population" or peak is None or pop is None else pop - peak
            rows.append((DISPLAY_NAMES[method], _compact(peak), _compact(lead)))
        return rows

    def write(self, output_dir: str | os.PathLike) -> dict[str, str]:
        """Write all CSVs; returns ``{filename: sha256}``."""
        os.makedirs(output_dir, exist_ok=True)
        files = {
            "lead_times.csv": (LEAD_HEADER, self.lead_rows()),
            "aggregate.csv": (AGGREGATE_HEADER, self.aggregate_rows()),
            "lead_time_summary.csv": (SUMMARY_HEADER, self.summary_rows()),
            "forecasts.csv": (FORECAST_HEADER, self.forecast_rows()),
            "failures.csv": (FAILURE_HEADER, [(f.replication, f.error) for f in self.failures]),
        }
        return {
            name: write_csv(os.path.join(output_dir, name), header, rows)
            for name, (header, rows) in files.items()
        }


@lru_cache(maxsize=8)
def _cached_weights(n: int, m: float, exponent: float) -> np.ndarray:
    w = power_law_weights(n, m, exponent)
    w.flags.writeable = False
    return w


def _compact(x):
    if x is None:
        return None
    return int(x) if float(x).is_integer() else x


def load_fixed_graph(config: ScenarioConfig) -> Graph | None:
    """The shared graph for file-backed sources; ``None`` when graphs are generated."""
    src = config.graph
    if src.source == "edge_list":
        return read_edge_list(src.path)
    return None


def build_graph(config: ScenarioConfig, replication: int, fixed: Graph | None = None) -> Graph:
    src = config.graph
    if fixed is not None:
        g = fixed
    elif src.source == "er":
        g = generate_er(src.n, src.p, derive_rng(config.master_seed, "graph", replication))
    elif src.source == "chung_lu":
        weights = np.loadtxt(src.weights_file, ndmin=1) if src.weights_file else _cached_weights(src.n, src.m, src.exponent)
        g = generate_chung_lu(weights, derive_rng(config.master_seed, "graph", replication))
    else:
        raise InvalidParameterError(f"graph source {src.source!r} needs a loaded graph")
    if src.lcc:
        g, _ = largest_connected_component(g)
    return g


def _safe_peak(series, window) -> PeakReport | None:
    try:
        return peak_time(series, window)
    except SocialSensorsError:
        return None


def run_replication(
    config: ScenarioConfig, replication: int, fixed: Graph | None = None, keep_trace: bool = False
) -> ReplicationResult:
    """One full replication; see the module docstring for the stream layout."""
    seed = config.master_seed
    g = build_graph(config, replication, fixed)
    suite = matched_sensor_suite(g, config.fos_sample_size, derive_rng(seed, "fos", replication))
    if config.initial_infected > g.n:
        raise InvalidParameterError(f"initial_infected={config.initial_infected} exceeds n={g.n}")
    seeded = derive_rng(seed, "seeding", replication).choice(g.n, config.initial_infected, replace=False)
    params = EpidemicParams(config.beta, config.gamma, config.clamp_mode)
    trace = simulate(
        g,
        params,
        Seeding.explicit(np.sort(seeded)),
        config.T,
        groups={"fos": suite.fos.nodes, "ev": suite.ev.nodes, "nev": suite.nev.nodes},
        seed=derive_rng(seed, "dynamics", replication),
    )
    extinct = trace.population.cumulative[-1] < config.extinction_threshold * g.n
    peaks = {}
    for method in METHODS:
        s = trace.series(method)
        series = s.I if config.peak_series == "prevalence" else s.new_infections
        peaks[method] = _safe_peak(series, config.smoothing_window)
    forecasts = {}
    if config.forecast and not extinct and peaks["population"] is not None:
        for method in FORECAST_METHODS:
            if peaks[method] is None:
                continue
            try:
                forecasts[method] = forecast_peak_cubic(
                    trace.population.cumulative,
                    peaks[method].peak_time,
                    config.forecast_lag,
                    config.forecast_horizon,
                    actual_peak=peaks["population"].peak_time,
                    method=method,
                )
            except InvalidParameterError as exc:
                logger.info("replication %d: %s forecast skipped: %s", replication, method, exc)
    return ReplicationResult(
        replication=replication,
        n=g.n,
        m=g.m,
        sensor_size=suite.fos.k,
        extinct=bool(extinct),
        peaks=peaks,
        forecasts=forecasts,
        trace=trace if keep_trace else None,
        suite=suite if keep_trace else None,
    )


def _worker(args):
    config, replication, fixed = args
    try:
        return run_replication(config, replication, fixed)
    except SocialSensorsError as exc:
        return Failure(replication, f"{type(exc).__name__}: {exc}")


def benchmark(config: ScenarioConfig, keep_traces: bool = False) -> BenchmarkResult:
    """Run ``config.replications`` replications and collect them in index order.

    Failures inside a replication (for example an FOS sample with no friends,
    or an unconverged power iteration) are recorded and do not stop the run.
    """
    if config.replications < 1:
        raise InvalidParameterError("replications must be >= 1")
    fixed = load_fixed_graph(config)
    jobs = [(config, r, fixed) for r in range(config.replications)]
    if config.workers > 1 and not keep_traces:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_worker, jobs))
    elif keep_traces:
        outcomes = []
        for c, r, f in jobs:
            try:
                outcomes.append(run_replication(c, r, f, keep_trace=True))
            except SocialSensorsError as exc:
                outcomes.append(Failure(r, f"{type(exc).__name__}: {exc}"))
    else:
        outcomes = [_worker(job) for job in jobs]
    results = [o for o in outcomes if isinstance(o, ReplicationResult)]
    failures = [o for o in outcomes if isinstance(o, Failure)]
    return BenchmarkResult(config, results, failures)
