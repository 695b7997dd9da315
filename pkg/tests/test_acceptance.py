"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the lines
interleaved with any other output).  Stochastic criteria use seeds fixed in
this file before the first run; outcomes are reported as they fall.
"""

import math
import time

import numpy as np
import pytest

from socialsensors.analysis import estimate_rates, peak_time
from socialsensors.analysis.benchmark import benchmark
from socialsensors.analysis.forecast import forecast_peak_cubic
from socialsensors.config import GraphSource, ScenarioConfig
from socialsensors.epidemic import EpidemicParams, NodeState, Seeding, simulate
from socialsensors.graph import generate_er, largest_connected_component, read_edge_list
from socialsensors.sensors import fos_inclusion_probability, fos_select, matched_sensor_suite
from socialsensors.spectral import ev_centrality, nev_centrality

from .conftest import CONTACT_FIXTURE, dense_adjacency, random_connected, random_lcc_non_bipartite

pytestmark = pytest.mark.acceptance

S, I, R = int(NodeState.S), int(NodeState.I), int(NodeState.R)


@pytest.fixture
def report(capsys):
    def _report(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
        assert ok, detail

    return _report


def cl20_config(**kw):
    base = dict(
        graph=GraphSource(source="chung_lu", n=1000, m=2500.0, exponent=2.5),
        beta=0.001,
        gamma=0.001,
        initial_infected=10,
        fos_sample_size=20,
        T=3000,
        replications=200,
        master_seed=20240501,
    )
    base.update(kw)
    return ScenarioConfig(**base)


@pytest.fixture(scope="module")
def cl20_result():
    t0 = time.perf_counter()
    res = benchmark(cl20_config())
    return res, time.perf_counter() - t0


def test_criterion_01_nev_degree_identity(report):
    t0 = time.perf_counter()
    worst = 1.0
    for seed in range(100):
        g = random_lcc_non_bipartite(seed, n_range=(20, 500))
        x = nev_centrality(g).scores
        d = g.degrees.astype(float)
        worst = min(worst, float(x @ d / (np.linalg.norm(x) * np.linalg.norm(d))))
    elapsed = time.perf_counter() - t0
    ok = worst >= 1 - 1e-10 and elapsed < 10
    report(1, "NEV-degree identity", ok, f"min cosine 1-{1 - worst:.2e}, {elapsed:.2f}s")


def test_criterion_02_ev_oracle(report):
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(200):
        g = random_connected(seed, n_max=8)
        x = ev_centrality(g).scores
        vals, vecs = np.linalg.eigh(dense_adjacency(g))
        v = vecs[:, -1]
        v = v / np.linalg.norm(v)
        x = x / np.linalg.norm(x)
        v = v if v @ x >= 0 else -v
        worst = max(worst, float(np.max(np.abs(x - v))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 5
    report(2, "EV oracle equivalence", ok, f"max abs diff {worst:.2e}, {elapsed:.2f}s")


def test_criterion_03_fos_formula(report):
    rng = np.random.default_rng(20240501)
    draws = 100_000
    worst_z, nodes, bad = 0.0, 0, 0
    for i in range(10):
        n0 = 12 + 4 * i
        g, _ = largest_connected_component(generate_er(n0, 3.5 / n0, 100 + i))
        k = 2 + i % 4
        hits = np.zeros(g.n)
        for _ in range(draws):
            hits[fos_select(g, k, rng).nodes] += 1
        p = np.array([fos_inclusion_probability(g.n, int(d), k) for d in g.degrees])
        se = np.sqrt(p * (1 - p) / draws)
        diff = np.abs(hits / draws - p)
        exact = se == 0
        bad += int(np.count_nonzero(diff[exact] > 0) + np.count_nonzero(diff[~exact] > 3 * se[~exact]))
        if np.any(~exact):
            worst_z = max(worst_z, float(np.max(diff[~exact] / se[~exact])))
        nodes += g.n
    report(3, "FOS inclusion formula", bad == 0, f"{bad}/{nodes} nodes beyond 3 SE, max |z| {worst_z:.2f}")


def test_criterion_04_sir_invariants(report):
    rng = np.random.default_rng(4)
    problems = []
    for i in range(100):
        g = generate_er(int(rng.integers(20, 200)), float(rng.uniform(0.02, 0.2)), rng)
        beta = 0.0 if i % 4 == 0 else float(rng.uniform(0, 0.5))
        gamma = 1.0 if i % 4 == 1 else float(rng.uniform(0, 1))
        tr = simulate(g, EpidemicParams(beta, gamma), Seeding.random(min(5, g.n)), 80, seed=rng, record_history=True)
        pop, h = tr.population, tr.history
        if not np.all(pop.S + pop.I + pop.R == g.n):
            problems.append(f"trace {i}: S+I+R != n")
        if np.any(np.diff(pop.R) < 0):
            problems.append(f"trace {i}: R decreased")
        if beta == 0.0 and np.any(pop.new_infections[1:]):
            problems.append(f"trace {i}: infections with beta=0")
        if gamma == 1.0 and np.any((h[:-1] == I) & (h[1:] == I)):
            problems.append(f"trace {i}: infectious period > 1 with gamma=1")
    report(4, "SIR invariants", not problems, "; ".join(problems) or "100 traces clean")


def test_criterion_05_lead_time_ordering(report, cl20_result):
    res, elapsed = cl20_result
    med = res.median_peaks()
    agg = res.aggregate()
    nev_lead = agg["nev"]["median_lead"]
    ordering = med["nev"] <= med["ev"] <= med["fos"] <= med["population"]
    ok = ordering and nev_lead > 0 and elapsed < 300
    detail = (
        f"median peaks NEV {med['nev']} EV {med['ev']} FOS {med['fos']} population {med['population']}; "
        f"NEV lead {nev_lead}; n_eff {agg['population']['n_effective']}; {elapsed:.0f}s"
    )
    report(5, "lead-time ordering (CL 20)", ok, detail)


@pytest.mark.parametrize("beta,gamma", [(0.005, 0.002), (0.005, 0.005), (0.002, 0.005)])
def test_criterion_06_rate_sweep(report, beta, gamma):
    res = benchmark(cl20_config(beta=beta, gamma=gamma, T=2000, replications=100, master_seed=3))
    agg = res.aggregate()
    ev, nev = agg["ev"]["median_lead"], agg["nev"]["median_lead"]
    ok = ev is not None and nev is not None and ev > 0 and nev > 0
    report(6, f"sweep beta={beta} gamma={gamma}", ok, f"median lead EV {ev}, NEV {nev}")


def test_criterion_07_estimators(report):
    beta = gamma = 0.05
    rng = np.random.default_rng(7)
    est = {"paper-exact": [], "risk-set": []}
    for _ in range(200):
        g, _ = largest_connected_component(generate_er(500, 0.01, rng))
        suite = matched_sensor_suite(g, 20, rng)
        tr = simulate(g, EpidemicParams(beta, gamma), Seeding.random(10), 600,
                      groups={"nev": suite.nev.nodes}, seed=rng, record_history=True)
        T_obs = min(peak_time(tr.series("nev").I).peak_time + 100, tr.T)
        for v in est:
            est[v].append(estimate_rates(tr.history, g, T_obs, v))
    mean = {v: (np.mean([e.beta_hat for e in es]), np.mean([e.gamma_hat for e in es])) for v, es in est.items()}
    rb, rg = mean["risk-set"]
    pb, pg = mean["paper-exact"]
    ok = abs(rb - beta) <= 0.1 * beta and abs(rg - gamma) <= 0.1 * gamma and pb < beta and pg < gamma
    detail = f"risk-set beta {rb:.4f} gamma {rg:.4f}; paper-exact beta {pb:.5f} gamma {pg:.5f}"
    report(7, "method-of-moments estimators", ok, detail)


def test_criterion_08_forecaster(report, cl20_result):
    from fractions import Fraction

    rng = np.random.default_rng(8)
    mismatches = 0
    for _ in range(300):
        c = [int(v) for v in rng.integers(-50, 51, size=4)]
        c[3] = int(rng.integers(-5, 6))  # includes degree <= 2 curves
        sensor_peak, lag, horizon = int(rng.integers(1, 200)), int(rng.integers(3, 120)), int(rng.integers(0, 600))
        t = np.arange(1, sensor_peak + lag + 1, dtype=float)
        rep = forecast_peak_cubic(np.polynomial.Polynomial(c)(t), sensor_peak, lag, horizon)
        C = lambda s: sum(Fraction(a) * s**j for j, a in enumerate(c))
        inc = [C(s) - C(s - 1) for s in range(1, rep.window_end + 1)]
        mismatches += rep.predicted_peak != inc.index(max(inc)) + 1
    res, _ = cl20_result
    biases = [f.bias for r in res.replications for f in r.forecasts.values() if f is not None]
    finite = bool(biases) and all(b is not None and math.isfinite(b) for b in biases)
    ev_bias = float(np.median([r[4] for r in res.forecast_rows() if r[1] == "ev"]))
    ok = mismatches == 0 and finite
    report(8, "forecaster exactness and bias column", ok,
           f"{mismatches}/300 polynomial mismatches; {len(biases)} finite CL biases, median EV bias {ev_bias}")


def test_criterion_09_contact_pipeline(report, tmp_path):
    g, _ = largest_connected_component(read_edge_list(CONTACT_FIXTURE))
    cfg = ScenarioConfig(
        graph=GraphSource(source="edge_list", path=CONTACT_FIXTURE),
        beta=0.025,
        gamma=0.045,
        T=500,
        initial_infected=1,
        fos_sample_size=10,
        forecast=False,
        replications=25,
        master_seed=128401,
    )
    res = benchmark(cfg)
    res.write(tmp_path)
    lines = (tmp_path / "lead_time_summary.csv").read_text().splitlines()
    rows = res.summary_rows()
    ok = (
        (g.n, g.m) == (128, 401)
        and lines[0] == "group,peak_time,lead_time"
        and len(lines) == 5
        and [r[0] for r in rows] == ["Population", "FOS Sensor", "EV Sensor", "NEV Sensor"]
        and all(r[1] is not None for r in rows)
    )
    table = "; ".join(f"{r[0]} {r[1]} {r[2] if r[2] is not None else '-'}" for r in rows)
    report(9, "contact-network pipeline", ok, f"LCC n={g.n} m={g.m}; {table}")


def test_criterion_10_determinism(report, tmp_path):
    cfg = cl20_config(graph=GraphSource(source="chung_lu", n=400, m=1000.0), T=1500, replications=8, master_seed=99)
    first = benchmark(cfg).write(tmp_path / "a")
    second = benchmark(cfg).write(tmp_path / "b")
    same_bytes = all(
        (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes() for name in first
    )
    ok = first == second and same_bytes
    report(10, "determinism", ok, f"{len(first)} CSVs byte-identical" if ok else "outputs differ")
