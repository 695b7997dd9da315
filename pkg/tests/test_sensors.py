import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socialsensors.errors import BipartiteGraphError, InvalidParameterError
from socialsensors.graph import from_edge_list, generate_chung_lu, largest_connected_component, power_law_weights
from socialsensors.sensors import (
    ev_select,
    fos_from_sample,
    fos_inclusion_probability,
    fos_select,
    matched_sensor_suite,
    nev_select,
    rank_top_k,
)

from .conftest import complete, cycle, path, random_lcc_non_bipartite, star, triangle_pendant


def enumerate_inclusion(n, d_j, k):
    """Oracle: fraction of k-subsets of n that hit a fixed set of d_j neighbors."""
    neighbors = set(range(d_j))
    subsets = list(itertools.combinations(range(n), k))
    return sum(1 for s in subsets if neighbors.intersection(s)) / len(subsets)


def test_inclusion_probability_examples():
    assert fos_inclusion_probability(1000, 0, 10) == 0.0
    assert enumerate_inclusion(4, 3, 1) == 0.75
    assert fos_inclusion_probability(4, 3, 1) == pytest.approx(0.75, abs=1e-15)
    assert enumerate_inclusion(5, 2, 2) == pytest.approx(0.7)
    assert fos_inclusion_probability(5, 2, 2) == pytest.approx(1 - comb(3, 2) / comb(5, 2), abs=1e-15)


@pytest.mark.parametrize("n", range(1, 9))
def test_inclusion_probability_matches_enumeration(n):
    for d in range(n):
        for k in range(1, n + 1):
            assert fos_inclusion_probability(n, d, k) == pytest.approx(enumerate_inclusion(n, d, k), abs=1e-12)


def test_inclusion_probability_large_n_no_overflow():
    p = fos_inclusion_probability(100_000, 50, 1000)
    exact = 1 - comb(100_000 - 50, 1000) / comb(100_000, 1000)
    assert p == pytest.approx(exact, rel=1e-10)


@pytest.mark.parametrize("n, d, k", [(5, 5, 1), (5, 2, 6), (5, 2, 0), (5, -1, 1)])
def test_inclusion_probability_domain(n, d, k):
    with pytest.raises(InvalidParameterError):
        fos_inclusion_probability(n, d, k)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 2000), st.data())
def test_inclusion_probability_monotone_in_degree(n, data):
    k = data.draw(st.integers(1, n))
    probs = [fos_inclusion_probability(n, d, k) for d in range(0, n, max(1, n // 50))]
    assert np.all(np.diff(probs) >= -1e-15)
    assert all(0.0 <= p <= 1.0 for p in probs)


def test_fos_star_examples():
    g = star(4)
    assert list(fos_from_sample(g, [0]).nominated) == [1, 2, 3, 4]
    assert list(fos_from_sample(g, [3]).nominated) == [0]
    # both endpoints sampled: each nominates the other
    assert list(fos_from_sample(g, [0, 2]).nominated) == [0, 1, 2, 3, 4]


def test_fos_select_reproducible_and_provenance():
    g = random_lcc_non_bipartite(2, n_range=(60, 80))
    a, b = fos_select(g, 10, 99), fos_select(g, 10, 99)
    assert np.array_equal(a.nodes, b.nodes)
    assert len(a.provenance["sample"]) == 10
    assert a.seed == 99
    nominated = set()
    for i in a.provenance["sample"]:
        nominated |= set(g.neighbors(i).tolist())
    assert a.as_set() == nominated and a.k == len(nominated)


def test_fos_select_domain():
    with pytest.raises(InvalidParameterError):
        fos_select(star(3), 5, 0)
    with pytest.raises(InvalidParameterError):
        fos_select(star(3), 0, 0)


def test_fos_monte_carlo_matches_formula_small():
    g = triangle_pendant()
    rng = np.random.default_rng(5)
    draws = 20_000
    hits = np.zeros(g.n)
    for _ in range(draws):
        hits[fos_select(g, 2, rng).nodes] += 1
    for j in range(g.n):
        p = fos_inclusion_probability(g.n, int(g.degrees[j]), 2)
        se = np.sqrt(p * (1 - p) / draws)
        assert abs(hits[j] / draws - p) <= 3 * se + 1e-12


def test_ev_select_examples():
    assert list(ev_select(star(4), 1).nodes) == [0]
    assert sorted(ev_select(complete(3), 3).nodes) == [0, 1, 2]
    assert list(ev_select(path(3), 1).nodes) == [1]


def test_nev_select_examples():
    assert list(nev_select(triangle_pendant(), 1).nodes) == [2]
    assert list(nev_select(complete(3), 2).nodes) == [0, 1]
    with pytest.raises(BipartiteGraphError):
        nev_select(cycle(6), 2)


def top_k_by_degree(g, k):
    return sorted(range(g.n), key=lambda i: (-g.degrees[i], i))[:k]


def test_nev_select_equals_degree_ranking():
    rng = np.random.default_rng(0)
    for seed in range(100):
        g = random_lcc_non_bipartite(seed, n_range=(10, 120))
        k = int(rng.integers(1, g.n + 1))
        assert list(nev_select(g, k).nodes) == top_k_by_degree(g, k)


def test_selectors_deterministic():
    g = random_lcc_non_bipartite(4)
    assert np.array_equal(ev_select(g, 15).nodes, ev_select(g, 15).nodes)
    assert np.array_equal(nev_select(g, 15).nodes, nev_select(g, 15).nodes)


def test_rank_top_k_tie_groups():
    scores = np.array([0.5, 0.7, 0.7 + 1e-12, 0.1, 0.7 - 1e-12])
    assert list(rank_top_k(scores, 3)) == [1, 2, 4]
    assert list(rank_top_k(scores, 5)) == [1, 2, 4, 0, 3]
    with pytest.raises(InvalidParameterError):
        rank_top_k(scores, 0)


def _leaf_seed(g):
    return next(s for s in range(100) if fos_select(g, 1, s).provenance["sample"][0] != 0)


def test_matched_suite_star_leaf_sample():
    # a pure star is bipartite, so the NEV half of the suite is refused
    g = star(9)
    seed = _leaf_seed(g)
    fos = fos_select(g, 1, seed)
    assert list(fos.nodes) == [0]
    assert list(ev_select(g, fos.k).nodes) == [0]
    with pytest.raises(BipartiteGraphError):
        matched_sensor_suite(g, 1, seed)


def test_matched_suite_star_with_chord():
    g = from_edge_list([(0, i) for i in range(1, 10)] + [(1, 2)])
    seed = next(s for s in range(100) if fos_select(g, 1, s).provenance["sample"][0] >= 3)
    suite = matched_sensor_suite(g, 1, seed)
    assert suite.fos.k == 1
    assert list(suite.ev.nodes) == list(suite.nev.nodes) == [0]


def test_matched_suite_sizes_equal():
    g = random_lcc_non_bipartite(8)
    suite = matched_sensor_suite(g, 5, 1)
    assert suite.fos.k == suite.ev.k == suite.nev.k
    fos, ev, nev = suite
    assert (fos.method, ev.method, nev.method) == ("fos", "ev", "nev")


def test_matched_suite_chung_lu_scale():
    g, _ = largest_connected_component(generate_chung_lu(power_law_weights(1000, 2500, 2.5), 11))
    suite = matched_sensor_suite(g, 20, 3)
    assert suite.fos.k == suite.ev.k == suite.nev.k > 20


def test_sensor_rows():
    rows = ev_select(star(4), 2).to_rows(labels=["c", "a", "b", "d", "e"])
    assert rows[0][:3] == ("c", "ev", 1)
    assert float(rows[0][3]) == pytest.approx(1 / np.sqrt(2))
    rows = fos_select(star(4), 1, 0).to_rows()
    assert rows[0][1:] == ("fos", 1, "NA")
