import os

import numpy as np
import pytest

from socialsensors.graph import Graph, from_edge_list, generate_er, largest_connected_component

DATA = os.path.join(os.path.dirname(__file__), "data")
CONTACT_FIXTURE = os.path.join(DATA, "contact_network_edges.txt")


def star(leaves: int) -> Graph:
    return from_edge_list([(0, i) for i in range(1, leaves + 1)])


def path(n: int) -> Graph:
    return from_edge_list([(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return from_edge_list([(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return from_edge_list([(i, j) for i in range(n) for j in range(i + 1, n)])


def triangle_pendant() -> Graph:
    # triangle {0,1,2}, pendant 3 on node 2; degrees (2, 2, 3, 1)
    return from_edge_list([(0, 1), (1, 2), (0, 2), (2, 3)])


def dense_adjacency(g: Graph) -> np.ndarray:
    return g.adjacency.toarray()


def random_connected(seed, n_max=8, p=0.45, require_odd_cycle=False):
    """Connected ER graphs (n <= n_max) drawn until one qualifies."""
    from socialsensors.graph import is_bipartite

    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(2, n_max + 1))
        g = generate_er(n, p, rng)
        if g.m and g.is_connected() and not (require_odd_cycle and is_bipartite(g)):
            return g


def random_lcc_non_bipartite(seed, n_range=(20, 500), mean_degree=(3.0, 10.0)):
    from socialsensors.graph import is_bipartite

    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(*n_range, endpoint=True))
        d = rng.uniform(*mean_degree)
        g, _ = largest_connected_component(generate_er(n, min(1.0, d / (n - 1)), rng))
        if g.n >= 3 and not is_bipartite(g):
            return g


@pytest.fixture
def contact_graph():
    from socialsensors.graph import read_edge_list

    return read_edge_list(CONTACT_FIXTURE)
