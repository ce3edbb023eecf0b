"""Reference graphs, agents and random instance generators."""

from __future__ import annotations

from math import isinf

import numpy as np

from .graph import WeightedDigraph, build_graph, hop_distances_from
from .netfunc import AgentModel
from .poly import Polynomial, RationalFunction


def forest_example_graph() -> WeightedDigraph:
    """Six-node graph whose k=3 out-forests rooted at 1 and containing 3
    weigh 0.36 and 0.192. Arcs 3->2 and 5->2 carry no stated weight; 1.0."""
    return build_graph(6, [(1, 2, 0.6), (2, 3, 0.4), (3, 2, 1.0), (5, 2, 1.0),
                           (4, 5, 0.8), (3, 6, 1.5)])


def five_node_example_graph() -> WeightedDigraph:
    return build_graph(5, [(1, 2), (2, 1), (2, 3, 0.3), (3, 2), (4, 3), (5, 3),
                           (4, 5), (5, 4), (3, 5, 1.5)])


def pi_integrator_agent() -> AgentModel:
    """Plant 1/s with PI controller (s+1)/s, so M = (s+1)/s^2."""
    s = Polynomial([0.0, 1.0])
    return AgentModel(RationalFunction(Polynomial([1.0]), s),
                      RationalFunction(Polynomial([1.0, 1.0]), s))


def undirected_path(n: int, weight: float = 1.0) -> WeightedDigraph:
    arcs = [(i, i + 1, weight) for i in range(1, n)] + [(i + 1, i, weight) for i in range(1, n)]
    return build_graph(n, arcs)


def undirected_star(n: int, weight: float = 1.0) -> WeightedDigraph:
    """Star with centre 1."""
    return build_graph(n, [(1, i, weight) for i in range(2, n + 1)]
                       + [(i, 1, weight) for i in range(2, n + 1)])


def random_topology(rng: np.random.Generator, n: int, p: float = 0.35) -> list[tuple[int, int]]:
    return [(u, v) for u in range(1, n + 1) for v in range(1, n + 1)
            if u != v and rng.random() < p]


def random_weights(rng, topology, low=0.1, high=3.0) -> list[tuple[int, int, float]]:
    return [(u, v, float(rng.uniform(low, high))) for u, v in topology]


def random_digraph(rng: np.random.Generator, n: int, p: float = 0.35,
                   low: float = 0.1, high: float = 3.0) -> WeightedDigraph:
    return build_graph(n, random_weights(rng, random_topology(rng, n, p), low, high))


def random_reachable_digraph(rng, n, p=0.3, root=1, low=0.1, high=3.0) -> WeightedDigraph:
    """Random digraph in which every node is reachable from ``root``; a random
    spanning out-tree from ``root`` is added to a random topology."""
    order = [root] + [int(v) for v in rng.permutation([v for v in range(1, n + 1) if v != root])]
    tree = {(order[int(rng.integers(0, i))], order[i]) for i in range(1, n)}
    topo = sorted(set(random_topology(rng, n, p)) | tree)
    return build_graph(n, random_weights(rng, topo, low, high))


def random_reachable_pair(rng, g: WeightedDigraph, distinct: bool = False):
    """Random (c, o) with o reachable from c, or None if the graph has none."""
    for c in [int(x) for x in rng.permutation(list(g.nodes))]:
        dist = hop_distances_from(g, c)
        reach = [v for v, d in zip(g.nodes, dist) if not isinf(d) and (v != c or not distinct)]
        if reach:
            return c, int(rng.choice(reach))
    return None


def random_agent(rng, max_degree: int = 3, integrator: bool | None = None) -> AgentModel:
    """Proper agent with positive coefficients; plant and controller split
    the open loop so that deg(psi) <= max_degree."""
    if integrator is None:
        integrator = bool(rng.random() < 0.5)
    deg_psi = int(rng.integers(1, max_degree + 1))
    deg_phi = int(rng.integers(0, deg_psi + 1))
    base = deg_psi - 1 if integrator else deg_psi
    a = Polynomial(rng.uniform(0.2, 2.0, base + 1))
    if integrator:
        a = a * Polynomial([0.0, 1.0])
    b = Polynomial(rng.uniform(0.2, 2.0, deg_phi + 1))
    return AgentModel(RationalFunction(b, a))
