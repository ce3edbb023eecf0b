import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from consensus_tf.graph import build_graph
from consensus_tf.instances import (
    five_node_example_graph,
    forest_example_graph,
    pi_integrator_agent,
)


@pytest.fixture
def forest_graph():
    return forest_example_graph()


@pytest.fixture
def five_node():
    return five_node_example_graph()


@pytest.fixture
def pi_agent():
    return pi_integrator_agent()


@st.composite
def digraphs(draw, min_n=1, max_n=6, weights=True):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    arcs = []
    for (u, v), keep in zip(pairs, mask):
        if keep:
            w = draw(st.floats(0.1, 3.0)) if weights else 1.0
            arcs.append((u, v, w))
    return build_graph(n, arcs)


def brute_forests(g, k):
    """Out-forests by subset enumeration: k arcs, in-degree <= 1, acyclic.
    Returns a list of (arc tuple, parent dict)."""
    arcs = [(u, v) for u, v, _ in g.arcs]
    out = []
    for subset in itertools.combinations(arcs, k):
        heads = [v for _, v in subset]
        if len(set(heads)) != len(heads):
            continue
        parent = {v: u for u, v in subset}
        ok = True
        for v in parent:
            seen, x = set(), v
            while x in parent:
                if x in seen:
                    ok = False
                    break
                seen.add(x)
                x = parent[x]
            if not ok:
                break
        if ok:
            out.append((subset, parent))
    return out


def brute_root(parent, v):
    while v in parent:
        v = parent[v]
    return v


def brute_set_weight(g, k, root, contains):
    total = 0.0
    for subset, parent in brute_forests(g, k):
        if root not in parent and brute_root(parent, contains) == root:
            total += float(np.prod([g.weight(u, v) for u, v in subset]))
    return total


def cofactor_poly(L, o, c):
    """(o, c) entry of adj(sI + L) by interpolating determinants of minors.
    Independent of the Faddeev-LeVerrier route."""
    n = L.shape[0]
    if n == 1:
        return np.array([1.0])
    pts = np.exp(2j * np.pi * np.arange(n) / n) * 1.5
    vals = []
    for s in pts:
        A = s * np.eye(n) + L
        minor = np.delete(np.delete(A, c - 1, axis=0), o - 1, axis=1)
        vals.append((-1) ** (o + c) * np.linalg.det(minor))
    V = np.vander(pts, n, increasing=True)
    return np.linalg.solve(V, np.array(vals)).real
