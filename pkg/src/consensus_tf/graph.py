"""Weighted directed graphs, Laplacians and the combinatorial oracles.

Nodes are labelled ``1..N`` everywhere in the public API. Matrices are plain
numpy arrays indexed from zero, so node ``v`` lives in row/column ``v - 1``.

An arc ``u -> v`` of weight ``w`` means agent ``v`` listens to agent ``u``; it
is stored as ``A[v-1, u-1] = w`` and the Laplacian is ``L = D - A`` with
``D`` the diagonal of incoming weight sums, so every row of ``L`` sums to 0.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from math import inf, prod
from typing import Iterable, Iterator

import numpy as np

from .errors import EnumerationCapError, GraphError, PathCountError

DEFAULT_ENUMERATION_CAP = 9
DEFAULT_PATH_CAP = 10_000


def enumeration_cap(cap: int | None = None) -> int:
    """Resolve the forest-enumeration node cap (argument, then $NETFUNC_CAP)."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("NETFUNC_CAP")
    if env:
        return int(env)
    return DEFAULT_ENUMERATION_CAP


@dataclass(frozen=True)
class WeightedDigraph:
    node_count: int
    arcs: tuple[tuple[int, int, float], ...]
    _weights: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_weights", {(u, v): w for u, v, w in self.arcs})

    @property
    def n(self) -> int:
        return self.node_count

    @property
    def nodes(self) -> range:
        return range(1, self.node_count + 1)

    def weight(self, u: int, v: int) -> float:
        """Weight of arc ``u -> v`` (0.0 when absent)."""
        return self._weights.get((u, v), 0.0)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._weights

    def successors(self, u: int) -> list[int]:
        return sorted(v for (a, v) in self._weights if a == u)

    def predecessors(self, v: int) -> list[int]:
        return sorted(u for (u, b) in self._weights if b == v)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v, w in self.arcs:
            A[v - 1, u - 1] = w
        return A

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "arcs": [{"from": u, "to": v, "weight": w} for u, v, w in self.arcs],
        }


@dataclass(frozen=True)
class Path:
    vertices: tuple[int, ...]

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.vertices[:-1], self.vertices[1:]))

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class OutForest:
    """Spanning out-forest stored as a parent map (``parent[v] = u`` for the
    arc ``u -> v``); roots are the vertices without a parent."""

    n: int
    parent: tuple[tuple[int, int], ...]

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for v, u in self.parent)

    @property
    def roots(self) -> tuple[int, ...]:
        children = {v for v, _ in self.parent}
        return tuple(v for v in range(1, self.n + 1) if v not in children)

    def root_of(self, v: int) -> int:
        parents = dict(self.parent)
        while v in parents:
            v = parents[v]
        return v

    def contains(self, root: int, vertex: int) -> bool:
        """True when ``vertex`` sits in the tree diverging from ``root``."""
        return root in self.roots and self.root_of(vertex) == root

    def weight(self, g: WeightedDigraph) -> float:
        return prod(g.weight(u, v) for u, v in self.arcs)


def build_graph(node_count: int, arc_list: Iterable) -> WeightedDigraph:
    """Validate and build a graph.

    ``arc_list`` items are ``(from, to)`` or ``(from, to, weight)`` tuples, or
    dicts with ``from``/``to``/optional ``weight`` keys. Missing weights are 1.
    """
    if int(node_count) != node_count or node_count < 1:
        raise GraphError(f"node count must be a positive integer, got {node_count!r}",
                         "bad_node_count")
    node_count = int(node_count)
    arcs = []
    seen = set()
    for item in arc_list:
        if isinstance(item, dict):
            u, v, w = item["from"], item["to"], item.get("weight", 1.0)
        elif len(item) == 2:
            (u, v), w = item, 1.0
        else:
            u, v, w = item
        for x in (u, v):
            if int(x) != x or not 1 <= x <= node_count:
                raise GraphError(f"node index {x!r} outside 1..{node_count}",
                                 "index_out_of_range")
        u, v, w = int(u), int(v), float(w)
        if not w > 0 or not np.isfinite(w):
            raise GraphError(f"arc {u}->{v} has non-positive weight {w}",
                             "non_positive_weight")
        if u == v:
            raise GraphError(f"self-arc at node {u}", "self_arc")
        if (u, v) in seen:
            raise GraphError(f"duplicate arc {u}->{v}", "duplicate_arc")
        seen.add((u, v))
        arcs.append((u, v, w))
    return WeightedDigraph(node_count, tuple(arcs))


def graph_from_json(data: str | dict) -> WeightedDigraph:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "n" not in data:
        raise GraphError("graph JSON needs an 'n' field", "bad_node_count")
    return build_graph(data["n"], data.get("arcs", []))


def load_graph(path) -> WeightedDigraph:
    with open(path) as fh:
        return graph_from_json(json.load(fh))


def check_node(g: WeightedDigraph, *nodes: int) -> None:
    for v in nodes:
        if int(v) != v or not 1 <= v <= g.n:
            raise GraphError(f"node {v!r} outside 1..{g.n}", "index_out_of_range")


def laplacian(g: WeightedDigraph) -> np.ndarray:
    A = g.adjacency()
    return np.diag(A.sum(axis=1)) - A


def hop_distance(g: WeightedDigraph, i: int, j: int) -> float:
    """Number of arcs on a shortest directed path ``i -> j`` (``inf`` if none)."""
    check_node(g, i, j)
    return hop_distances_from(g, i)[j - 1]


def hop_distances_from(g: WeightedDigraph, i: int) -> list[float]:
    dist = [inf] * g.n
    dist[i - 1] = 0
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if dist[v - 1] == inf:
                dist[v - 1] = dist[u - 1] + 1
                queue.append(v)
    return dist


def enumerate_simple_paths(g: WeightedDigraph, i: int, j: int,
                           max_count: int = DEFAULT_PATH_CAP) -> list[Path]:
    """All simple directed paths ``i -> j`` in lexicographic vertex order."""
    check_node(g, i, j)
    if i == j:
        return [Path((i,))]
    found = []
    stack = [i]
    on_path = {i}

    def dfs(u):
        for v in g.successors(u):
            if v in on_path:
                continue
            if v == j:
                if len(found) >= max_count:
                    raise PathCountError(
                        f"more than {max_count} simple paths from {i} to {j}")
                found.append(Path(tuple(stack) + (j,)))
                continue
            stack.append(v)
            on_path.add(v)
            dfs(v)
            stack.pop()
            on_path.discard(v)

    dfs(i)
    return found


def path_weight(g: WeightedDigraph, path: Path) -> float:
    for u, v in path.arcs:
        if not g.has_arc(u, v):
            raise GraphError(f"arc {u}->{v} not in graph", "index_out_of_range")
    return prod(g.weight(u, v) for u, v in path.arcs)


def iter_out_forests(g: WeightedDigraph, k: int | None = None,
                     cap: int | None = None) -> Iterator[OutForest]:
    """Yield spanning out-forests (all sizes, or only those with ``k`` arcs).

    Each vertex independently picks one in-arc or none; assignments that close
    a directed cycle are pruned as soon as the cycle's last vertex is decided.
    """
    cap = enumeration_cap(cap)
    if g.n > cap:
        raise EnumerationCapError(
            f"graph has {g.n} nodes, forest enumeration capped at {cap}")
    n = g.n
    if k is not None and not 0 <= k <= n - 1:
        return
    preds = [g.predecessors(v) for v in range(1, n + 1)]
    parent = [0] * (n + 1)

    def closes_cycle(v, u):
        while u:
            if u == v:
                return True
            u = parent[u]
        return False

    def rec(v, used):
        if v > n:
            if k is None or used == k:
                yield OutForest(n, tuple((x, parent[x]) for x in range(1, n + 1)
                                         if parent[x]))
            return
        left = n - v  # undecided vertices after v
        if k is None or used + left >= k:
            yield from rec(v + 1, used)
        if k is not None and used >= k:
            return
        for u in preds[v - 1]:
            if closes_cycle(v, u):
                continue
            parent[v] = u
            yield from rec(v + 1, used + 1)
            parent[v] = 0

    yield from rec(1, 0)


def enumerate_out_forests(g: WeightedDigraph, k: int,
                          cap: int | None = None) -> list[OutForest]:
    return list(iter_out_forests(g, k, cap))


def forest_set_weight(g: WeightedDigraph, k: int, root: int, contains: int,
                      cap: int | None = None) -> float:
    """Total weight of the k-arc spanning out-forests in which ``contains``
    belongs to the tree diverging from ``root``."""
    return sum(f.weight(g) for f in iter_out_forests(g, k, cap)
               if f.contains(root, contains))


def reduced_laplacian(g: WeightedDigraph, removed_vertices: Iterable[int]) -> np.ndarray:
    """Principal submatrix of L with the given vertices' rows/columns deleted."""
    removed = set(removed_vertices)
    if not removed or any(not 1 <= v <= g.n for v in removed):
        raise GraphError(f"invalid vertex set {sorted(removed)}", "bad_vertex_set")
    if len(removed) == g.n:
        raise GraphError("cannot remove every vertex", "bad_vertex_set")
    keep = [v - 1 for v in g.nodes if v not in removed]
    return laplacian(g)[np.ix_(keep, keep)]
