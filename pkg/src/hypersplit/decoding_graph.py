"""Decoding graph of a graph-like fault model and its distance graphs.

Vertices ``0..check_count-1`` are checks; vertex ``check_count + k`` is the
boundary vertex of connected component ``k``. Edge ``i`` is fault ``i`` of
the model, so edge ids and fault ids coincide.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from hypersplit.errors import ModelError, NoPathError, NotGraphLikeError
from hypersplit.fault_model import FaultModel
from hypersplit.matching import ABSENT, MatchingInstance

# Relative tolerance under which two path lengths count as a tie.
TIE_RTOL = 1e-12


def fault_weight(p: float) -> float:
    """Edge weight ``-log(p / (1 - p))``; zero at p = 0.5."""
    return math.log((1.0 - p) / p)


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: float
    fault: int

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


def connected_components(model: FaultModel) -> list[int]:
    """Component label of every check, joined by the model's 2-faults.

    Labels are numbered in order of each component's lowest check index,
    which is also its representative.
    """
    parent = list(range(model.check_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in model.faults:
        if f.weight == 2:
            a, b = sorted(f.checks)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    labels: dict[int, int] = {}
    out = []
    for c in range(model.check_count):
        out.append(labels.setdefault(find(c), len(labels)))
    return out


class DecodingGraph:
    """Weighted multigraph with one edge per fault of a graph-like model.

    Single-source shortest paths are computed on demand and memoized per
    source. A memo entry is stored only once complete, so concurrent
    readers never see a partial result.
    """

    def __init__(self, model: FaultModel):
        for i, f in enumerate(model.faults):
            if f.weight > 2:
                raise NotGraphLikeError(i, f.weight)
        self.model = model
        self.check_count = model.check_count
        self.component = connected_components(model)
        self.component_count = max(self.component, default=-1) + 1
        self.vertex_count = self.check_count + self.component_count
        edges = []
        for i, f in enumerate(model.faults):
            cs = sorted(f.checks)
            u = cs[0]
            v = cs[1] if len(cs) == 2 else self.boundary_of(u)
            edges.append(Edge(u, v, fault_weight(f.probability), i))
        self.edges: tuple[Edge, ...] = tuple(edges)
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for e in edges:
            adj[e.u].append(e.fault)
            adj[e.v].append(e.fault)
        self.adjacency = tuple(tuple(a) for a in adj)
        self._memo: dict[int, tuple[list[float], list[int]]] = {}

    def boundary_of(self, check: int) -> int:
        """Boundary vertex of the component containing ``check``."""
        return self.check_count + self.component[check]

    def component_of(self, vertex: int) -> int:
        if vertex < self.check_count:
            return self.component[vertex]
        return vertex - self.check_count

    def is_boundary(self, vertex: int) -> bool:
        return vertex >= self.check_count

    def has_boundary_edge(self, component: int) -> bool:
        return bool(self.adjacency[self.check_count + component])

    def check_syndrome(self, syndrome: Iterable[int]) -> frozenset[int]:
        s = frozenset(syndrome)
        bad = [c for c in s if not 0 <= c < self.check_count]
        if bad:
            raise ModelError(f"syndrome refers to unknown check(s) {sorted(bad)}")
        return s

    def _dijkstra(self, source: int) -> tuple[list[float], list[int]]:
        memo = self._memo.get(source)
        if memo is not None:
            return memo
        n = self.vertex_count
        dist = [math.inf] * n
        pred = [-1] * n
        done = [False] * n
        dist[source] = 0.0
        heap = [(0.0, source)]
        edges = self.edges
        while heap:
            d, x = heapq.heappop(heap)
            if done[x]:
                continue
            done[x] = True
            for eid in self.adjacency[x]:
                e = edges[eid]
                y = e.other(x)
                if done[y]:
                    continue
                nd = d + e.weight
                tol = TIE_RTOL * max(1.0, abs(nd))
                if nd < dist[y] - tol:
                    dist[y] = nd
                    pred[y] = eid
                    heapq.heappush(heap, (nd, y))
                elif nd <= dist[y] + tol and eid < pred[y]:
                    pred[y] = eid
        result = (dist, pred)
        self._memo[source] = result
        return result

    def distance(self, u: int, v: int) -> float:
        return self._dijkstra(u)[0][v]

    def shortest_path(self, u: int, v: int) -> tuple[float, list[int]]:
        """Minimum-weight path from ``u`` to ``v`` as a list of edge ids.

        Among equal-weight paths, each vertex is entered through its
        lowest-id tight edge, so the result is deterministic.

        Raises
        ------
        NoPathError
            If ``u`` and ``v`` lie in different components.
        """
        dist, pred = self._dijkstra(u)
        if dist[v] == math.inf:
            raise NoPathError(f"no path between vertices {u} and {v}")
        path = []
        x = v
        while x != u:
            eid = pred[x]
            path.append(eid)
            x = self.edges[eid].other(x)
        path.reverse()
        return dist[v], path


@dataclass
class DistanceGraph:
    """Complete-per-component graph on a vertex subset of a decoding graph."""

    vertices: list[int]
    instance: MatchingInstance
    paths: dict[tuple[int, int], list[int]] = field(repr=False)

    def path(self, a: int, b: int) -> list[int]:
        """Stored shortest path between the a-th and b-th vertices."""
        return self.paths[(a, b)] if a < b else self.paths[(b, a)][::-1]


def build_decoding_graph(model: FaultModel) -> DecodingGraph:
    return DecodingGraph(model)


def build_distance_graph(graph: DecodingGraph, vertices: Iterable[int]) -> DistanceGraph:
    """Pairwise shortest-path distances between ``vertices``.

    Pairs in different components get no edge (``ABSENT`` weight), as do
    pairs involving the isolated boundary vertex of a component without
    1-faults.
    """
    vs = list(vertices)
    n = len(vs)
    w = np.full((n, n), ABSENT)
    paths = {}
    for a in range(n):
        for b in range(a + 1, n):
            if graph.component_of(vs[a]) != graph.component_of(vs[b]):
                continue
            try:
                d, p = graph.shortest_path(vs[a], vs[b])
            except NoPathError:  # isolated boundary vertex
                continue
            w[a, b] = w[b, a] = d
            paths[(a, b)] = p
    return DistanceGraph(vs, MatchingInstance(w), paths)
