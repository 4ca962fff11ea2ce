"""Minimum-weight perfect matching and Union-Find decoders.

Both decoders take a :class:`~hypersplit.decoding_graph.DecodingGraph` and a
syndrome (set of check indices) and return a :class:`DecodeResult` whose
correction is a set of fault ids of the graph's model.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from hypersplit.decoding_graph import DecodingGraph, build_distance_graph
from hypersplit.errors import HypersplitError, MatchingInfeasibleError, OddComponentError
from hypersplit.fault_model import observables_of
from hypersplit.matching import min_weight_perfect_matching


@dataclass(frozen=True)
class DecodeResult:
    """Output of a decoder.

    ``paths`` lists, for MWPM, each matched pair ``(u, v)`` of augmented
    syndrome vertices with the fault ids of the shortest path joining them.
    For Union-Find it holds the peeled correction edges grouped by cluster
    with ``u == v == cluster root``.
    """

    correction: frozenset[int]
    predicted_observables: frozenset[int]
    augmented_syndrome: tuple[int, ...]
    paths: tuple[tuple[int, int, tuple[int, ...]], ...] = ()
    cluster_count: int = 0
    extra: dict = field(default_factory=dict, compare=False)


def augment_syndrome(graph: DecodingGraph, syndrome: Iterable[int]) -> list[int]:
    """Add the boundary vertex of every component with odd syndrome parity.

    Raises
    ------
    OddComponentError
        If an odd component has no 1-fault edge to its boundary vertex.
    """
    s = graph.check_syndrome(syndrome)
    parity: dict[int, int] = {}
    for c in s:
        k = graph.component[c]
        parity[k] = parity.get(k, 0) ^ 1
    out = sorted(s)
    for k in sorted(parity):
        if parity[k]:
            if not graph.has_boundary_edge(k):
                raise OddComponentError(k)
            out.append(graph.check_count + k)
    return out


def _xor_into(acc: set[int], items: Iterable[int]) -> None:
    for x in items:
        if x in acc:
            acc.remove(x)
        else:
            acc.add(x)


def mwpm_decode(graph: DecodingGraph, syndrome: Iterable[int]) -> DecodeResult:
    """Most likely correction for ``syndrome`` by minimum-weight matching.

    The augmented syndrome is matched in its distance graph and the stored
    shortest path of every matched pair is added (mod 2) to the correction.
    """
    sbar = augment_syndrome(graph, syndrome)
    dg = build_distance_graph(graph, sbar)
    try:
        matching = min_weight_perfect_matching(dg.instance)
    except MatchingInfeasibleError as exc:
        raise HypersplitError(f"internal error: augmented syndrome not matchable ({exc})")
    correction: set[int] = set()
    paths = []
    for a, b in matching.pairs:
        p = dg.path(a, b)
        paths.append((sbar[a], sbar[b], tuple(p)))
        _xor_into(correction, p)
    corr = frozenset(correction)
    return DecodeResult(corr, observables_of(graph.model, corr), tuple(sbar),
                        tuple(paths), extra={"matching_weight": matching.total_weight})


class _Clusters:
    """Union-find over decoding-graph vertices with cluster bookkeeping."""

    def __init__(self, graph: DecodingGraph, marked: set[int]):
        n = graph.vertex_count
        self.parent = list(range(n))
        self.size = [1] * n
        self.parity = [1 if v in marked else 0 for v in range(n)]
        self.boundary = [graph.is_boundary(v) for v in range(n)]
        self.members: list[list[int]] = [[v] for v in range(n)]

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if (self.size[ra], -ra) < (self.size[rb], -rb):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.parity[ra] ^= self.parity[rb]
        self.boundary[ra] = self.boundary[ra] or self.boundary[rb]
        self.members[ra].extend(self.members[rb])
        self.members[rb] = []
        return ra

    def is_odd(self, root: int) -> bool:
        return self.parity[root] == 1 and not self.boundary[root]


def uf_decode(graph: DecodingGraph, syndrome: Iterable[int]) -> DecodeResult:
    """Union-Find decoder: grow odd clusters by half-edges, then peel.

    Returns a correction whose syndrome equals the input; unlike MWPM it is
    not guaranteed to be of minimum weight.
    """
    sbar = augment_syndrome(graph, syndrome)
    marked = set(v for v in sbar if not graph.is_boundary(v))
    clusters = _Clusters(graph, marked)
    support = [0] * len(graph.edges)
    edges = graph.edges

    odd = sorted(v for v in marked if clusters.is_odd(clusters.find(v)))
    while odd:
        fused = []
        grew = False
        for root in odd:
            seen = set()
            for v in clusters.members[root]:
                for eid in graph.adjacency[v]:
                    if support[eid] < 2 and eid not in seen:
                        seen.add(eid)
                        support[eid] += 1
                        grew = True
                        if support[eid] == 2:
                            fused.append(eid)
        if not grew:
            raise HypersplitError("internal error: odd cluster cannot grow")
        for eid in fused:
            clusters.union(edges[eid].u, edges[eid].v)
        odd = sorted({r for r in (clusters.find(v) for v in marked)
                      if clusters.is_odd(r)})

    # Peel a spanning forest of the fully grown edges of each touched cluster.
    roots = sorted({clusters.find(v) for v in marked})
    correction: set[int] = set()
    paths = []
    flips = set(marked)
    for root in roots:
        members = clusters.members[root]
        bverts = [v for v in members if graph.is_boundary(v)]
        start = min(bverts) if bverts else min(members)
        order = [start]
        parent_edge = {start: -1}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for eid in sorted(graph.adjacency[x]):
                if support[eid] < 2:
                    continue
                y = edges[eid].other(x)
                if y in parent_edge:
                    continue
                parent_edge[y] = eid
                order.append(y)
                queue.append(y)
        peeled = []
        for x in reversed(order[1:]):
            if x in flips:
                eid = parent_edge[x]
                peeled.append(eid)
                flips.discard(x)
                y = edges[eid].other(x)
                if graph.is_boundary(y):
                    continue
                if y in flips:
                    flips.discard(y)
                else:
                    flips.add(y)
        if start in flips:
            raise HypersplitError("internal error: peeling left the root unmatched")
        _xor_into(correction, peeled)
        paths.append((start, start, tuple(sorted(peeled))))
    corr = frozenset(correction)
    return DecodeResult(corr, observables_of(graph.model, corr), tuple(sbar),
                        tuple(paths), cluster_count=len(roots))


DECODERS = {"mwpm": mwpm_decode, "uf": uf_decode}


def get_decoder(kind: str):
    try:
        return DECODERS[kind]
    except KeyError:
        raise ValueError(f"unknown decoder {kind!r}; expected one of {sorted(DECODERS)}") from None
