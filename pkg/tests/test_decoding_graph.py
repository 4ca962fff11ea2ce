import math
import random
from itertools import product

import numpy as np
import pytest

from conftest import random_graph_like
from oracles import floyd_warshall

from hypersplit.decoding_graph import (
    DecodingGraph,
    build_decoding_graph,
    build_distance_graph,
    connected_components,
    fault_weight,
)
from hypersplit.errors import ModelError, NoPathError, NotGraphLikeError
from hypersplit.fault_model import Fault, FaultModel, disjoint_union
from hypersplit.generators import gen_repetition, gen_three_check
from hypersplit.matching import ABSENT


def test_repetition_graph(rep4):
    g = build_decoding_graph(rep4)
    assert g.vertex_count == 4 and g.component_count == 1
    assert len(g.edges) == 4
    for e in g.edges:
        assert e.weight == pytest.approx(2.197225, abs=1e-6)
    assert g.edges[0].v == g.boundary_of(0)


def test_half_probability_gives_zero_weight():
    g = DecodingGraph(FaultModel(1, 0, (Fault(0.5, {0}),)))
    assert g.vertex_count == 2 and g.edges[0].weight == 0.0


def test_rejects_three_fault():
    with pytest.raises(NotGraphLikeError) as info:
        DecodingGraph(gen_three_check(2))
    assert info.value.fault_id == 0


def test_weight_monotone():
    ps = [0.01, 0.05, 0.1, 0.3, 0.5]
    ws = [fault_weight(p) for p in ps]
    assert all(a > b for a, b in zip(ws, ws[1:]))


def test_components():
    assert connected_components(gen_repetition(4, 0.1)) == [0, 0, 0]
    u = disjoint_union(gen_repetition(4, 0.1), gen_repetition(3, 0.1))
    g = DecodingGraph(u)
    assert g.component_count == 2 and g.vertex_count == 5 + 2
    assert connected_components(FaultModel(0, 0, ())) == []
    assert DecodingGraph(FaultModel(0, 0, ())).component_count == 0


def test_component_labels_follow_lowest_check():
    m = FaultModel(4, 0, (Fault(0.1, {1, 3}), Fault(0.1, {0, 2})))
    assert connected_components(m) == [0, 1, 0, 1]


def test_edge_fault_bijection():
    m = random_graph_like(4, 8, 20)
    g = DecodingGraph(m)
    assert len(g.edges) == len(m)
    for e, f in zip(g.edges, m.faults):
        ends = {x for x in (e.u, e.v) if not g.is_boundary(x)}
        assert ends == f.checks


def test_shortest_path_trivial(rep4):
    g = DecodingGraph(rep4)
    assert g.shortest_path(1, 1) == (0.0, [])


def test_shortest_path_tie_break(rep4):
    g = DecodingGraph(rep4)
    w, path = g.shortest_path(0, 2)
    assert path == [1, 2]
    assert w == pytest.approx(2 * math.log(9))


def test_shortest_path_single_edge():
    g = DecodingGraph(FaultModel(2, 0, (Fault(0.2, {0, 1}),)))
    assert g.shortest_path(0, 1)[1] == [0]


def test_no_path_across_components():
    g = DecodingGraph(disjoint_union(gen_repetition(3, 0.1), gen_repetition(3, 0.1)))
    with pytest.raises(NoPathError):
        g.shortest_path(0, 2)


def test_unknown_syndrome_check(rep4):
    with pytest.raises(ModelError):
        DecodingGraph(rep4).check_syndrome([5])


@pytest.mark.parametrize("seed", range(6))
def test_distances_match_floyd_warshall(seed):
    m = random_graph_like(seed, 16, 30)
    g = DecodingGraph(m)
    ref = floyd_warshall(g.vertex_count, [(e.u, e.v, e.weight) for e in g.edges])
    for u in range(g.vertex_count):
        for v in range(g.vertex_count):
            if math.isinf(ref[u, v]):
                with pytest.raises(NoPathError):
                    g.shortest_path(u, v)
                continue
            w, path = g.shortest_path(u, v)
            assert w == pytest.approx(ref[u, v], rel=1e-12, abs=1e-12)
            assert math.fsum(g.edges[e].weight for e in path) == pytest.approx(w, rel=1e-12)
            # the path is a walk from u to v
            x = u
            for eid in path:
                x = g.edges[eid].other(x)
            assert x == v
            assert g.shortest_path(v, u)[0] == pytest.approx(w, rel=1e-12)


def test_distance_graph_structure():
    m = disjoint_union(gen_repetition(4, 0.1), gen_repetition(4, 0.2))
    g = DecodingGraph(m)
    dg = build_distance_graph(g, [0, 2, 3, 5])
    w = dg.instance.weights
    assert w[0, 1] != ABSENT and w[2, 3] != ABSENT
    assert w[0, 2] == ABSENT and w[1, 3] == ABSENT
    assert dg.path(1, 0) == dg.path(0, 1)[::-1]


def test_distance_graph_triangle_inequality():
    m = random_graph_like(9, 20, 40)
    g = DecodingGraph(m)
    vs = list(range(g.vertex_count))
    w = build_distance_graph(g, vs).instance.weights
    rng = random.Random(0)
    for _ in range(500):
        a, b, c = rng.sample(vs, 3)
        if np.isfinite(w[a, b]) and np.isfinite(w[b, c]):
            assert w[a, c] <= w[a, b] + w[b, c] + 1e-9


def test_memo_is_complete_and_reused(rep4):
    g = DecodingGraph(rep4)
    first = g.shortest_path(0, 2)
    assert 0 in g._memo
    dist, pred = g._memo[0]
    assert all(not math.isinf(d) for d in dist)
    assert g.shortest_path(0, 2) == first


def test_parallel_edges_kept():
    m = FaultModel(2, 0, (Fault(0.1, {0, 1}), Fault(0.2, {0, 1}), Fault(0.1, {0})))
    g = DecodingGraph(m)
    assert len(g.adjacency[0]) == 3
    assert g.shortest_path(0, 1)[1] == [1]


def test_concurrent_readers_agree():
    from concurrent.futures import ThreadPoolExecutor
    m = random_graph_like(21, 30, 60)
    g = DecodingGraph(m)
    pairs = list(product(range(g.check_count), repeat=2))

    def dist(pair):
        try:
            return g.shortest_path(*pair)
        except NoPathError:
            return None

    with ThreadPoolExecutor(8) as pool:
        par = list(pool.map(dist, pairs))
    fresh = DecodingGraph(m)
    seq = []
    for p in pairs:
        try:
            seq.append(fresh.shortest_path(*p))
        except NoPathError:
            seq.append(None)
    assert par == seq
