import itertools
import json
import random

import pytest

from mixedwalk.graph import (Disconnected, DuplicatePair, GraphError, MixedGraph, Orientation, SelfLoop,
                             TooFewVertices, VertexOutOfRange, build, complete, complete_bipartite,
                             complete_multipartite, cycle, graph_from_dict, hamming, load_graph, path,
                             random_connected, random_regular, save_graph, triangle_count)


def test_arc_counts():
    assert len(cycle(3).arcs) == 6
    assert len(path(2).arcs) == 2
    assert len(complete(4, [1, 2, 0, 1, 1, 2]).arcs) == 12


def test_arc_order_is_deterministic():
    g = cycle(3)
    assert [(a.origin, a.terminus) for a in g.arcs] == [(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)]
    assert g.arcs == cycle(3).arcs


def test_arc_reversal():
    g = complete(4, [1, 2, 0, 1, 1, 2])
    arcs = g.arcs
    for i, a in enumerate(arcs):
        j = arcs.reverse_index[i]
        assert arcs[j] == a.reverse()
        assert arcs.reverse_index[j] == i
        assert a.sign == -arcs[j].sign


def test_arc_signs_follow_orientation():
    g = build(3, [(0, 1, "forward"), (1, 2, 0), (0, 2, Orientation.BACKWARD)])
    assert g.arc_sign(0, 1) == 1 and g.arc_sign(1, 0) == -1
    assert g.arc_sign(1, 2) == 0
    assert g.arc_sign(2, 0) == 1
    assert not g.is_undirected
    assert g.underlying().is_undirected


def test_degrees():
    assert cycle(3).degree(1) == 2
    assert complete(4, [1] * 6).is_regular() == 3
    assert path(3).is_regular() is None
    with pytest.raises(VertexOutOfRange):
        cycle(3).degree(3)


def test_handshaking():
    rng = random.Random(3)
    for _ in range(30):
        g = random_connected(rng.randint(2, 9), rng)
        assert sum(g.degrees) == 2 * g.m


@pytest.mark.parametrize("exc,n,edges", [
    (SelfLoop, 3, [(0, 0, 0), (0, 1, 0), (1, 2, 0)]),
    (DuplicatePair, 3, [(0, 1, 0), (1, 0, 1), (1, 2, 0)]),
    (Disconnected, 4, [(0, 1, 0), (2, 3, 0)]),
    (TooFewVertices, 1, []),
    (VertexOutOfRange, 3, [(0, 3, 0)]),
])
def test_invalid(exc, n, edges):
    with pytest.raises(exc):
        MixedGraph(n, edges)


def test_unknown_orientation():
    with pytest.raises(GraphError):
        build(2, [(0, 1, "sideways")])


def _triangles_brute(g):
    adj = {frozenset((u, v)) for u, v, _ in g.edges}
    return sum(1 for a, b, c in itertools.combinations(range(g.n), 3)
               if {frozenset((a, b)), frozenset((b, c)), frozenset((a, c))} <= adj)


def test_triangle_oracle():
    rng = random.Random(11)
    for _ in range(60):
        g = random_connected(rng.randint(2, 8), rng, edge_prob=rng.random())
        assert triangle_count(g) == _triangles_brute(g)


def test_families():
    assert triangle_count(complete(4)) == 4
    k33 = complete_bipartite(3, 3)
    assert (k33.n, k33.m, k33.is_regular(), triangle_count(k33)) == (6, 9, 3, 0)
    k222 = complete_multipartite(2, 2, 2)
    assert (k222.n, k222.is_regular(), triangle_count(k222)) == (6, 4, 8)
    h42 = hamming(4, 2)
    assert (h42.n, h42.is_regular(), triangle_count(h42)) == (16, 4, 0)
    h33 = hamming(3, 3)
    assert (h33.n, h33.m, h33.is_regular(), triangle_count(h33)) == (27, 81, 6, 27)


def test_random_regular():
    rng = random.Random(0)
    g = random_regular(7, 4, rng)
    assert g.is_regular() == 4 and g.n == 7


def test_json_roundtrip(tmp_path):
    g = build(4, [(0, 1, 1), (1, 2, 0), (2, 3, 2), (3, 0, 1)])
    p = tmp_path / "g.json"
    save_graph(g, p)
    h = load_graph(p)
    assert h.n == g.n
    # a backward edge may be rewritten as a forward edge the other way round
    assert all(h.arc_sign(u, v) == g.arc_sign(u, v) for u, v, _ in g.edges)


def test_json_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 3,\n "arcs": [\n')
    with pytest.raises(GraphError, match=":3:"):
        load_graph(p)
    with pytest.raises(GraphError):
        graph_from_dict({"n": 2, "arcs": [{"u": 0, "v": 1, "class": "backward"}]})
    with pytest.raises(GraphError):
        graph_from_dict([1, 2])
    doc = {"n": 2, "arcs": [{"u": 0, "v": 1, "class": "forward"}]}
    assert graph_from_dict(json.loads(json.dumps(doc))).arc_sign(0, 1) == 1
