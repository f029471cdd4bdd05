import itertools
import random

import pytest

from qga.genus import (
    InvalidRotation,
    RotationSystem,
    best_rotation,
    check_rotation,
    embedding_genus,
    genus_lower_bound,
    girth,
    is_planar,
    min_genus,
    trace_faces,
)
from qga.quiver import SimpleGraph

from oracles import exhaustive_genus, random_connected_graph


def complete(n):
    return SimpleGraph.from_edges(n, itertools.combinations(range(n), 2))


def bipartite(a, b):
    return SimpleGraph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


class TestFaces:
    def test_planar_square(self):
        g = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        rot = RotationSystem.of([(1, 3), (2, 0), (3, 1), (0, 2)])
        assert trace_faces(g, rot) == 2
        assert embedding_genus(4, 4, 2) == 0

    def test_k4_embeddings(self):
        g = complete(4)
        planar = RotationSystem.of([(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)])
        assert trace_faces(g, planar) == 4

    def test_invalid_rotation(self):
        g = complete(3)
        with pytest.raises(InvalidRotation):
            check_rotation(g, RotationSystem.of([(1,), (0, 2), (0, 1)]))


class TestBounds:
    def test_girth(self):
        assert girth(complete(4)) == 3
        assert girth(bipartite(3, 3)) == 4
        assert girth(SimpleGraph.from_edges(3, [(0, 1), (1, 2)])) == float("inf")

    def test_euler_lower_bound(self):
        assert genus_lower_bound(complete(7)) == 1
        assert genus_lower_bound(complete(8)) == 2
        assert genus_lower_bound(bipartite(4, 4)) == 1


class TestPlanarity:
    @pytest.mark.parametrize("g,planar", [
        (complete(4), True), (complete(5), False), (bipartite(3, 3), False),
        (bipartite(2, 5), True), (SimpleGraph(0, frozenset()), True),
    ])
    def test_small(self, g, planar):
        assert is_planar(g) == planar


class TestMinGenus:
    @pytest.mark.parametrize("g,genus", [
        (complete(4), 0), (complete(5), 1), (complete(6), 1), (complete(7), 1), (complete(8), 2),
        (bipartite(3, 3), 1), (bipartite(4, 4), 1), (bipartite(3, 6), 1),
    ])
    def test_known_values(self, g, genus):
        res = min_genus(g, budget=60)
        assert res.exact and res.genus == genus

    def test_disjoint_union_adds(self):
        res = min_genus(complete(5).disjoint_union(bipartite(3, 3)), budget=30)
        assert res.exact and res.genus == 2

    def test_one_vertex_join_adds(self):
        k5 = complete(5)
        edges = list(k5.edges) + [(u + 4, v + 4) for u, v in k5.edges]
        res = min_genus(SimpleGraph.from_edges(9, edges), budget=30)
        assert res.genus == 2

    def test_bounded_result_is_honest(self):
        res = min_genus(complete(9), budget=0.5)
        assert res.lo <= 3 <= res.hi
        assert res.exact == (res.lo == res.hi)

    def test_faces_consistent(self):
        g = complete(6)
        res = min_genus(g)
        assert embedding_genus(g.n, g.num_edges, res.faces) == res.genus

    def test_oracle_sample(self):
        rng = random.Random(21)
        for _ in range(40):
            n, edges = random_connected_graph(rng, max_edges=9, max_vertices=7)
            assert min_genus(SimpleGraph.from_edges(n, edges)).genus == exhaustive_genus(n, edges)


class TestBestRotation:
    def test_returns_genuine_embedding(self):
        g = complete(6)
        rot = best_rotation(g, 1, budget=20)
        check_rotation(g, rot)
        assert embedding_genus(g.n, g.num_edges, trace_faces(g, rot)) <= 1

    def test_impossible_target(self):
        assert best_rotation(complete(5), 0, budget=2) is None


class TestOracleSanity:
    def test_exhaustive_known_values(self):
        assert exhaustive_genus(5, list(complete(5).edges)) == 1
        assert exhaustive_genus(6, list(bipartite(3, 3).edges)) == 1
        assert exhaustive_genus(4, list(complete(4).edges)) == 0
