"""Property tests for the documented invariants."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qga.canonical import canonical_graph_key, canonical_quiver_key
from qga.genus import genus_lower_bound, is_planar, min_genus
from qga.mutation_class import enumerate_class
from qga.quiver import (
    ExchangeMatrix,
    Quiver,
    SimpleGraph,
    dumps_quiver,
    loads_quiver,
    matrix_mutate,
    mutate_sequence,
    quiver_mutate,
    underlying_graph,
)
from qga.surface import flip, flippable, generated_family, signed_adjacency, topology

from oracles import exhaustive_genus, mutate_entries

FAMILY = list(generated_family())


@st.composite
def skew_matrices(draw, max_n=7, bound=3):
    n = draw(st.integers(1, max_n))
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(-bound, bound))
            b[i, j], b[j, i] = v, -v
    return b


@st.composite
def matrix_and_vertex(draw):
    b = draw(skew_matrices())
    return b, draw(st.integers(1, b.shape[0]))


@st.composite
def graphs(draw, max_n=8, max_edges=11):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=max_edges, unique=True)) if pairs else []
    return SimpleGraph.from_edges(n, edges)


class TestMutationProperties:
    @given(matrix_and_vertex())
    def test_involution(self, bk):
        b, k = bk
        m = ExchangeMatrix(b)
        assert matrix_mutate(matrix_mutate(m, k), k) == m

    @given(matrix_and_vertex())
    def test_quiver_rule_equals_formula(self, bk):
        b, k = bk
        assert np.array_equal(quiver_mutate(Quiver(b), k).b, matrix_mutate(ExchangeMatrix(b), k).entries)
        assert matrix_mutate(ExchangeMatrix(b), k).tolist() == mutate_entries(b.tolist(), k - 1)

    @given(matrix_and_vertex())
    def test_skew_symmetry_preserved(self, bk):
        b, k = bk
        e = matrix_mutate(ExchangeMatrix(b), k).entries
        assert np.array_equal(e, -e.T)

    @given(skew_matrices())
    def test_text_round_trip(self, b):
        q = Quiver(b)
        assert loads_quiver(dumps_quiver(q)) == q


class TestCanonicalProperties:
    @given(skew_matrices(), st.randoms(use_true_random=False))
    def test_relabel_invariance(self, b, rnd):
        perm = list(range(b.shape[0]))
        rnd.shuffle(perm)
        q = Quiver(b)
        assert canonical_quiver_key(q.relabel(perm)) == canonical_quiver_key(q)
        g = underlying_graph(q)
        assert canonical_graph_key(g.relabel(perm)) == canonical_graph_key(g)

    @given(skew_matrices())
    def test_opposite_identification(self, b):
        q = Quiver(b)
        assert canonical_quiver_key(q, True) == canonical_quiver_key(q.opposite(), True)


class TestGenusProperties:
    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_matches_exhaustive(self, g):
        res = min_genus(g)
        assert res.exact and res.genus == exhaustive_genus(g.n, sorted(g.edges))

    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_bounds_and_planarity(self, g):
        res = min_genus(g)
        assert genus_lower_bound(g) <= res.lo <= res.hi
        assert (res.genus == 0) == is_planar(g)

    @settings(max_examples=30, deadline=None)
    @given(graphs(max_n=6, max_edges=8), graphs(max_n=6, max_edges=8))
    def test_disjoint_union_additive(self, a, b):
        assert min_genus(a.disjoint_union(b)).genus == min_genus(a).genus + min_genus(b).genus

    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_face_count_consistent(self, g):
        res = min_genus(g)
        comps = len({frozenset(c) for c in _components(g)})
        assert 2 * comps - g.n + g.num_edges - res.faces == 2 * res.genus


def _components(g):
    from qga.genus import connected_components
    return connected_components(g)


class TestSurfaceProperties:
    @settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.sampled_from(FAMILY), st.lists(st.floats(0, 0.999), min_size=1, max_size=15))
    def test_flip_walk(self, named_tri, draws):
        _, tri = named_tri
        sig = tri.signature
        for u in draws:
            arcs = [k for k in tri.arcs if flippable(tri, k)]
            k = arcs[int(u * len(arcs))]
            new = flip(tri, k)
            assert signed_adjacency(new) == matrix_mutate(signed_adjacency(tri), k)
            tri = new
        top = topology(tri)
        assert (top.genus, top.punctures, top.boundary_components, top.boundary_points) == (sig.g, sig.p, sig.b, sig.c)
        assert set(np.unique(signed_adjacency(tri).entries)) <= {-2, -1, 0, 1, 2}


class TestClassProperties:
    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.integers(1, 5), max_size=8))
    def test_class_independent_of_seed(self, seq):
        d5 = Quiver.from_arrows(5, [(1, 2), (2, 3), (3, 4), (3, 5)])
        assert enumerate_class(mutate_sequence(d5, seq)).keys() == enumerate_class(d5).keys()
