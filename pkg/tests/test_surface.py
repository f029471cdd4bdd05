import random

import numpy as np
import pytest

from qga.surface import (
    SurfaceError,
    SurfaceSignature,
    Triangulation,
    arc_count,
    closed_surface,
    dumps_triangulation,
    flip,
    flippable,
    four_punctured_sphere,
    generated_family,
    loads_triangulation,
    pi,
    polygon,
    punctured_polygon,
    punctured_torus,
    read_triangulation,
    signed_adjacency,
    topology,
    torus,
    validate_triangulation,
    write_triangulation,
)
from qga.quiver import matrix_mutate


class TestSignature:
    @pytest.mark.parametrize("sig,n", [((1, 0, 1, 0), 3), ((0, 0, 4, 0), 6), ((0, 1, 0, 7), 4),
                                       ((1, 0, 3, 0), 9), ((2, 0, 1, 0), 9)])
    def test_arc_count(self, sig, n):
        assert arc_count(SurfaceSignature(*sig)) == n

    @pytest.mark.parametrize("sig", [(0, 0, 2, 0), (0, 1, 0, 3), (0, 0, 1, 0)])
    def test_no_triangulation_in_scope(self, sig):
        with pytest.raises(SurfaceError, match="no triangulation"):
            arc_count(SurfaceSignature(*sig))

    def test_invalid_signature(self):
        with pytest.raises(SurfaceError):
            SurfaceSignature(0, 0, 2, 3)


class TestGenerated:
    def test_family_valid(self):
        for name, tri in generated_family():
            assert validate_triangulation(tri) is None, name

    @pytest.mark.parametrize("g,p", [(0, 3), (0, 4), (1, 1), (1, 3), (2, 2)])
    def test_closed(self, g, p):
        top = topology(closed_surface(g, p))
        assert (top.genus, top.punctures, top.boundary_components) == (g, p, 0)

    def test_punctured_disc(self):
        tri = punctured_polygon(5, 2)
        assert (tri.signature.p, tri.signature.c, tri.n) == (2, 5, 8)


class TestSignedAdjacency:
    def test_markov(self):
        assert signed_adjacency(punctured_torus()).tolist() == [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]

    def test_polygon_is_type_a(self):
        b = signed_adjacency(polygon(6)).entries
        assert np.abs(b).sum() == 2 * 2

    def test_self_folded_uses_pi(self):
        tri = four_punctured_sphere()
        folded = tri.folded_pairs()
        assert folded
        for inner, outer in folded.items():
            assert pi(tri, inner) == outer
        # a folded arc and its outer arc have the same row outside the pair
        b = signed_adjacency(tri).entries
        for inner, outer in folded.items():
            others = [j for j in range(tri.n) if j not in (inner - 1, outer - 1)]
            assert np.array_equal(b[inner - 1, others], b[outer - 1, others])
            assert b[inner - 1, outer - 1] == 0

    def test_entry_range_over_walks(self):
        rng = random.Random(1)
        for _, tri in generated_family():
            for _ in range(30):
                tri = flip(tri, rng.choice([k for k in tri.arcs if flippable(tri, k)]))
                assert set(np.unique(signed_adjacency(tri).entries)) <= {-2, -1, 0, 1, 2}


class TestFlip:
    def test_double_flip_restores(self):
        tri = torus(2)
        for k in tri.arcs:
            assert flip(flip(tri, k), k).normal_form() == tri.normal_form()

    def test_commutes_with_mutation(self):
        tri = closed_surface(1, 2)
        rng = random.Random(2)
        for _ in range(100):
            k = rng.choice([k for k in tri.arcs if flippable(tri, k)])
            new = flip(tri, k)
            assert signed_adjacency(new) == matrix_mutate(signed_adjacency(tri), k)
            tri = new

    def test_folded_arc_not_flippable(self):
        tri = four_punctured_sphere()
        inner = next(iter(tri.folded_pairs()))
        assert not flippable(tri, inner)
        with pytest.raises(SurfaceError, match="folded"):
            flip(tri, inner)

    def test_boundary_not_flippable(self):
        tri = polygon(5)
        with pytest.raises(SurfaceError):
            flip(tri, tri.n + 1)


class TestValidation:
    def test_arc_count_mismatch(self):
        tri = Triangulation(SurfaceSignature(1, 0, 1, 0), 2, ((1, 2, 2),))
        assert "arc count mismatch" in validate_triangulation(tri)

    def test_arc_used_three_times(self):
        tri = Triangulation(SurfaceSignature(1, 0, 1, 0), 3, ((1, 2, 3), (1, 1, 2)))
        assert validate_triangulation(tri) is not None

    def test_wrong_topology(self):
        # six arcs on a sphere with four punctures, declared as a twice-punctured torus
        tri = Triangulation(SurfaceSignature(1, 0, 2, 0), 6, four_punctured_sphere().triangles)
        assert validate_triangulation(tri) is not None


class TestTextFormat:
    def test_round_trip(self, tmp_path):
        for _, tri in generated_family():
            back = loads_triangulation(dumps_triangulation(tri))
            assert back.normal_form() == tri.normal_form() and back.signature == tri.signature
        path = tmp_path / "t.tri"
        write_triangulation(torus(3), path)
        assert read_triangulation(path).normal_form() == torus(3).normal_form()

    def test_malformed(self):
        with pytest.raises(SurfaceError):
            loads_triangulation("surface 1 0 1\narcs 3\n")
