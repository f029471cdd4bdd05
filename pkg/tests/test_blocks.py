import pytest

from qga.blocks import (
    BlockError,
    OutletMatching,
    block,
    check_matching,
    construct_rn,
    glue,
    parse_blocks,
    realize,
    rn_embeds_as_subdivision,
    rn_literal_subgraph,
    sphere4_gluing,
    standard_blocks,
    tn_construction,
    tn_expected_counts,
    torus_planar_gluing,
    torus_planar_quiver,
)
from qga.canonical import is_isomorphic
from qga.genus import is_planar, min_genus
from qga.quiver import Quiver, underlying_graph
from qga.surface import signed_adjacency, topology, torus, triangulation_quiver


class TestBlockData:
    def test_five_kinds(self):
        assert sorted(standard_blocks()) == ["I", "II", "IIIa", "IIIb", "IV", "V"]

    @pytest.mark.parametrize("kind,n,arrows", [("I", 2, 1), ("II", 3, 3), ("IIIa", 3, 2), ("IIIb", 3, 2),
                                               ("IV", 4, 5), ("V", 5, 8)])
    def test_shapes(self, kind, n, arrows):
        blk = block(kind)
        assert len(blk.vertices) == n
        assert sum(m for _, _, m in blk.arrows) == arrows

    def test_pieces_reproduce_arrows(self):
        for kind, blk in standard_blocks().items():
            tri = realize([blk], OutletMatching(()))
            sub = signed_adjacency(tri).entries[:len(blk.vertices), :len(blk.vertices)]
            assert (sub == blk.matrix()).all(), kind

    def test_unknown_kind(self):
        with pytest.raises(BlockError):
            block("VI")

    def test_piece_disagreeing_with_arrows(self):
        good = "block I\nvertices o1 o2\noutlets o1 o2\narrow o1 o2 1\npiece o1 o2 ~\nend\n"
        assert parse_blocks(good)["I"].arrows == (("o1", "o2", 1),)
        with pytest.raises(BlockError):
            parse_blocks(good.replace("arrow o1 o2", "arrow o2 o1"))


class TestMatching:
    def test_normalized_equality(self):
        a = OutletMatching((((1, "o1"), (0, "o2")),))
        b = OutletMatching((((0, "o2"), (1, "o1")),))
        assert a == b

    def test_errors(self):
        I = block("I")
        assert "not an outlet" in check_matching([block("IIIa"), I], OutletMatching((((0, "l"), (1, "o1")),)))
        assert "twice" in check_matching([I, I, I], OutletMatching((((0, "o1"), (1, "o1")), ((0, "o1"), (2, "o1")))))
        assert "same block" in check_matching([I], OutletMatching((((0, "o1"), (0, "o2")),)))
        assert "out of range" in check_matching([I], OutletMatching((((0, "o1"), (3, "o1")),)))

    def test_two_cycle_cancels(self):
        # two type-I blocks glued into opposite arrows between the same pair
        I = block("I")
        q = glue([I, I], OutletMatching((((0, "o1"), (1, "o2")), ((0, "o2"), (1, "o1")))))
        assert q == Quiver.from_arrows(2, [])

    def test_realized_quiver_matches_glue(self):
        g = torus_planar_gluing(2)
        assert signed_adjacency(g.triangulation()) == _matrix(g.quiver())


def _matrix(q):
    from qga.quiver import matrix_from_quiver
    return matrix_from_quiver(q)


class TestConstructions:
    def test_sphere4(self):
        g = sphere4_gluing()
        assert len(g.blocks) == 4
        assert is_planar(underlying_graph(g.quiver()))

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_torus_matches_triangulation(self, p):
        assert is_isomorphic(torus_planar_quiver(p), triangulation_quiver(torus(p)))

    def test_rn_shape(self):
        for n in (1, 2):
            g = construct_rn(n)
            assert g.n == 4 * n * (n + 1)
            assert all(g.degree(v) in (3, 4) for v in range(g.n))

    def test_r1_genus(self):
        assert min_genus(construct_rn(1), budget=30).genus == 1

    @pytest.mark.parametrize("n", [1, 2])
    def test_tn_counts(self, n):
        tn = tn_construction(n)
        want = tn_expected_counts(n)
        assert tn.counts["II"] == want["II"] and tn.counts["IV"] == want["IV"]
        assert tn.quiver.n == want["vertices"]
        top = topology(tn.triangulation())
        assert (top.genus, top.punctures, top.boundary_components) == (n, want["punctures"], 0)

    @pytest.mark.parametrize("n", [1, 2])
    def test_rn_inside_tn(self, n):
        tn = tn_construction(n)
        assert rn_embeds_as_subdivision(n, tn)
        # rectangle sides run through type-II gadgets, so they are subdivided
        assert not rn_literal_subgraph(n, tn)

    def test_tn_quiver_entries(self):
        assert tn_construction(1).quiver.max_entry() <= 2
