import networkx as nx
import pytest
from networkx.algorithms import isomorphism

from qga.canonical import canonical_quiver_key
from qga.catalog import EXCEPTIONAL, REFERENCE_TABLE, figure5, named, names, parse_catalog
from qga.genus import is_planar
from qga.quiver import QuiverError, underlying_graph
from qga.mutation_class import enumerate_class


def nxgraph(name):
    return nx.Graph(list(underlying_graph(named(name).quiver).edges))


class TestEntries:
    def test_all_exceptional_present(self):
        for name in EXCEPTIONAL:
            assert name in names()
        assert set(REFERENCE_TABLE) == set(EXCEPTIONAL)

    @pytest.mark.parametrize("name,n", [("E6", 6), ("E7", 7), ("E8", 8), ("E6(1)", 7), ("E7(1)", 8), ("E8(1)", 9),
                                        ("E6(1,1)", 8), ("E7(1,1)", 9), ("E8(1,1)", 10), ("X6", 6), ("X7", 7)])
    def test_ranks(self, name, n):
        assert named(name).quiver.n == n

    @pytest.mark.parametrize("name", ["E6", "E7", "E8", "E8(1)"])
    def test_full_subgraph_of_e8_elliptic(self, name):
        big = nxgraph("E8(1,1)")
        assert isomorphism.GraphMatcher(big, nxgraph(name)).subgraph_is_isomorphic()

    def test_doubled_arrows(self):
        assert named("X6").quiver.max_entry() == 2
        assert named("X7").quiver.max_entry() == 2
        assert named("E8(1,1)").quiver.max_entry() == 2

    def test_unknown(self):
        with pytest.raises(KeyError):
            named("E9")

    def test_parse_errors(self):
        with pytest.raises(QuiverError):
            parse_catalog("name A\nquiver 2\n1 2 1\n")
        with pytest.raises(QuiverError):
            parse_catalog("name A\nlabels a\nquiver 2\n1 2 1\nend\n")


class TestFigure5:
    def test_distinct_and_non_planar(self):
        quivers = [figure5(i).quiver for i in range(1, 5)]
        assert len({canonical_quiver_key(q) for q in quivers}) == 4
        assert not any(is_planar(underlying_graph(q)) for q in quivers)

    def test_members_of_their_classes(self):
        x6 = enumerate_class(named("X6").quiver)
        for i in (1, 2, 3):
            assert canonical_quiver_key(figure5(i).quiver) in x6.members
        x7 = enumerate_class(named("X7").quiver)
        assert canonical_quiver_key(figure5(4).quiver) in x7.members

    def test_other_members_planar(self):
        special = {canonical_quiver_key(figure5(i).quiver) for i in range(1, 5)}
        for name in ("X6", "X7"):
            report = enumerate_class(named(name).quiver)
            for key, q in report.members.items():
                assert is_planar(underlying_graph(q)) == (key not in special)

    def test_named_access(self):
        assert named("Fig5-2").quiver == figure5(2).quiver

    def test_index_range(self):
        with pytest.raises(ValueError):
            figure5(5)

    def test_label_lookup(self):
        assert named("X6").vertex("x4") >= 1
        with pytest.raises(KeyError):
            named("E6").vertex("x4")
