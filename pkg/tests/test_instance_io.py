"""
Tests for the instance file format.
"""

import pytest

from src.components.digraphs import Digraph, Tournament
from src.components.family import FamilyKind, all_nonempty
from src.components.graphs import SimpleGraph
from src.components.relations import BooleanRelation
from src.data.instance_io import (
    as_relation,
    instance_to_text,
    load_instance,
    make_instance,
    parse_instance,
    tournament_to_text,
)
from src.data.sample_instances import one_way_digraph, transitive_tournament
from src.utils.errors import MissingEmptyOrFull, ParseError

ONE_WAY = """\
# one-way digraph
nodes: 5
kind: digraph
arc: 3 2
arc: 3 5
arc: 2 1
arc: 1 4
arc: 4 1
open:
open: 2
open: 5
open: 2 5
open: 1 2 3 4 5
family: all-nonempty
"""


class TestParseInstance:
    """Test parsing well-formed instance text."""

    def setup_method(self):
        self.instance = parse_instance(ONE_WAY, name="one-way")

    def test_header(self):
        assert self.instance.n == 5
        assert self.instance.kind == "digraph"
        assert self.instance.name == "one-way"
        assert self.instance.comments == ["one-way digraph"]
        assert not self.instance.is_tuple

    def test_structures(self):
        assert isinstance(self.instance.structures[0], Digraph)
        assert self.instance.relations == [one_way_digraph().to_relation()]

    def test_topology_and_family(self):
        assert self.instance.explicit_topology
        assert self.instance.topology.opens == (0, 2, 16, 18, 31)
        assert self.instance.family == all_nonempty()

    def test_text_reads_back(self):
        again = parse_instance(instance_to_text(self.instance))
        assert again.relations == self.instance.relations
        assert again.topology == self.instance.topology
        assert again.family == self.instance.family
        assert again.comments == self.instance.comments

    def test_defaults(self):
        instance = parse_instance("nodes: 3\narc: 1 2  # inline comment\n")
        assert instance.kind == "relation"
        assert not instance.explicit_topology
        assert len(instance.topology.opens) == 8
        assert instance.family is None

    def test_edges_and_tuples(self):
        graph = parse_instance("nodes: 3\nedge: 1 2\nedge: 2 3\n")
        assert graph.kind == "graph"
        assert isinstance(graph.structures[0], SimpleGraph)
        pair = parse_instance("nodes: 2\nkind: relation\nedge: 1 2\nnext\narc: 2 2\n")
        assert pair.is_tuple
        assert pair.relations[0].pairs() == [(0, 1), (1, 0)]
        assert pair.relations[1].pairs() == [(1, 1)]

    def test_tournaments(self):
        instance = parse_instance(tournament_to_text(transitive_tournament(3)))
        assert instance.kind == "tournament"
        assert isinstance(instance.structures[0], Tournament)
        assert tournament_to_text(transitive_tournament(3)) == "tournament: 3\narc: 1 2\narc: 1 3\narc: 2 3\n"

    def test_family_expression(self):
        instance = parse_instance("nodes: 2\nfamily: unions:[{1}]+empty\n")
        assert instance.family.kind is FamilyKind.FINITE_UNIONS_OF
        assert instance.family.include_empty


class TestParseErrors:
    """Test error reporting with line numbers."""

    @pytest.mark.parametrize(
        "text,line",
        [
            ("arc: 1 2\n", 1),
            ("nodes: 2\narc: 1 3\n", 2),
            ("nodes: 2\narc: 1\n", 2),
            ("nodes: 2\narc: a b\n", 2),
            ("nodes: 2\nnodes: 3\n", 2),
            ("nodes: two\n", 1),
            ("nodes: 2\nkind: hypergraph\n", 2),
            ("nodes: 2\nwidth: 3\n", 2),
            ("nodes: 2\n\nfamily: sometimes\n", 3),
            ("nodes: 2\nopen: 3\n", 2),
        ],
    )
    def test_line_numbers(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_instance(text)
        assert info.value.line == line

    def test_missing_node_count(self):
        with pytest.raises(ParseError):
            parse_instance("# nothing here\n")

    def test_invalid_structures(self):
        with pytest.raises(ParseError):
            parse_instance("tournament: 3\narc: 1 2\n")
        with pytest.raises(ParseError):
            parse_instance("nodes: 2\nkind: graph\nedge: 1 1\n")

    def test_invalid_topology(self):
        with pytest.raises(MissingEmptyOrFull):
            parse_instance("nodes: 2\nopen: 1\nopen: 1 2\n")


class TestInstanceHelpers:
    """Test loading and wrapping instances."""

    def test_load_instance(self, tmp_path):
        path = tmp_path / "one_way.txt"
        path.write_text(ONE_WAY, encoding="utf-8")
        instance = load_instance(path)
        assert instance.name == "one_way"
        assert instance.n == 5

    def test_make_instance_kinds(self):
        assert make_instance([transitive_tournament(3)]).kind == "tournament"
        assert make_instance([one_way_digraph()]).kind == "digraph"
        assert make_instance([BooleanRelation.identity(2)]).kind == "relation"
        assert not make_instance([BooleanRelation.identity(2)]).explicit_topology

    def test_as_relation(self):
        graph = SimpleGraph(2, frozenset({(0, 1)}))
        assert as_relation(graph).pairs() == [(0, 1), (1, 0)]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
