"""
Tests for digraphs, tournaments and the tournament survey.
"""

import math

import pytest

from src.components.digraphs import (
    Digraph,
    Tournament,
    build_disjoint_counterexample,
    collection_discrepancies,
    digraph_exponent,
    digraph_from_arcs,
    digraph_is_asymmetric,
    digraph_is_primitive,
    digraph_strongly_connected,
    digraph_underlying,
    digraph_weakly_connected,
    digraph_wproperty,
    directed_diameter,
    survey_a_n,
    tournament_canonical_bits,
    tournament_enumerate,
    tournament_exponent_tail_check,
    tournament_from_arcs,
    tournament_from_bits,
    tournament_indegrees,
    tournament_is_hamiltonian,
    tournament_redei_path,
    tournament_s_collection,
    tournament_to_bits,
)
from src.components.dynamics import DynamicalProperty
from src.components.family import all_nonempty, finite_unions_of
from src.components.natset import EMPTY, eps_finite
from src.data.sample_instances import (
    one_way_digraph,
    one_way_topology,
    strong_tournament,
    transitive_tournament,
)
from src.utils.errors import GuardExceeded, NotPrimitive, PreconditionError


class TestDigraphs:
    """Test digraph construction and connectivity."""

    def setup_method(self):
        self.one_way = one_way_digraph()

    def test_validation(self):
        with pytest.raises(PreconditionError):
            Digraph(2, frozenset({(0, 0)}))
        with pytest.raises(PreconditionError):
            digraph_from_arcs(2, [(0, 3)])
        with pytest.raises(PreconditionError):
            tournament_from_arcs(3, [(0, 1), (1, 2)])

    def test_connectivity(self):
        assert digraph_weakly_connected(self.one_way)
        assert not digraph_strongly_connected(self.one_way)
        assert digraph_strongly_connected(strong_tournament())

    def test_underlying_graph(self):
        assert not digraph_is_asymmetric(self.one_way)
        assert digraph_underlying(self.one_way).edges == frozenset({(1, 2), (2, 4), (0, 1), (0, 3)})

    def test_wproperty_keeps_the_implication(self):
        verdict = digraph_wproperty(
            [self.one_way], one_way_topology(), all_nonempty(), DynamicalProperty.HYPERCYCLIC
        )
        assert verdict.is_yes
        assert verdict.facts["implication"]


class TestPrimitivity:
    """Test exponents and directed diameters."""

    def test_strong_four_tournament(self):
        t = strong_tournament()
        assert digraph_is_primitive(t)
        assert digraph_exponent(t) == 9
        assert directed_diameter(t) == 3

    def test_transitive_tournament(self):
        t = transitive_tournament(4)
        assert not digraph_is_primitive(t)
        with pytest.raises(NotPrimitive):
            digraph_exponent(t)
        assert directed_diameter(t) == math.inf


class TestTournamentCodes:
    """Test bit codes, canonical forms and enumeration."""

    def test_code_convention(self):
        t = tournament_from_bits(3, 0b101)
        assert t.arcs == frozenset({(0, 1), (2, 0), (1, 2)})
        assert tournament_to_bits(t) == 0b101
        with pytest.raises(PreconditionError):
            tournament_from_bits(3, 8)

    def test_canonical_code(self):
        assert tournament_canonical_bits(tournament_from_bits(3, 0b101)) == 0b010
        assert tournament_canonical_bits(transitive_tournament(3)) == 0

    @pytest.mark.parametrize("n,labelled,classes", [(2, 2, 1), (3, 8, 2), (4, 64, 4), (5, 1024, 12)])
    def test_counts(self, n, labelled, classes):
        assert len(list(tournament_enumerate(n))) == labelled
        assert len(list(tournament_enumerate(n, up_to_iso=True))) == classes

    def test_classes_are_distinct(self):
        codes = [tournament_canonical_bits(t) for t in tournament_enumerate(4, up_to_iso=True)]
        assert codes == sorted(set(codes))

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            list(tournament_enumerate(8))


class TestTournamentStructure:
    """Test indegrees, Redei paths and Hamiltonicity."""

    def test_indegrees(self):
        assert tournament_indegrees(transitive_tournament(4)) == [0, 1, 2, 3]
        assert sum(tournament_indegrees(strong_tournament())) == 6

    def test_redei_paths(self):
        assert tournament_redei_path(transitive_tournament(4)) == [0, 1, 2, 3]
        for t in tournament_enumerate(4):
            path = tournament_redei_path(t)
            assert all((a, b) in t.arcs for a, b in zip(path, path[1:]))

    def test_hamiltonian(self):
        assert tournament_is_hamiltonian(strong_tournament())
        assert not tournament_is_hamiltonian(transitive_tournament(4))
        for t in tournament_enumerate(4):
            assert tournament_is_hamiltonian(t) == digraph_strongly_connected(t)


class TestExponentTail:
    """Test the tail containment check."""

    def test_strong_tournament(self):
        report = tournament_exponent_tail_check([strong_tournament()])
        assert report.exponent == 9
        assert report.lacking == ()
        assert report.gap_pair is not None
        assert report.verdict.is_yes

    def test_family_lacking_the_tail(self):
        family = finite_unions_of([eps_finite([1, 2])], include_empty=True)
        report = tournament_exponent_tail_check([strong_tournament()], family)
        assert set(report.family_lacking) == {EMPTY, eps_finite([1, 2])}
        assert "family_has_tail" not in report.facts

    def test_requires_strong_tournaments(self):
        with pytest.raises(PreconditionError):
            tournament_exponent_tail_check([transitive_tournament(4)])
        with pytest.raises(PreconditionError):
            tournament_exponent_tail_check([])


class TestDisjointCounterexample:
    """Test the d-hypercyclic but not strongly d-hypercyclic pair."""

    def test_five_nodes(self):
        tournaments, top = build_disjoint_counterexample(5)
        assert len(tournaments) == 2
        assert all(isinstance(t, Tournament) for t in tournaments)
        assert top.nonempty_opens() == (2, 4, 6, 31)

    def test_three_copies_alternate(self):
        tournaments, _ = build_disjoint_counterexample(5, copies=3, verify=False)
        assert tournaments[0] == tournaments[2]
        assert tournaments[0] != tournaments[1]

    def test_bad_arguments(self):
        with pytest.raises(PreconditionError):
            build_disjoint_counterexample(4)
        with pytest.raises(PreconditionError):
            build_disjoint_counterexample(5, copies=1)


class TestSurvey:
    """Test the S-index survey and collection comparison."""

    def test_four_node_classes(self):
        survey = survey_a_n(4, up_to_iso=True, workers=1)
        assert len(survey.table) == 4
        assert list(survey.table["bits"]) == sorted(survey.table["bits"])
        assert survey.maximum == max(survey.a_n())
        assert survey.extremal

    def test_strong_only(self):
        survey = survey_a_n(4, up_to_iso=True, strong_only=True, workers=1)
        assert len(survey.table) == 1
        assert survey.table.loc[0, "exponent"] == 9
        assert survey.table.loc[0, "hamiltonian"]
        expected = len(tournament_s_collection(strong_tournament()))
        assert survey.table.loc[0, "s_index"] == expected

    def test_two_nodes_without_strong_rows(self):
        survey = survey_a_n(2, strong_only=True, workers=1)
        assert survey.table.empty
        assert survey.maximum == 0

    def test_discrepancies(self):
        report = collection_discrepancies([EMPTY, eps_finite([1])], [eps_finite([1]), eps_finite([2])])
        assert report["unrealized"] == [eps_finite([2])]
        assert report["outside"] == []
        report = collection_discrepancies([eps_finite([3])], [eps_finite([1])])
        assert report["outside"] == [eps_finite([3])]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
