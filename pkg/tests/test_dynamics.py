"""
Tests for the hypercyclicity and transitivity deciders.
"""

import pytest

from src.components.dynamics import (
    DynamicalProperty,
    check_shift_transfer,
    d_hit_set,
    d_transitive_set,
    decide,
    hit_sets,
    hypercyclic_vectors,
    is_dF_hypercyclic,
    is_dF_top_transitive,
    is_F_hypercyclic,
    is_F_top_transitive,
    is_strongly_dF_hypercyclic,
    is_strongly_dF_top_transitive,
    is_strongly_F_hypercyclic,
    is_strongly_F_top_transitive,
    restrict_to_d_infinity,
    strong_hypercyclic_vectors,
    transitivity_sets,
)
from src.components.family import all_nonempty, odd_only, upward_from
from src.components.graphs import graph_standard, graph_to_relation
from src.components.natset import EMPTY, NATURALS, eps_complement, eps_finite, eps_from_progression
from src.components.relations import BooleanRelation, image_sequence
from src.components.selection import Status
from src.components.topology import topology_antidiscrete, topology_discrete
from src.data.sample_instances import (
    alternating_sequence,
    forked_digraph,
    forked_topology,
    looped_pair,
    looped_pair_topology,
    one_way_digraph,
    one_way_topology,
    single_arc,
    single_arc_family,
)
from src.utils.errors import DimensionMismatch, PreconditionError

EVENS = eps_from_progression(0, 2)
ODDS = eps_from_progression(1, 2)


class TestCompleteGraphs:
    """Test K_2 and larger complete graphs under the discrete topology."""

    def setup_method(self):
        self.k2 = graph_to_relation(graph_standard("complete", 2))
        self.top = topology_discrete(2)

    def test_hit_sets(self):
        sets = dict(hit_sets(self.k2, 0, self.top))
        assert sets[frozenset({0})] == EVENS
        assert sets[frozenset({1})] == ODDS
        assert sets[frozenset({0, 1})] == NATURALS

    def test_transitivity_sets(self):
        sets = dict(transitivity_sets(self.k2, self.top))
        assert len(sets) == 9
        assert sets[(frozenset({1}), frozenset({1}))] == EVENS

    def test_all_nonempty(self):
        verdict = is_F_hypercyclic(self.k2, self.top, all_nonempty())
        assert verdict.is_yes
        assert verdict.witnesses == (0, 1)
        assert is_F_top_transitive(self.k2, self.top, all_nonempty()).is_yes
        assert is_strongly_F_hypercyclic(self.k2, self.top, all_nonempty()).witness == 0
        assert is_strongly_F_top_transitive(self.k2, self.top, all_nonempty()).is_yes

    def test_odd_only_refutation(self):
        verdict = is_F_hypercyclic(self.k2, self.top, odd_only())
        assert verdict.is_no
        assert verdict.refutation == (frozenset({0}), frozenset({0}))
        assert verdict.refuted_set == EVENS

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_larger_complete_graphs(self, n):
        rho = graph_to_relation(graph_standard("complete", n))
        not_one = eps_complement(eps_finite([1]))
        family = upward_from([not_one])
        top = topology_discrete(n)
        assert hypercyclic_vectors(rho, top, family) == frozenset(range(n))
        assert is_F_top_transitive(rho, top, family).is_yes

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatch):
            is_F_hypercyclic(self.k2, topology_discrete(3), all_nonempty())


class TestWorkedInstances:
    """Test the named worked instances."""

    def test_one_way_digraph(self):
        rho = one_way_digraph().to_relation()
        top = one_way_topology()
        verdict = is_F_hypercyclic(rho, top, all_nonempty())
        assert verdict.witness == 2
        assert verdict.witnesses == (2,)
        strong, outcomes = strong_hypercyclic_vectors(rho, top, all_nonempty())
        assert strong == frozenset()
        assert outcomes[2].status is Status.NO
        transitive = is_F_top_transitive(rho, top, all_nonempty())
        assert transitive.refutation == (frozenset({1}), frozenset({1}))
        assert transitive.refuted_set == EMPTY

    def test_forked_pair(self):
        rho = forked_digraph().to_relation()
        top = forked_topology()
        assert is_dF_hypercyclic([rho, rho], top, all_nonempty()).witnesses == (0,)
        assert is_strongly_dF_hypercyclic([rho, rho], top, all_nonempty()).is_no
        assert is_dF_top_transitive([rho, rho], top, all_nonempty()).is_no

    def test_looped_pair(self):
        rho = looped_pair()
        top = looped_pair_topology()
        assert hypercyclic_vectors(rho, top, all_nonempty()) == frozenset({0, 1})
        strong, _ = strong_hypercyclic_vectors(rho, top, all_nonempty())
        assert strong == frozenset({0, 1})

    def test_single_arc(self):
        rho = single_arc()
        top = topology_discrete(2)
        family = single_arc_family()
        assert is_F_top_transitive(rho, top, family).is_yes
        assert is_strongly_F_top_transitive(rho, top, family).is_no

    def test_alternating_sequence(self):
        seq = alternating_sequence()
        top = topology_discrete(2)
        assert is_strongly_F_top_transitive(seq, top, upward_from([EVENS, ODDS])).is_no
        verdict = is_F_hypercyclic(seq, top, all_nonempty())
        assert verdict.is_no
        assert verdict.detail == "D_inf is empty"

    def test_square_under_odd_only(self):
        rho = graph_to_relation(graph_standard("cycle", 4))
        top = topology_discrete(4)
        for prop in DynamicalProperty:
            sources = [rho, rho] if prop.is_disjoint else rho
            assert not decide(prop, sources, top, odd_only()).is_yes, prop.value


class TestDisjoint:
    """Test the joint return-time sets."""

    def setup_method(self):
        self.k2 = graph_to_relation(graph_standard("complete", 2))

    def test_d_hit_set(self):
        assert d_hit_set([self.k2, self.k2], 0, [[0], [1]]) == EMPTY
        assert d_hit_set([self.k2, self.k2], 0, [[1], [0, 1]]) == ODDS
        with pytest.raises(DimensionMismatch):
            d_hit_set([self.k2], 0, [[0]])
        with pytest.raises(DimensionMismatch):
            d_hit_set([self.k2, self.k2], 0, [[0]])

    def test_d_transitive_set(self):
        assert d_transitive_set([self.k2, self.k2], [0, 1], [[0], [0]]) == NATURALS

    def test_needs_a_tuple(self):
        with pytest.raises(DimensionMismatch):
            decide(DynamicalProperty.D_TRANSITIVE, self.k2, topology_discrete(2), all_nonempty())

    def test_antidiscrete_collapses_to_domain(self):
        top = topology_antidiscrete(2)
        assert is_dF_hypercyclic([self.k2, self.k2], top, all_nonempty()).witnesses == (0, 1)

    def test_strong_transitivity(self):
        assert is_strongly_dF_top_transitive([self.k2, self.k2], topology_antidiscrete(2), all_nonempty()).is_yes
        rho = forked_digraph().to_relation()
        assert is_strongly_dF_top_transitive([rho, rho], forked_topology(), all_nonempty()).is_no


class TestShiftTransfer:
    """Test the shift-transfer check on one instance."""

    def setup_method(self):
        self.k2 = graph_to_relation(graph_standard("complete", 2))
        self.top = topology_discrete(2)

    def test_transfer_holds(self):
        verdict = check_shift_transfer(self.k2, self.top, all_nonempty(), z=0, lag=1)
        assert verdict.is_yes
        assert verdict.witness == 0
        assert verdict.facts == {"premise": True, "transfer": True, "conclusion": True}

    def test_transfer_fails(self):
        verdict = check_shift_transfer(self.k2, self.top, odd_only(), z=0, lag=1)
        assert verdict.is_no
        assert verdict.refuted_set == EVENS
        assert not verdict.facts["transfer"]

    def test_lag_must_be_positive(self):
        with pytest.raises(PreconditionError):
            check_shift_transfer(self.k2, self.top, all_nonempty(), z=0, lag=0)


class TestRestriction:
    """Test restricting the power sequence to D_inf."""

    def test_restriction_keeps_orbits_of_domain(self):
        rho = BooleanRelation.from_pairs(3, [(0, 0), (1, 2)])
        restricted = restrict_to_d_infinity(rho)
        assert restricted.image_sequence(0b001) == image_sequence(rho, 0b001)
        assert image_sequence(rho, 0b010).at(1) == 0b100
        assert restricted.image_sequence(0b010).at(1) == 0

    def test_restriction_preserves_verdicts(self):
        rho = one_way_digraph().to_relation()
        top = one_way_topology()
        restricted = restrict_to_d_infinity(rho)
        assert hypercyclic_vectors(restricted, top, all_nonempty()) == hypercyclic_vectors(
            rho, top, all_nonempty()
        )


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
