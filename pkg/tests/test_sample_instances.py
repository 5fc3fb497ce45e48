"""
Tests for sample instances and the seeded instance generator.
"""

import pytest

from src.components.digraphs import (
    Tournament,
    collection_discrepancies,
    digraph_strongly_connected,
    tournament_canonical_bits,
    tournament_s_collection,
)
from src.components.graphs import graph_is_connected
from src.components.natset import eps_complement, eps_finite
from src.data.sample_instances import (
    FOUR_TOURNAMENTS,
    PUBLISHED_COLLECTIONS,
    InstanceGenerator,
    dominated_cycle_tournament,
    dominating_cycle_tournament,
    get_sample_instances,
    strong_tournament,
    transitive_tournament,
)


class TestInstanceGenerator:
    """Test cases for InstanceGenerator class."""

    def setup_method(self):
        """Set up test fixtures."""
        self.generator = InstanceGenerator(seed=42)

    def test_seed_reproducibility(self):
        """Test that the same seed produces the same instances."""
        again = InstanceGenerator(seed=42)
        assert self.generator.random_relation(5) == again.random_relation(5)
        assert self.generator.random_tournament(5) == again.random_tournament(5)
        assert self.generator.random_topology(4) == again.random_topology(4)

    def test_random_relation(self):
        """Test loop control and size."""
        rho = self.generator.random_relation(6, density=0.9, loops=False)
        assert rho.n == 6
        assert not rho.bits.diagonal().any()

    def test_random_digraph_and_tournament(self):
        """Test that generated structures validate."""
        digraph = self.generator.random_digraph(5)
        assert all(i != j for i, j in digraph.arcs)
        assert isinstance(self.generator.random_tournament(6), Tournament)

    def test_random_connected_graph(self):
        """Test that drawn graphs are connected."""
        for _ in range(5):
            assert graph_is_connected(self.generator.random_connected_graph(6))

    def test_random_topology(self):
        """Test that drawn topologies contain the empty and full sets."""
        top = self.generator.random_topology(4)
        assert top.opens[0] == 0
        assert top.opens[-1] == 15


class TestNamedInstances:
    """Test the worked instances."""

    def test_sample_instances(self):
        """Test the named instance collection."""
        instances = get_sample_instances()
        assert {"one-way", "forked-pair", "looped-pair", "single-arc", "k2", "c4"} <= set(instances)
        assert instances["forked-pair"].is_tuple
        assert instances["one-way"].explicit_topology
        assert instances["single-arc"].family is not None
        assert instances["tournament-strong"].kind == "tournament"

    def test_four_tournaments_are_distinct_classes(self):
        """Test that the four 4-tournaments are pairwise non-isomorphic."""
        codes = {tournament_canonical_bits(build()) for build in FOUR_TOURNAMENTS.values()}
        assert len(codes) == 4
        assert set(FOUR_TOURNAMENTS) == set(PUBLISHED_COLLECTIONS)

    def test_only_one_is_strong(self):
        """Test strong connectivity of the four classes."""
        assert digraph_strongly_connected(strong_tournament())
        for build in (transitive_tournament, dominating_cycle_tournament, dominated_cycle_tournament):
            assert not digraph_strongly_connected(build())

    def test_strong_collection_against_the_published_list(self):
        """Test that one listed set for the strong class is never realized."""
        realized = tournament_s_collection(strong_tournament())
        report = collection_discrepancies(realized, PUBLISHED_COLLECTIONS["strong"])
        assert report["unrealized"] == [eps_complement(eps_finite([1, 2, 3, 6]))]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
