"""
Tests for finite topologies.
"""

import pytest

from src.components.topology import (
    mask_to_nodes,
    nodes_to_mask,
    sample_topologies,
    topologies_generated_by_at_most,
    topology_antidiscrete,
    topology_discrete,
    topology_enumerate_all,
    topology_from_text,
    topology_generated_by,
    topology_to_text,
    topology_validate,
)
from src.utils.errors import (
    GuardExceeded,
    MissingEmptyOrFull,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
    ParseError,
    PreconditionError,
)


class TestValidation:
    """Test the topology axioms."""

    def test_valid_topology_is_sorted(self):
        top = topology_validate(3, [range(3), (1,), (), (0, 1)])
        assert top.opens == (0, 2, 3, 7)
        assert top.nonempty_opens() == (2, 3, 7)
        assert top.is_open(3)
        assert not top.is_open(1)

    def test_missing_empty_or_full(self):
        with pytest.raises(MissingEmptyOrFull):
            topology_validate(2, [(), (0,)])
        with pytest.raises(MissingEmptyOrFull):
            topology_validate(2, [(0,), (0, 1)])

    def test_union_witness(self):
        with pytest.raises(NotClosedUnderUnion) as info:
            topology_validate(3, [(), (0,), (1,), range(3)])
        assert (info.value.first, info.value.second) == (1, 2)

    def test_intersection_witness(self):
        with pytest.raises(NotClosedUnderIntersection) as info:
            topology_validate(3, [(), (0, 1), (1, 2), range(3)])
        assert (info.value.first, info.value.second) == (3, 6)

    def test_out_of_range(self):
        with pytest.raises(PreconditionError):
            topology_validate(2, [(), (2,), (0, 1)])
        with pytest.raises(PreconditionError):
            topology_validate(0, [()])

    def test_mask_helpers(self):
        assert nodes_to_mask([0, 2]) == 5
        assert nodes_to_mask(5) == 5
        assert mask_to_nodes(5) == frozenset({0, 2})


class TestConstruction:
    """Test standard topologies and generated topologies."""

    def test_discrete_and_antidiscrete(self):
        assert len(topology_discrete(3).opens) == 8
        assert topology_antidiscrete(3).opens == (0, 7)
        assert topology_discrete(1).opens == topology_antidiscrete(1).opens

    def test_generated_by(self):
        assert topology_generated_by(3, [(0,), (1,)]).opens == (0, 1, 2, 3, 7)
        assert topology_generated_by(2, []).opens == (0, 3)

    def test_generated_at_most(self):
        tops = topologies_generated_by_at_most(2, 2)
        assert len(tops) == 4
        assert tops[0].opens == (0, 3)


class TestEnumeration:
    """Test exhaustive enumeration and sampling."""

    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 4), (3, 29), (4, 355)])
    def test_counts(self, n, expected):
        tops = list(topology_enumerate_all(n))
        assert len(tops) == expected
        assert len({t.opens for t in tops}) == expected

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            topology_enumerate_all(5)

    def test_enumerated_topologies_validate(self):
        for top in topology_enumerate_all(3):
            assert topology_validate(3, top.opens) == top

    def test_sampling_is_seeded(self):
        first = sample_topologies(5, 10, seed=3)
        second = sample_topologies(5, 10, seed=3)
        assert [t.opens for t in first] == [t.opens for t in second]
        assert first[0] == topology_discrete(5)
        assert first[1] == topology_antidiscrete(5)
        assert len({t.opens for t in first}) == len(first)


class TestText:
    """Test the open: line format."""

    def test_to_text(self):
        top = topology_generated_by(2, [(0,)])
        assert topology_to_text(top) == ["open:", "open: 1", "open: 1 2"]

    def test_from_text(self):
        lines = [(1, "open:"), (2, "open: 2"), (3, "open: 1 2")]
        assert topology_from_text(2, lines).opens == (0, 2, 3)

    def test_from_text_errors(self):
        with pytest.raises(ParseError) as info:
            topology_from_text(2, [(4, "open: 3")])
        assert info.value.line == 4
        with pytest.raises(ParseError):
            topology_from_text(2, [(1, "open: a")])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
