"""
Tests for eventually periodic sets of naturals.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.components.natset import (
    EMPTY,
    NATURALS,
    eps_complement,
    eps_contains,
    eps_contains_tail_from,
    eps_elements_upto,
    eps_finite,
    eps_from_pattern,
    eps_from_progression,
    eps_intersect,
    eps_is_cofinite,
    eps_is_empty,
    eps_is_finite,
    eps_is_subset,
    eps_lower_density,
    eps_min,
    eps_plus_multiples,
    eps_shift,
    eps_size,
    eps_translate,
    eps_union,
    parse_eps,
    render_eps,
)
from src.utils.errors import ParseError, PreconditionError

WINDOW = 60

eps_sets = st.builds(
    eps_from_pattern,
    st.lists(st.booleans(), max_size=6),
    st.lists(st.booleans(), min_size=1, max_size=6),
)


def members(a, upto=WINDOW):
    return {n for n in range(1, upto + 1) if eps_contains(a, n)}


class TestCanonicalForm:
    """Test that equal sets have equal fields."""

    def test_redundant_prefix_is_absorbed(self):
        """Test a prefix bit that repeats the cycle."""
        assert eps_from_pattern([True, True], [True]) == NATURALS
        assert eps_from_pattern([False], [False, False]) == EMPTY

    def test_period_is_minimal(self):
        """Test that a doubled cycle collapses."""
        a = eps_from_pattern([], [False, True, False, True])
        assert a.period == 2
        assert a == eps_from_progression(0, 2)

    def test_progressions(self):
        """Test progressions starting at 0 and above."""
        assert members(eps_from_progression(0, 2), 10) == {2, 4, 6, 8, 10}
        assert members(eps_from_progression(1, 2), 9) == {1, 3, 5, 7, 9}
        assert members(eps_from_progression(4, 3), 13) == {4, 7, 10, 13}

    def test_bad_arguments(self):
        """Test rejected constructions."""
        with pytest.raises(PreconditionError):
            eps_from_progression(1, 0)
        with pytest.raises(PreconditionError):
            eps_finite([0, 2])
        with pytest.raises(PreconditionError):
            eps_from_pattern([True], [])

    @given(eps_sets)
    def test_membership_vector(self, a):
        """Test that membership() agrees with eps_contains."""
        vector = a.membership(WINDOW)
        assert {n + 1 for n in range(WINDOW) if vector[n]} == members(a)


class TestAlgebra:
    """Test boolean operations against pointwise membership."""

    @given(eps_sets, eps_sets)
    def test_union_and_intersection(self, a, b):
        assert members(eps_union(a, b)) == members(a) | members(b)
        assert members(eps_intersect(a, b)) == members(a) & members(b)

    @given(eps_sets)
    def test_complement(self, a):
        assert members(eps_complement(a)) == set(range(1, WINDOW + 1)) - members(a)
        assert eps_complement(eps_complement(a)) == a

    @given(eps_sets, eps_sets)
    def test_subset_matches_membership(self, a, b):
        joined = eps_union(a, b)
        assert eps_is_subset(a, joined)
        assert eps_is_subset(a, b) == (eps_intersect(a, b) == a)

    @given(eps_sets, st.integers(min_value=0, max_value=5))
    def test_shift(self, a, n):
        shifted = eps_shift(a, n)
        assert members(shifted, WINDOW - n) == {k - n for k in members(a) if k > n}

    @given(eps_sets, st.integers(min_value=0, max_value=5))
    def test_translate(self, a, n):
        assert members(eps_translate(a, n)) == {k + n for k in members(a, WINDOW - n)}

    @settings(max_examples=50)
    @given(eps_sets, st.integers(min_value=1, max_value=4))
    def test_plus_multiples(self, a, d):
        expected = {k + d * m for k in members(a) for m in range(1, WINDOW) if k + d * m <= WINDOW}
        assert members(eps_plus_multiples(a, d)) == expected

    def test_plus_two_on_single_element(self):
        """Test {1} + 2N is the odd numbers from 3."""
        assert eps_plus_multiples(eps_finite([1]), 2) == eps_from_progression(3, 2)


class TestQueries:
    """Test tails, densities and sizes."""

    def test_tail_containment(self):
        a = eps_complement(eps_finite([1, 2]))
        assert eps_contains_tail_from(a, 3)
        assert not eps_contains_tail_from(a, 2)
        assert not eps_contains_tail_from(eps_from_progression(0, 2), 5)
        with pytest.raises(PreconditionError):
            eps_contains_tail_from(a, 0)

    def test_density(self):
        assert eps_lower_density(eps_from_progression(0, 3)) == Fraction(1, 3)
        assert eps_lower_density(eps_finite([1, 2, 3])) == 0
        assert eps_lower_density(NATURALS) == 1

    def test_size_and_min(self):
        assert eps_size(eps_finite([2, 5])) == 2
        assert eps_size(NATURALS) is None
        assert eps_min(eps_from_progression(4, 3)) == 4
        assert eps_min(EMPTY) is None
        assert eps_elements_upto(eps_from_progression(0, 2), 7) == [2, 4, 6]

    def test_out_of_range_membership(self):
        assert not eps_contains(NATURALS, 0)
        assert 3 in eps_finite([3])

    def test_emptiness_and_cofiniteness(self):
        assert eps_is_empty(EMPTY)
        assert eps_is_empty(eps_intersect(eps_from_progression(0, 2), eps_from_progression(1, 2)))
        assert not eps_is_empty(eps_finite([4]))
        assert eps_is_cofinite(eps_complement(eps_finite([1, 5])))
        assert eps_is_cofinite(NATURALS)
        assert not eps_is_cofinite(eps_from_progression(0, 2))
        assert eps_is_finite(eps_finite([2, 9]))
        assert not eps_is_finite(eps_from_progression(3, 4))


class TestGrammar:
    """Test rendering and parsing in the report grammar."""

    def test_render_shapes(self):
        assert render_eps(EMPTY) == "EMPTY"
        assert render_eps(NATURALS) == "N"
        assert render_eps(eps_finite([1, 3])) == "{1,3}"
        assert render_eps(eps_complement(eps_finite([1]))) == "N\\{1}"
        assert render_eps(eps_from_progression(0, 2)) == "(2+2·N0)"
        assert render_eps(eps_from_progression(1, 2)) == "(1+2·N0)"

    def test_render_mixed(self):
        a = eps_union(eps_finite([1]), eps_from_progression(5, 3))
        assert render_eps(a) == "{1} ∪ (5+3·N0)"

    def test_parse_alternatives(self):
        assert parse_eps("3N") == eps_from_progression(0, 3)
        assert parse_eps("(1+3*N0) U {2}") == eps_union(eps_from_progression(1, 3), eps_finite([2]))
        assert parse_eps("N\\{2, 3, 6}") == eps_complement(eps_finite([2, 3, 6]))
        assert parse_eps("{}") == EMPTY

    @given(eps_sets)
    def test_parse_reads_rendered(self, a):
        assert parse_eps(render_eps(a)) == a

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_eps("")
        with pytest.raises(ParseError):
            parse_eps("evens")
        with pytest.raises(ParseError):
            parse_eps("{0,1}")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
