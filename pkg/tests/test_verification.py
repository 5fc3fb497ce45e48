"""
Tests for the verification suites, run with small bounds.
"""

import pytest

from src.components.relations import BooleanRelation
from src.components.verification import (
    CHECKS,
    SUITE_ALIASES,
    SUITES,
    CheckResult,
    SweepBounds,
    all_relations,
    labelled_graphs,
    list_suites,
    loop_free_relations,
    relation_key,
    resolve_suites,
    run_suite,
    run_suites,
)
from src.utils.errors import PreconditionError


def assert_all_passed(results):
    failed = [f"{r.instance}: {r.detail}" for r in results if not r.passed]
    assert not failed, failed


class TestRegistry:
    """Test the suite registry."""

    def test_list_suites(self):
        names = [name for name, _ in list_suites()]
        assert names == list(SUITES) + list(SUITE_ALIASES)
        assert {"worked-examples", "walk-oracle", "four-tournaments", "path-formula"} <= set(names)
        assert all(description for _, description in list_suites())

    def test_aliases_name_registered_suites(self):
        for members in SUITE_ALIASES.values():
            assert members
            assert set(members) <= set(SUITES)
        assert not set(SUITE_ALIASES) & set(SUITES)

    def test_resolve_suites(self):
        assert resolve_suites(["radio", "radio"]) == ["nonbipartite-disjoint", "bipartite-disjoint"]
        assert resolve_suites(["diameter-bound", "reza"]) == ["diameter-bound", "parity-bound"]
        assert resolve_suites(["all"]) == list(SUITES)
        assert resolve_suites([]) == []

    def test_alias_runs_its_suites(self):
        results = run_suite("moguce", SweepBounds(max_n=3, workers=1))
        assert results
        assert {r.suite for r in results} == {"bipartite-closed-form"}
        assert_all_passed(results)

    def test_unknown_suite(self):
        with pytest.raises(PreconditionError):
            run_suite("no-such-suite", SweepBounds())
        with pytest.raises(PreconditionError):
            run_suites(["worked-examples", "no-such-suite"], SweepBounds())

    def test_pool_checks_are_registered(self):
        assert "walk-oracle" in CHECKS
        assert "tournament-counterexample" in CHECKS


class TestInstanceSources:
    """Test exhaustive instance sources."""

    def test_counts(self):
        assert len(list(all_relations(2))) == 16
        assert len(list(loop_free_relations(3))) == 64
        assert len(list(labelled_graphs(3))) == 8

    def test_relation_key(self):
        rho = BooleanRelation.from_pairs(2, [(0, 1)])
        assert relation_key(rho) == relation_key(BooleanRelation.from_pairs(2, [(0, 1)]))
        assert relation_key(rho) != relation_key(BooleanRelation.identity(2))
        assert relation_key(rho).startswith("n=2:")


class TestSuites:
    """Run individual suites with small bounds."""

    def setup_method(self):
        self.bounds = SweepBounds(max_n=2, workers=1)

    def test_worked_examples(self):
        results = run_suite("worked-examples", self.bounds)
        assert len(results) == 8
        assert all(isinstance(r, CheckResult) for r in results)
        assert_all_passed(results)

    def test_path_formula(self):
        results = run_suite("path-formula", self.bounds)
        assert [r.instance for r in results] == [f"P_{n}" for n in range(2, 9)]
        assert_all_passed(results)

    def test_four_tournaments(self):
        results = run_suite("four-tournaments", self.bounds)
        assert [r.instance for r in results][-1] == "classes"
        assert_all_passed(results)
        strong = next(r for r in results if r.instance == "strong")
        assert "strong: unrealized" in strong.detail

    def test_walk_oracle(self):
        results = run_suite("walk-oracle", self.bounds)
        assert len(results) == 2 + 16
        assert_all_passed(results)

    def test_tournament_counterexample(self):
        results = run_suite("tournament-counterexample", SweepBounds(max_n=5, workers=1))
        assert len(results) == 3
        assert_all_passed(results)

    def test_run_suites_concatenates(self):
        results = run_suites(["worked-examples", "path-formula"], self.bounds)
        assert {r.suite for r in results} == {"worked-examples", "path-formula"}
        assert len(results) == 8 + 7


class TestEverySuite:
    """Run every registered suite with small sampled bounds."""

    @pytest.mark.parametrize("name", sorted(SUITES))
    def test_suite_passes(self, name):
        results = run_suite(name, SweepBounds(max_n=3, samples=30, workers=1))
        assert {r.suite for r in results} <= {name}
        assert_all_passed(results)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
