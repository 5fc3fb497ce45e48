"""
Tests for the text and table report layout.
"""

import pandas as pd
import pytest

from src.components.dynamics import Verdict, is_F_hypercyclic, is_F_top_transitive
from src.components.family import all_nonempty, tail
from src.components.natset import eps_complement, eps_finite
from src.components.selection import Status
from src.components.verification import CheckResult
from src.data.sample_instances import one_way_digraph, one_way_topology
from src.layouts.report_layout import (
    create_discrepancy_lines,
    create_s_set_lines,
    create_survey_frame,
    create_survey_lines,
    create_survey_summary,
    create_verdict_line,
    create_verification_lines,
    create_verification_summary,
    create_verification_table,
    format_optional,
    node_label,
    render_nodes,
    render_refutation,
)


def survey_table():
    return pd.DataFrame(
        {
            "bits": [0, 5, 9],
            "s_index": [4, 4, 6],
            "exponent": pd.Series([None, None, 9], dtype=object),
            "strong": [False, False, True],
        }
    )


class TestNodes:
    """Test node and refutation rendering."""

    def test_labels_are_one_based(self):
        assert node_label(2) == "x3"
        assert render_nodes([3, 0]) == "{x1,x4}"
        assert render_refutation((frozenset({1}), frozenset({0, 2}))) == "({x2},{x1,x3})"


class TestVerdictLines:
    """Test one-line verdict rendering."""

    def setup_method(self):
        self.rho = one_way_digraph().to_relation()
        self.top = one_way_topology()

    def test_witness(self):
        verdict = is_F_hypercyclic(self.rho, self.top, all_nonempty())
        line = create_verdict_line("hypercyclic", all_nonempty(), verdict)
        assert line == "hypercyclic all-nonempty -> Yes witness=x3"

    def test_refutation(self):
        verdict = is_F_top_transitive(self.rho, self.top, all_nonempty())
        line = create_verdict_line("transitive", all_nonempty(), verdict)
        assert line == "transitive all-nonempty -> No refuted-by=({x2},{x2}) S=EMPTY"

    def test_unknown_carries_the_reason(self):
        verdict = Verdict(Status.UNKNOWN, detail="budget exhausted")
        line = create_verdict_line("strong-hypercyclic", tail(2), verdict)
        assert line == "strong-hypercyclic tail:2 -> Unknown reason='budget exhausted'"


class TestSetLines:
    """Test return-time set listings."""

    def test_s_set_lines(self):
        pairs = [((frozenset({0}), frozenset({1})), eps_complement(eps_finite([1])))]
        assert create_s_set_lines(pairs) == ["S({x1},{x2}) = N\\{1}"]
        assert create_s_set_lines(pairs, label="dS") == ["dS({x1},{x2}) = N\\{1}"]

    def test_discrepancy_lines(self):
        report = {"unrealized": [eps_finite([2])], "outside": []}
        assert create_discrepancy_lines("strong", report) == ["strong: unrealized {2}"]
        assert create_discrepancy_lines("strong", {"unrealized": [], "outside": []}) == [
            "strong: matches the published list"
        ]


class TestSurveyLayout:
    """Test survey rows, summaries and the CSV frame."""

    def setup_method(self):
        self.table = survey_table()

    def test_lines(self):
        lines = create_survey_lines(self.table)
        assert lines[0] == "class 0 S=4 exponent=- strong=false"
        assert lines[2] == "class 9 S=6 exponent=9 strong=true"

    def test_summary(self):
        lines = create_survey_summary(4, self.table, 6, [9])
        assert lines == ["a_4 = {4, 6}", "multiset: 4x2, 6x1", "maximum S=6 attained by 9"]
        assert create_survey_summary(2, self.table.iloc[0:0], 0, []) == ["a_2: no tournaments"]

    def test_frame(self):
        frame = create_survey_frame(self.table)
        assert list(frame["exponent"]) == ["-", "-", "9"]
        assert self.table.loc[0, "exponent"] is None


class TestVerificationLayout:
    """Test the verification table and summary."""

    def setup_method(self):
        self.results = [
            CheckResult("walk-oracle", "n=1", True),
            CheckResult("walk-oracle", "n=2", False, "S differs"),
            CheckResult("path-formula", "P_3", True, "S=3"),
        ]
        self.table = create_verification_table(self.results)

    def test_table(self):
        assert list(self.table.columns) == ["suite", "instance", "passed", "detail"]
        assert len(self.table) == 3

    def test_lines(self):
        assert create_verification_lines(self.table) == [
            "walk-oracle n=1 pass",
            "walk-oracle n=2 FAIL (S differs)",
            "path-formula P_3 pass (S=3)",
        ]
        assert create_verification_lines(self.table, show_passes=False) == ["walk-oracle n=2 FAIL (S differs)"]

    def test_summary(self):
        assert create_verification_summary(self.table) == [
            "walk-oracle: 1/2 passed",
            "path-formula: 1/1 passed",
            "1 check(s) failed",
        ]
        passing = create_verification_table(self.results[2:])
        assert create_verification_summary(passing)[-1] == "all checks passed"

    def test_empty(self):
        empty = create_verification_table([])
        assert empty.empty
        assert create_verification_summary(empty) == ["no checks ran"]
        assert create_verification_lines(empty) == []


class TestFormatOptional:
    """Test optional number rendering."""

    @pytest.mark.parametrize(
        "value,text", [(None, "-"), (float("nan"), "-"), (float("inf"), "inf"), (3.0, "3"), (9, "9")]
    )
    def test_format(self, value, text):
        assert format_optional(value) == text


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
