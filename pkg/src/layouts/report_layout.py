"""
Report layout for hyperrel.
Renders verdicts, return-time sets, survey rows and verification results as deterministic text and tables.
"""

from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from src.components.dynamics import Verdict
from src.components.family import FamilySpec, render_family
from src.components.natset import EventuallyPeriodicSet, render_eps
from src.components.selection import Status


def node_label(i: int) -> str:
    return f"x{i + 1}"


def render_nodes(nodes: Iterable[int]) -> str:
    return "{" + ",".join(node_label(i) for i in sorted(nodes)) + "}"


def render_refutation(refutation: Sequence[Iterable[int]]) -> str:
    return "(" + ",".join(render_nodes(part) for part in refutation) + ")"


def create_verdict_line(prop: str, family: FamilySpec, verdict: Verdict) -> str:
    """
    One report line per decision.

    Args:
        prop: Property tag as given on the command line
        family: Family the property was decided for
        verdict: Library verdict, rendered without reinterpretation

    Returns:
        `<property> <family> -> <Yes|No|Unknown> [witness=x3] [refuted-by=(...) S=...]`
    """
    parts = [f"{prop} {render_family(family)} -> {verdict.status.value}"]
    if verdict.witness is not None:
        parts.append(f"witness={node_label(verdict.witness)}")
    if verdict.refutation is not None:
        refuted = f"refuted-by={render_refutation(verdict.refutation)}"
        if verdict.refuted_set is not None:
            refuted += f" S={render_eps(verdict.refuted_set)}"
        parts.append(refuted)
    if verdict.status is Status.UNKNOWN and verdict.detail:
        parts.append(f"reason={verdict.detail!r}")
    return " ".join(parts)


def create_s_set_lines(
    pair_sets: Sequence[Tuple[Tuple[Iterable[int], ...], EventuallyPeriodicSet]], label: str = "S"
) -> List[str]:
    """`S(U,V) = <set>` lines in the given order."""
    lines = []
    for parts, s in pair_sets:
        args = ",".join(render_nodes(p) for p in parts)
        lines.append(f"{label}({args}) = {render_eps(s)}")
    return lines


def create_discrepancy_lines(name: str, report: dict) -> List[str]:
    """Published-list comparison, printed verbatim."""
    lines = []
    for key in ("unrealized", "outside"):
        for s in report.get(key, []):
            lines.append(f"{name}: {key} {render_eps(s)}")
    if not lines:
        lines.append(f"{name}: matches the published list")
    return lines


def _flag(value: bool) -> str:
    return "true" if value else "false"


def create_survey_lines(table: pd.DataFrame) -> List[str]:
    """`class <bits> S=<k> exponent=<e|-> strong=<true|false>` per row."""
    lines = []
    for row in table.itertuples(index=False):
        exponent = format_optional(row.exponent)
        lines.append(f"class {int(row.bits)} S={int(row.s_index)} exponent={exponent} strong={_flag(row.strong)}")
    return lines


def create_survey_summary(n: int, table: pd.DataFrame, maximum: int, extremal: Sequence[int]) -> List[str]:
    if table.empty:
        return [f"a_{n}: no tournaments"]
    counts = table["s_index"].value_counts().sort_index()
    spread = ", ".join(f"{int(k)}x{int(v)}" for k, v in counts.items())
    return [
        f"a_{n} = {{{', '.join(str(int(k)) for k in counts.index)}}}",
        f"multiset: {spread}",
        f"maximum S={maximum} attained by {', '.join(str(b) for b in extremal)}",
    ]


def create_survey_frame(table: pd.DataFrame) -> pd.DataFrame:
    """Survey table ready for CSV export."""
    frame = table.copy()
    frame["exponent"] = [format_optional(e) for e in frame["exponent"]]
    return frame


def create_verification_table(results: Sequence) -> pd.DataFrame:
    """
    Build the verification table.

    Args:
        results: CheckResult records in run order

    Returns:
        DataFrame with suite, instance, passed and detail columns
    """
    if not results:
        return pd.DataFrame(columns=["suite", "instance", "passed", "detail"])
    return pd.DataFrame(
        [{"suite": r.suite, "instance": r.instance, "passed": r.passed, "detail": r.detail} for r in results]
    )


def create_verification_lines(table: pd.DataFrame, show_passes: bool = True) -> List[str]:
    lines = []
    for row in table.itertuples(index=False):
        if row.passed and not show_passes:
            continue
        status = "pass" if row.passed else "FAIL"
        tail = f" ({row.detail})" if row.detail else ""
        lines.append(f"{row.suite} {row.instance} {status}{tail}")
    return lines


def create_verification_summary(table: pd.DataFrame) -> List[str]:
    if table.empty:
        return ["no checks ran"]
    grouped = table.groupby("suite", sort=False)["passed"].agg(["sum", "count"])
    lines = [f"{suite}: {int(row['sum'])}/{int(row['count'])} passed" for suite, row in grouped.iterrows()]
    failures = int((~table["passed"].astype(bool)).sum())
    lines.append("all checks passed" if failures == 0 else f"{failures} check(s) failed")
    return lines


def format_optional(value: Optional[float]) -> str:
    if value is None or pd.isna(value):
        return "-"
    if value == float("inf"):
        return "inf"
    return str(int(value))
