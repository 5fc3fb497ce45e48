"""
Command-line surface for hyperrel.

Subcommands:
    analyze FILE      decide properties of an instance file
    verify [SUITE..]  run verification suites
    survey N          S-index survey of the tournaments on N nodes
    enumerate KIND N  print topologies or tournaments in the text formats

Exit codes: 0 success, 1 malformed input or other library error,
2 refutation (a No under --expect, or a failed check), 3 size guard exceeded.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from src.components.digraphs import survey_a_n, tournament_enumerate
from src.components.dynamics import DynamicalProperty, decide, hit_sets, transitivity_sets
from src.components.family import FamilySpec, all_nonempty, parse_family
from src.components.topology import topology_enumerate_all, topology_to_text
from src.components.verification import SweepBounds, list_suites, run_suites
from src.data.instance_io import InstanceFile, load_instance, tournament_to_text
from src.layouts.report_layout import (
    create_s_set_lines,
    create_survey_frame,
    create_survey_lines,
    create_survey_summary,
    create_verdict_line,
    create_verification_lines,
    create_verification_summary,
    create_verification_table,
)
from src.utils.errors import GuardExceeded, HyperrelError, ParseError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUTED = 2
EXIT_GUARD = 3

LOG_LEVEL_ENV = "HYPERREL_LOG_LEVEL"
DEBUG_ENV = "HYPERREL_DEBUG"

PROPERTY_TAGS = [p.value for p in DynamicalProperty]


def configure_logging(verbose: int = 0) -> None:
    """Configure stderr logging once; -v is INFO, -vv or HYPERREL_DEBUG=true is DEBUG."""
    if os.environ.get(DEBUG_ENV, "false").lower() == "true" or verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, os.environ.get(LOG_LEVEL_ENV, "WARNING").upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _emit(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def _families(args: argparse.Namespace, instance: InstanceFile) -> List[FamilySpec]:
    if args.family:
        return [parse_family(text) for text in args.family]
    return [instance.family or all_nonempty()]


def _properties(args: argparse.Namespace, instance: InstanceFile) -> List[DynamicalProperty]:
    if args.property:
        return [DynamicalProperty(tag) for tag in args.property]
    return [p for p in DynamicalProperty if p.is_disjoint == instance.is_tuple]


def _s_set_lines(instance: InstanceFile) -> List[str]:
    lines = []
    for k, rho in enumerate(instance.relations, start=1):
        label = f"S{k}" if instance.is_tuple else "S"
        point_sets = [
            (((x,), v), s) for x in range(instance.n) for v, s in hit_sets(rho, x, instance.topology)
        ]
        lines.extend(create_s_set_lines(point_sets, label))
        lines.extend(create_s_set_lines(transitivity_sets(rho, instance.topology), label))
    return lines


def cmd_analyze(args: argparse.Namespace) -> int:
    instance = load_instance(args.path)
    logger.info("analyzing %s: %s on %d nodes", instance.name, instance.kind, instance.n)
    refuted = False
    for family in _families(args, instance):
        for prop in _properties(args, instance):
            sources = instance.relations if prop.is_disjoint else instance.relations[0]
            verdict = decide(prop, sources, instance.topology, family, args.budget)
            print(create_verdict_line(prop.value, family, verdict))
            refuted = refuted or verdict.is_no
    if args.show_s_sets:
        _emit(_s_set_lines(instance))
    return EXIT_REFUTED if args.expect and refuted else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.list:
        _emit(f"{name}: {description}" for name, description in list_suites())
        return EXIT_OK
    bounds = SweepBounds(
        max_n=args.max_n,
        samples=args.samples,
        seed=args.seed,
        workers=args.threads,
        budget=args.budget,
    )
    table = create_verification_table(run_suites(args.suites or ["all"], bounds))
    _emit(create_verification_lines(table, show_passes=not args.failures_only))
    _emit(create_verification_summary(table))
    if not table.empty and not table["passed"].astype(bool).all():
        return EXIT_REFUTED
    return EXIT_OK


def cmd_survey(args: argparse.Namespace) -> int:
    survey = survey_a_n(args.n, up_to_iso=args.iso, strong_only=args.strong_only, workers=args.threads)
    _emit(create_survey_lines(survey.table))
    _emit(create_survey_summary(survey.n, survey.table, survey.maximum, survey.extremal))
    if args.csv:
        create_survey_frame(survey.table).to_csv(args.csv, index=False)
        logger.info("wrote %d rows to %s", len(survey.table), args.csv)
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.kind == "topologies":
        blocks = ["\n".join([f"nodes: {args.n}"] + topology_to_text(top)) for top in topology_enumerate_all(args.n)]
    else:
        blocks = [tournament_to_text(t).rstrip("\n") for t in tournament_enumerate(args.n, up_to_iso=args.iso)]
    print("\n\n".join(blocks))
    logger.info("enumerated %d %s on %d nodes", len(blocks), args.kind, args.n)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperrel",
        description="Hypercyclicity and transitivity of relations on finite topological spaces",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--threads", type=int, default=None, help="worker processes (default: HYPERREL_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="decide properties of an instance file")
    analyze.add_argument("path", type=Path)
    analyze.add_argument("--property", action="append", choices=PROPERTY_TAGS, help="repeatable")
    analyze.add_argument("--family", action="append", help="family expression, repeatable")
    analyze.add_argument("--expect", action="store_true", help="exit 2 when any verdict is No")
    analyze.add_argument("--show-s-sets", action="store_true", help="print every S(x,V) and S(U,V)")
    analyze.add_argument("--budget", type=int, default=SweepBounds.budget, help="strong-search node budget")
    analyze.set_defaults(handler=cmd_analyze)

    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument("suites", nargs="*", help="suite names, aliases or `all` (default)")
    verify.add_argument("--list", action="store_true", help="list suites and exit")
    verify.add_argument("--max-n", type=int, default=SweepBounds.max_n)
    verify.add_argument("--samples", type=int, default=0, help="0 sweeps exhaustively")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--budget", type=int, default=SweepBounds.budget)
    verify.add_argument("--failures-only", action="store_true", help="omit passing instances")
    verify.set_defaults(handler=cmd_verify)

    survey = sub.add_parser("survey", help="S-index survey of tournaments on n nodes")
    survey.add_argument("n", type=int)
    survey.add_argument("--iso", action="store_true", help="one row per isomorphism class")
    survey.add_argument("--strong-only", action="store_true")
    survey.add_argument("--csv", type=Path, help="also write the table as CSV")
    survey.set_defaults(handler=cmd_survey)

    enumerate_cmd = sub.add_parser("enumerate", help="print topologies or tournaments")
    enumerate_cmd.add_argument("kind", choices=["topologies", "tournaments"])
    enumerate_cmd.add_argument("n", type=int)
    enumerate_cmd.add_argument("--iso", action="store_true", help="tournaments up to isomorphism")
    enumerate_cmd.set_defaults(handler=cmd_enumerate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ParseError as exc:
        where = getattr(args, "path", None)
        print(f"{where}: {exc}" if where else str(exc), file=sys.stderr)
        return EXIT_ERROR
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except HyperrelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
