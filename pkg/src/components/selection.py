"""
Search for selections y_n in C_n whose visit sets {n : y_n in V} all belong to a family.

Every strong decider reduces to one SelectionProblem: the candidate symbols at
each time (nodes, or node tuples for disjoint properties) form an eventually
periodic sequence, and each symbol is classified by the bitmask of targets it
lies in (its type). The search is exact per family kind; the only incomplete
outcome is an exhausted backtracking budget.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from src.components.family import FamilyKind, FamilySpec, family_members, family_membership
from src.components.natset import (
    EMPTY,
    EventuallyPeriodicSet,
    eps_from_pattern,
    eps_is_subset,
)

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 200000

Symbol = Union[int, Tuple[int, ...]]
TypeTable = Dict[int, Symbol]


class Status(Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SelectionSchedule:
    """Chosen symbol y_n: prefix[n - 1] up to the horizon, then the cycle repeats."""

    prefix: Tuple[Symbol, ...]
    cycle: Tuple[Symbol, ...]

    @property
    def horizon(self) -> int:
        return len(self.prefix)

    def at(self, n: int) -> Symbol:
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]


@dataclass(frozen=True)
class SelectionProblem:
    """
    Candidate symbols at times 1..T (prefix) and T+1.. (cycle, repeating).

    classify maps a symbol to the bitmask of the target_count targets it lies in.
    """

    prefix: Tuple[Tuple[Symbol, ...], ...]
    cycle: Tuple[Tuple[Symbol, ...], ...]
    target_count: int
    classify: Callable[[Symbol], int] = field(compare=False)

    def symbols_at(self, n: int) -> Tuple[Symbol, ...]:
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]


@dataclass(frozen=True)
class SelectionOutcome:
    status: Status
    schedule: Optional[SelectionSchedule] = None
    reason: str = ""
    blocking: Tuple[int, ...] = ()


class _BudgetExhausted(Exception):
    pass


def _bits(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


class SelectionSearch:
    """One exact search over a SelectionProblem for a family."""

    def __init__(
        self,
        problem: SelectionProblem,
        family: FamilySpec,
        budget: int = DEFAULT_SEARCH_BUDGET,
    ):
        self.problem = problem
        self.family = family
        self.budget = budget
        self.nodes_visited = 0
        self.threshold = len(problem.prefix)
        self.period = len(problem.cycle)
        self.full = (1 << problem.target_count) - 1
        self._prefix_types = [self._type_table(s) for s in problem.prefix]
        self._cycle_types = [self._type_table(s) for s in problem.cycle]

    def _type_table(self, symbols: Sequence[Symbol]) -> TypeTable:
        table: TypeTable = {}
        for symbol in sorted(symbols):
            table.setdefault(self.problem.classify(symbol), symbol)
        return table

    def types_at(self, n: int) -> TypeTable:
        if n <= self.threshold:
            return self._prefix_types[n - 1]
        return self._cycle_types[(n - self.threshold - 1) % self.period]

    def _tick(self) -> None:
        self.nodes_visited += 1
        if self.nodes_visited > self.budget:
            raise _BudgetExhausted()

    def hit_set(self, target: int) -> EventuallyPeriodicSet:
        """Times at which some candidate symbol lies in the target."""
        return eps_from_pattern(
            [any(t >> target & 1 for t in table) for table in self._prefix_types],
            [any(t >> target & 1 for t in table) for table in self._cycle_types],
        )

    def forced_set(self, target: int) -> EventuallyPeriodicSet:
        """Times at which every candidate symbol lies in the target."""
        return eps_from_pattern(
            [all(t >> target & 1 for t in table) for table in self._prefix_types],
            [all(t >> target & 1 for t in table) for table in self._cycle_types],
        )

    def run(self) -> SelectionOutcome:
        for n in range(1, self.threshold + self.period + 1):
            if not self.types_at(n):
                return SelectionOutcome(Status.NO, reason=f"no candidate at n={n}")
        kind = self.family.kind
        try:
            if kind in (
                FamilyKind.ALL_NONEMPTY,
                FamilyKind.AT_LEAST,
                FamilyKind.INFINITE,
                FamilyKind.POSITIVE_LOWER_DENSITY,
                FamilyKind.ODD_ONLY,
            ):
                outcome = self._solve_cover()
            elif kind in (FamilyKind.COFINITE, FamilyKind.TAIL):
                outcome = self._solve_tail()
            else:
                outcome = self._solve_assignment()
        except _BudgetExhausted:
            logger.debug("selection search stopped after %d nodes", self.nodes_visited)
            return SelectionOutcome(
                Status.UNKNOWN, reason=f"search budget of {self.budget} nodes exhausted"
            )
        if outcome.status is Status.YES and not self.verify(outcome.schedule):
            logger.error("selection for %s failed re-verification", self.family)
            return SelectionOutcome(Status.UNKNOWN, reason="schedule failed re-verification")
        return outcome

    def realized_sets(self, schedule: SelectionSchedule) -> List[EventuallyPeriodicSet]:
        """{n : y_n lies in target i} for every target i."""
        classify = self.problem.classify
        head = [classify(y) for y in schedule.prefix]
        tail = [classify(y) for y in schedule.cycle]
        return [
            eps_from_pattern([t >> i & 1 for t in head], [t >> i & 1 for t in tail])
            for i in range(self.problem.target_count)
        ]

    def verify(self, schedule: SelectionSchedule) -> bool:
        """Each y_n is a candidate at n, and every realized set is in the family."""
        span = max(schedule.horizon, self.threshold) + math.lcm(len(schedule.cycle), self.period)
        for n in range(1, span + 1):
            if schedule.at(n) not in self.problem.symbols_at(n):
                return False
        return all(family_membership(self.family, r) for r in self.realized_sets(schedule))

    def _default(self, table: TypeTable) -> Symbol:
        return min(table.values())

    def _solve_cover(self) -> SelectionOutcome:
        period = self.period
        odd_only = self.family.kind is FamilyKind.ODD_ONLY
        if odd_only:
            period = math.lcm(period, 2)

        def allowed(n: int) -> TypeTable:
            table = self.types_at(n)
            if odd_only and n % 2 == 0:
                return {0: table[0]} if 0 in table else {}
            return table

        head = [allowed(n) for n in range(1, self.threshold + 1)]
        tail = [allowed(n) for n in range(self.threshold + 1, self.threshold + period + 1)]
        for n, table in enumerate(head + tail, start=1):
            if not table:
                return SelectionOutcome(
                    Status.NO, reason=f"every candidate at even n={n} lies in some target"
                )

        dedicated: Dict[int, Tuple[int, int]] = {}
        for r, table in enumerate(tail):
            for t in table:
                for i in _bits(t):
                    dedicated.setdefault(i, (r, t))
        residual = [i for i in range(self.problem.target_count) if i not in dedicated]

        kind = self.family.kind
        if kind in (FamilyKind.INFINITE, FamilyKind.POSITIVE_LOWER_DENSITY) and residual:
            return SelectionOutcome(
                Status.NO,
                reason="targets met only finitely often",
                blocking=tuple(residual),
            )
        need = self.family.bound if kind is FamilyKind.AT_LEAST else 1
        demand = {i: need for i in residual if need > 0}
        chosen = self._cover_prefix(head, demand)
        if chosen is None:
            return SelectionOutcome(
                Status.NO,
                reason="targets met only before the periodic part cannot all be served",
                blocking=tuple(sorted(demand)),
            )

        prefix = tuple(
            head[k][chosen[k]] if k in chosen else self._default(head[k]) for k in range(len(head))
        )
        order = sorted(dedicated)
        cycle = []
        for block in range(max(1, len(order))):
            for r, table in enumerate(tail):
                symbol = self._default(table)
                if order:
                    pos, t = dedicated[order[block]]
                    if pos == r:
                        symbol = table[t]
                cycle.append(symbol)
        return SelectionOutcome(Status.YES, schedule=SelectionSchedule(prefix, tuple(cycle)))

    def _cover_prefix(
        self, slots: List[TypeTable], demand: Dict[int, int]
    ) -> Optional[Dict[int, int]]:
        """Assign types to distinct prefix slots until every demand is met."""
        chosen: Dict[int, int] = {}

        def search(remaining: Dict[int, int]) -> bool:
            self._tick()
            pending = [i for i, d in remaining.items() if d > 0]
            if not pending:
                return True
            pending_mask = sum(1 << i for i in pending)
            options = {
                i: [
                    k
                    for k in range(len(slots))
                    if k not in chosen and any(t >> i & 1 for t in slots[k])
                ]
                for i in pending
            }
            target = min(pending, key=lambda i: (len(options[i]), i))
            if len(options[target]) < remaining[target]:
                return False
            for k in options[target]:
                for t in self._maximal_types(slots[k], target, pending_mask):
                    chosen[k] = t
                    after = {
                        i: d - 1 if t >> i & 1 else d for i, d in remaining.items() if d > 0
                    }
                    if search(after):
                        return True
                    del chosen[k]
            return False

        return dict(chosen) if search(dict(demand)) else None

    @staticmethod
    def _maximal_types(table: TypeTable, target: int, pending_mask: int) -> List[int]:
        seen: Dict[int, int] = {}
        for t in sorted(table):
            if t >> target & 1:
                seen.setdefault(t & pending_mask, t)
        keys = list(seen)
        maximal = [a for a in keys if not any(a != b and a & b == a for b in keys)]
        return [seen[a] for a in sorted(maximal, key=lambda a: (-bin(a).count("1"), a))]

    def _solve_tail(self) -> SelectionOutcome:
        start = self.threshold + 1
        if self.family.kind is FamilyKind.TAIL:
            start = min(self.family.bound, start)
        for n in range(start, self.threshold + self.period + 1):
            table = self.types_at(n)
            if self.full not in table:
                best = max(table, key=lambda t: (bin(t).count("1"), -t))
                return SelectionOutcome(
                    Status.NO,
                    reason=f"no candidate lies in every target at n={n}",
                    blocking=tuple(_bits(self.full & ~best)),
                )
        prefix = tuple(
            self.types_at(n)[self.full] if n >= start else self._default(self.types_at(n))
            for n in range(1, self.threshold + 1)
        )
        cycle = tuple(
            self.types_at(n)[self.full]
            for n in range(self.threshold + 1, self.threshold + self.period + 1)
        )
        return SelectionOutcome(Status.YES, schedule=SelectionSchedule(prefix, cycle))

    def _candidates(self, target: int) -> List[EventuallyPeriodicSet]:
        hit = self.hit_set(target)
        if self.family.kind is FamilyKind.UPWARD_FROM:
            fits = {g for g in self.family.generators if eps_is_subset(g, hit)}
            minimal = [g for g in fits if not any(h != g and eps_is_subset(h, g) for h in fits)]
            return sorted(minimal, key=lambda s: s.sort_key())
        forced = self.forced_set(target)
        return [
            a
            for a in family_members(self.family)
            if eps_is_subset(forced, a) and eps_is_subset(a, hit)
        ]

    def _solve_assignment(self) -> SelectionOutcome:
        upward = self.family.kind is FamilyKind.UPWARD_FROM
        targets = list(range(self.problem.target_count))
        candidates = {i: self._candidates(i) for i in targets}
        stuck = tuple(i for i in targets if not candidates[i])
        if stuck:
            return SelectionOutcome(
                Status.NO, reason="no family member fits inside the hit set", blocking=stuck
            )
        every = [a for c in candidates.values() for a in c] or [EMPTY]
        threshold = max([self.threshold] + [a.threshold for a in every])
        period = math.lcm(self.period, *(a.period for a in every))
        span = threshold + period
        tables = [sorted(self.types_at(n)) for n in range(1, span + 1)]
        member = {
            (i, k): [int(b) << i for b in a.membership(span)]
            for i in targets
            for k, a in enumerate(candidates[i])
        }
        order = sorted(targets, key=lambda i: (len(candidates[i]), i))
        required = [0] * span

        def feasible(assigned: int) -> bool:
            for n in range(span):
                need = required[n]
                if upward:
                    ok = any(t & need == need for t in tables[n])
                else:
                    ok = any(t & assigned == need for t in tables[n])
                if not ok:
                    return False
            return True

        def search(depth: int, assigned: int) -> bool:
            self._tick()
            if depth == len(order):
                return True
            i = order[depth]
            for k in range(len(candidates[i])):
                bits = member[(i, k)]
                for n in range(span):
                    required[n] |= bits[n]
                if feasible(assigned | 1 << i) and search(depth + 1, assigned | 1 << i):
                    return True
                for n in range(span):
                    required[n] &= ~bits[n]
            return False

        if not search(0, 0):
            return SelectionOutcome(
                Status.NO,
                reason="no assignment of family members to targets is realizable at every time",
                blocking=tuple(order),
            )
        picks = []
        for n in range(span):
            need = required[n]
            table = self.types_at(n + 1)
            fits = [t for t in tables[n] if (t & need == need if upward else t == need)]
            picks.append(table[fits[0]])
        return SelectionOutcome(
            Status.YES,
            schedule=SelectionSchedule(tuple(picks[:threshold]), tuple(picks[threshold:])),
        )


def search_selection(
    problem: SelectionProblem, family: FamilySpec, budget: int = DEFAULT_SEARCH_BUDGET
) -> SelectionOutcome:
    """Run one exact selection search."""
    return SelectionSearch(problem, family, budget).run()
