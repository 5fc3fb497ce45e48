"""
Families of subsets of N given as decidable predicates on eventually periodic sets.
Each family carries its declared closure flags and a one-line CLI grammar.
"""

import itertools
import logging
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, List, Sequence, Tuple

from src.components.natset import (
    EMPTY,
    NATURALS,
    EventuallyPeriodicSet,
    eps_complement,
    eps_contains_tail_from,
    eps_finite,
    eps_from_progression,
    eps_intersect,
    eps_is_cofinite,
    eps_is_empty,
    eps_is_finite,
    eps_is_subset,
    eps_lower_density,
    eps_size,
    eps_union_all,
    parse_eps,
    render_eps,
)
from src.utils.errors import ParseError, PreconditionError

logger = logging.getLogger(__name__)

ODD_NUMBERS = eps_from_progression(1, 2)


class FamilyKind(Enum):
    ALL_NONEMPTY = "all-nonempty"
    UPWARD_FROM = "upward"
    FINITE_UNIONS_OF = "unions"
    TAIL = "tail"
    ODD_ONLY = "odd-only"
    INFINITE = "infinite"
    POSITIVE_LOWER_DENSITY = "lower-density>0"
    COFINITE = "cofinite"
    AT_LEAST = "at-least"


@dataclass(frozen=True)
class FamilySpec:
    """
    A family F of subsets of N.

    `generators` is used by UPWARD_FROM and FINITE_UNIONS_OF, `bound` holds
    e for TAIL and m for AT_LEAST. The three flags are declarations; use
    `family_validate_flags` to compare them with the predicate.
    """

    kind: FamilyKind
    generators: Tuple[EventuallyPeriodicSet, ...] = ()
    bound: int = 0
    include_empty: bool = False
    upward_closed: bool = True
    contains_N: bool = True
    contains_empty: bool = False

    def __str__(self) -> str:
        return render_family(self)


def all_nonempty() -> FamilySpec:
    return FamilySpec(FamilyKind.ALL_NONEMPTY)


def upward_from(generators: Iterable[EventuallyPeriodicSet]) -> FamilySpec:
    gens = tuple(generators)
    return FamilySpec(
        FamilyKind.UPWARD_FROM,
        generators=gens,
        contains_N=bool(gens),
        contains_empty=any(eps_is_empty(g) for g in gens),
    )


def finite_unions_of(
    generators: Iterable[EventuallyPeriodicSet], include_empty: bool = False
) -> FamilySpec:
    spec = FamilySpec(
        FamilyKind.FINITE_UNIONS_OF,
        generators=tuple(generators),
        include_empty=include_empty,
        upward_closed=False,
    )
    return replace(
        spec,
        contains_N=family_membership(spec, NATURALS),
        contains_empty=family_membership(spec, EMPTY),
    )


def tail(e: int) -> FamilySpec:
    if e < 1:
        raise PreconditionError(f"tail start must be >= 1, got {e}")
    return FamilySpec(FamilyKind.TAIL, bound=e)


def odd_only() -> FamilySpec:
    return FamilySpec(FamilyKind.ODD_ONLY, upward_closed=False, contains_N=False)


def infinite() -> FamilySpec:
    return FamilySpec(FamilyKind.INFINITE)


def positive_lower_density() -> FamilySpec:
    return FamilySpec(FamilyKind.POSITIVE_LOWER_DENSITY)


def cofinite() -> FamilySpec:
    return FamilySpec(FamilyKind.COFINITE)


def at_least(m: int) -> FamilySpec:
    if m < 0:
        raise PreconditionError(f"element count must be >= 0, got {m}")
    return FamilySpec(FamilyKind.AT_LEAST, bound=m, contains_empty=(m == 0))


def family_members(f: FamilySpec) -> List[EventuallyPeriodicSet]:
    """
    All members of a FINITE_UNIONS_OF family, deduplicated and sorted.

    Args:
        f: A FINITE_UNIONS_OF family

    Returns:
        List of member sets
    """
    if f.kind is not FamilyKind.FINITE_UNIONS_OF:
        raise PreconditionError("only FINITE_UNIONS_OF families have a finite member list")
    found = set()
    for r in range(1, len(f.generators) + 1):
        for combo in itertools.combinations(f.generators, r):
            found.add(eps_union_all(combo))
    if f.include_empty:
        found.add(EMPTY)
    return sorted(found, key=lambda s: s.sort_key())


def family_membership(f: FamilySpec, a: EventuallyPeriodicSet) -> bool:
    """Exact decision of A in F."""
    kind = f.kind
    if kind is FamilyKind.ALL_NONEMPTY:
        return not eps_is_empty(a)
    if kind is FamilyKind.UPWARD_FROM:
        return any(eps_is_subset(g, a) for g in f.generators)
    if kind is FamilyKind.FINITE_UNIONS_OF:
        if eps_is_empty(a):
            return f.include_empty or any(eps_is_empty(g) for g in f.generators)
        covered = eps_union_all(g for g in f.generators if eps_is_subset(g, a))
        return covered == a
    if kind is FamilyKind.TAIL:
        return eps_contains_tail_from(a, f.bound)
    if kind is FamilyKind.ODD_ONLY:
        return not eps_is_empty(a) and eps_is_subset(a, ODD_NUMBERS)
    if kind is FamilyKind.INFINITE:
        return not eps_is_finite(a)
    if kind is FamilyKind.POSITIVE_LOWER_DENSITY:
        return eps_lower_density(a) > 0
    if kind is FamilyKind.COFINITE:
        return eps_is_cofinite(a)
    if kind is FamilyKind.AT_LEAST:
        size = eps_size(a)
        return size is None or size >= f.bound
    raise PreconditionError(f"unknown family kind {kind}")


def family_interval_member(
    f: FamilySpec, lower: EventuallyPeriodicSet, upper: EventuallyPeriodicSet
) -> bool:
    """
    Whether some member A of F satisfies lower <= A <= upper.

    Args:
        f: Family to search
        lower: Set every candidate must contain
        upper: Set every candidate must be contained in

    Returns:
        True iff the interval [lower, upper] meets F
    """
    if not eps_is_subset(lower, upper):
        return False
    kind = f.kind
    if kind is FamilyKind.ODD_ONLY:
        return eps_is_subset(lower, ODD_NUMBERS) and not eps_is_empty(
            eps_intersect(upper, ODD_NUMBERS)
        )
    if kind is FamilyKind.FINITE_UNIONS_OF:
        largest = eps_union_all(g for g in f.generators if eps_is_subset(g, upper))
        if not eps_is_subset(lower, largest):
            return False
        if eps_is_empty(largest):
            return family_membership(f, EMPTY)
        return True
    if f.upward_closed:
        return family_membership(f, upper)
    raise PreconditionError(f"no interval rule for family kind {kind}")


def family_check_I(
    f: FamilySpec, samples: Sequence[Tuple[EventuallyPeriodicSet, EventuallyPeriodicSet]]
) -> bool:
    """
    Sampled check of upward closure on pairs A <= B.

    Args:
        f: Family under test
        samples: Pairs (A, B) with A a subset of B

    Returns:
        False iff some sampled A is in F while its superset B is not
    """
    for a, b in samples:
        if not eps_is_subset(a, b):
            raise PreconditionError(f"sample pair is not nested: {render_eps(a)} vs {render_eps(b)}")
        if family_membership(f, a) and not family_membership(f, b):
            logger.debug("upward closure fails for %s: %s <= %s", f, render_eps(a), render_eps(b))
            return False
    return True


def family_validate_flags(f: FamilySpec) -> bool:
    """Compare the declared N and empty-set flags with the predicate."""
    return (
        family_membership(f, NATURALS) == f.contains_N
        and family_membership(f, EMPTY) == f.contains_empty
    )


def family_transfer_holds(f: FamilySpec, a: EventuallyPeriodicSet, shifted: EventuallyPeriodicSet) -> bool:
    """The shift-transfer implication for one set: shifted in F implies a in F."""
    return not family_membership(f, shifted) or family_membership(f, a)


def render_family(f: FamilySpec) -> str:
    kind = f.kind
    if kind is FamilyKind.UPWARD_FROM:
        return "upward:[" + ";".join(render_eps(g) for g in f.generators) + "]"
    if kind is FamilyKind.FINITE_UNIONS_OF:
        text = "unions:[" + ";".join(render_eps(g) for g in f.generators) + "]"
        return text + ("+empty" if f.include_empty else "")
    if kind is FamilyKind.TAIL:
        return f"tail:{f.bound}"
    if kind is FamilyKind.AT_LEAST:
        return f"at-least:{f.bound}"
    return kind.value


_BRACKETED = re.compile(r"^(upward|unions):\[(.*)\](\+empty)?$")


def parse_family(text: str) -> FamilySpec:
    """
    Parse the CLI family grammar.

    Args:
        text: e.g. `all-nonempty`, `tail:3`, `upward:[N\\{1}]`, `unions:[3N;(1+3·N0)]+empty`

    Returns:
        FamilySpec with flags derived from the kind
    """
    text = text.strip()
    simple = {
        "all-nonempty": all_nonempty,
        "odd-only": odd_only,
        "infinite": infinite,
        "cofinite": cofinite,
        "lower-density>0": positive_lower_density,
    }
    if text in simple:
        return simple[text]()
    for name, factory in (("tail:", tail), ("at-least:", at_least)):
        if text.startswith(name):
            value = text[len(name):].strip()
            if not value.isdigit():
                raise ParseError(f"expected an integer after {name!r} in {text!r}")
            try:
                return factory(int(value))
            except PreconditionError as exc:
                raise ParseError(str(exc)) from exc
    match = _BRACKETED.match(text)
    if match:
        kind, body, empty_flag = match.groups()
        gens = [parse_eps(part) for part in body.split(";") if part.strip()]
        if kind == "upward":
            if empty_flag:
                raise ParseError("+empty only applies to unions families")
            return upward_from(gens)
        return finite_unions_of(gens, include_empty=bool(empty_flag))
    raise ParseError(f"unknown family expression {text!r}")


def standard_families() -> List[FamilySpec]:
    """Built-in families used by the exhaustive sweeps."""
    return [
        all_nonempty(),
        odd_only(),
        infinite(),
        cofinite(),
        tail(2),
        at_least(2),
        upward_from([eps_complement(eps_finite([1]))]),
        finite_unions_of(
            [eps_from_progression(2, 2), eps_from_progression(1, 2)], include_empty=True
        ),
    ]
