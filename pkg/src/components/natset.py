"""
Eventually periodic subsets of N = {1, 2, ...}.
Exact boolean algebra, shifts, densities and the text grammar used in reports.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import ParseError, PreconditionError


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """
    A subset A of N whose membership is periodic beyond a threshold.

    Position n <= threshold is a member iff prefix[n - 1]; position
    n > threshold is a member iff residues[(n - threshold - 1) % period].
    Instances are normalised to the canonical form (minimal period, then
    minimal threshold) on construction, so field equality is set equality.
    """

    threshold: int
    prefix: Tuple[bool, ...]
    period: int
    residues: Tuple[bool, ...]

    def __post_init__(self):
        if self.period < 1:
            raise PreconditionError(f"period must be >= 1, got {self.period}")
        if len(self.prefix) != self.threshold:
            raise PreconditionError("prefix length must equal threshold")
        if len(self.residues) != self.period:
            raise PreconditionError("residues length must equal period")
        prefix, residues = _canonical_fields(self.prefix, self.residues)
        object.__setattr__(self, "threshold", len(prefix))
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", len(residues))
        object.__setattr__(self, "residues", residues)

    def __contains__(self, n: int) -> bool:
        return eps_contains(self, n)

    def __str__(self) -> str:
        return render_eps(self)

    def membership(self, upto: int) -> np.ndarray:
        """Boolean membership vector for positions 1..upto."""
        return _membership(self, np.arange(1, upto + 1))

    def window(self, threshold: int, period: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Re-express the set with a larger threshold and a multiple of its period.

        Args:
            threshold: New threshold, at least the current one
            period: New period, a multiple of the current one

        Returns:
            Tuple of (prefix bits, residue bits) as numpy arrays
        """
        if threshold < self.threshold or period % self.period:
            raise PreconditionError("window must extend threshold and refine period")
        prefix = _membership(self, np.arange(1, threshold + 1))
        residues = _membership(self, np.arange(threshold + 1, threshold + period + 1))
        return prefix, residues

    def sort_key(self) -> Tuple:
        return (self.period, self.threshold, self.residues, self.prefix)


def _canonical_fields(
    prefix: Sequence[bool], residues: Sequence[bool]
) -> Tuple[Tuple[bool, ...], Tuple[bool, ...]]:
    prefix = [bool(b) for b in prefix]
    residues = [bool(b) for b in residues]
    p = len(residues)
    for d in range(1, p + 1):
        if p % d == 0 and all(residues[i] == residues[i % d] for i in range(p)):
            residues = residues[:d]
            break
    # rotating the tail left by one absorbs a prefix bit equal to the last residue
    while prefix and prefix[-1] == residues[-1]:
        residues = [prefix.pop()] + residues[:-1]
    return tuple(prefix), tuple(residues)


def _membership(a: EventuallyPeriodicSet, positions: np.ndarray) -> np.ndarray:
    positions = np.asarray(positions, dtype=np.int64)
    out = np.zeros(positions.shape, dtype=bool)
    prefix = np.array(a.prefix, dtype=bool)
    residues = np.array(a.residues, dtype=bool)
    head = (positions >= 1) & (positions <= a.threshold)
    tail = positions > a.threshold
    if head.any():
        out[head] = prefix[positions[head] - 1]
    if tail.any():
        out[tail] = residues[(positions[tail] - a.threshold - 1) % a.period]
    return out


def eps_from_pattern(
    prefix_bits: Iterable[bool], cycle_bits: Iterable[bool]
) -> EventuallyPeriodicSet:
    """
    Build a set from explicit membership bits.

    Args:
        prefix_bits: Membership of positions 1..T
        cycle_bits: Membership of positions T+1..T+p, repeated forever

    Returns:
        Canonical EventuallyPeriodicSet
    """
    prefix = tuple(bool(b) for b in prefix_bits)
    cycle = tuple(bool(b) for b in cycle_bits)
    if not cycle:
        raise PreconditionError("cycle must be nonempty")
    return EventuallyPeriodicSet(len(prefix), prefix, len(cycle), cycle)


def eps_from_progression(a: int, d: int) -> EventuallyPeriodicSet:
    """
    The progression {a + k*d : k >= 0} intersected with N.

    Args:
        a: Start value, a >= 0
        d: Step, d >= 1

    Returns:
        Canonical EventuallyPeriodicSet
    """
    if d < 1:
        raise PreconditionError(f"progression step must be >= 1, got {d}")
    if a < 0:
        raise PreconditionError(f"progression start must be >= 0, got {a}")
    prefix = [n == a for n in range(1, a + 1)]
    cycle = [r == d - 1 for r in range(d)]
    return eps_from_pattern(prefix, cycle)


def eps_finite(elements: Iterable[int]) -> EventuallyPeriodicSet:
    """Finite set of positive integers."""
    members = sorted(set(int(e) for e in elements))
    if members and members[0] < 1:
        raise PreconditionError(f"elements must be >= 1, got {members[0]}")
    top = members[-1] if members else 0
    chosen = set(members)
    return eps_from_pattern([n in chosen for n in range(1, top + 1)], [False])


EMPTY = eps_from_pattern([], [False])
NATURALS = eps_from_pattern([], [True])


def _common_window(*sets: EventuallyPeriodicSet) -> Tuple[int, int]:
    threshold = max(s.threshold for s in sets)
    period = math.lcm(*(s.period for s in sets))
    return threshold, period


def eps_union(a: EventuallyPeriodicSet, b: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    threshold, period = _common_window(a, b)
    a_pre, a_res = a.window(threshold, period)
    b_pre, b_res = b.window(threshold, period)
    return eps_from_pattern(a_pre | b_pre, a_res | b_res)


def eps_intersect(
    a: EventuallyPeriodicSet, b: EventuallyPeriodicSet
) -> EventuallyPeriodicSet:
    threshold, period = _common_window(a, b)
    a_pre, a_res = a.window(threshold, period)
    b_pre, b_res = b.window(threshold, period)
    return eps_from_pattern(a_pre & b_pre, a_res & b_res)


def eps_complement(a: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    return eps_from_pattern(
        [not b for b in a.prefix], [not b for b in a.residues]
    )


def eps_union_all(sets: Iterable[EventuallyPeriodicSet]) -> EventuallyPeriodicSet:
    result = EMPTY
    for s in sets:
        result = eps_union(result, s)
    return result


def eps_shift(a: EventuallyPeriodicSet, n: int) -> EventuallyPeriodicSet:
    """
    The shifted set A - n = {k - n : k in A, k > n}.

    Args:
        a: Set to shift
        n: Shift amount, n >= 0

    Returns:
        Canonical EventuallyPeriodicSet
    """
    if n < 0:
        raise PreconditionError(f"shift must be >= 0, got {n}")
    threshold = max(a.threshold - n, 0)
    prefix = _membership(a, np.arange(1, threshold + 1) + n)
    residues = _membership(a, np.arange(threshold + 1, threshold + a.period + 1) + n)
    return eps_from_pattern(prefix, residues)


def eps_translate(a: EventuallyPeriodicSet, n: int) -> EventuallyPeriodicSet:
    """The translated set A + n = {k + n : k in A}."""
    if n < 0:
        raise PreconditionError(f"translation must be >= 0, got {n}")
    return eps_from_pattern((False,) * n + a.prefix, a.residues)


def eps_plus_multiples(a: EventuallyPeriodicSet, d: int) -> EventuallyPeriodicSet:
    """
    The set A + dN = {k + d*m : k in A, m >= 1}.

    Each residue class mod d contributes a progression starting d above its
    smallest member.
    """
    if d < 1:
        raise PreconditionError(f"step must be >= 1, got {d}")
    horizon = a.threshold + math.lcm(a.period, d)
    members = np.flatnonzero(a.membership(horizon)) + 1
    firsts = {}
    for k in members:
        firsts.setdefault(int(k) % d, int(k))
    return eps_union_all(eps_from_progression(k + d, d) for k in firsts.values())


def eps_contains(a: EventuallyPeriodicSet, n: int) -> bool:
    if n < 1:
        return False
    if n <= a.threshold:
        return a.prefix[n - 1]
    return a.residues[(n - a.threshold - 1) % a.period]


def eps_is_empty(a: EventuallyPeriodicSet) -> bool:
    return not any(a.prefix) and not any(a.residues)


def eps_is_finite(a: EventuallyPeriodicSet) -> bool:
    return not any(a.residues)


def eps_is_cofinite(a: EventuallyPeriodicSet) -> bool:
    return all(a.residues)


def eps_is_subset(a: EventuallyPeriodicSet, b: EventuallyPeriodicSet) -> bool:
    return eps_is_empty(eps_intersect(a, eps_complement(b)))


def eps_contains_tail_from(a: EventuallyPeriodicSet, e: int) -> bool:
    """Whether {n in N : n >= e} is contained in A."""
    if e < 1:
        raise PreconditionError(f"tail start must be >= 1, got {e}")
    return all(a.residues) and all(a.prefix[e - 1:])


def eps_lower_density(a: EventuallyPeriodicSet) -> Fraction:
    return Fraction(sum(a.residues), a.period)


def eps_size(a: EventuallyPeriodicSet) -> Optional[int]:
    """Number of elements, or None when the set is infinite."""
    if not eps_is_finite(a):
        return None
    return sum(a.prefix)


def eps_elements_upto(a: EventuallyPeriodicSet, m: int) -> List[int]:
    return [int(k) + 1 for k in np.flatnonzero(a.membership(m))]


def eps_min(a: EventuallyPeriodicSet) -> Optional[int]:
    found = eps_elements_upto(a, a.threshold + a.period)
    return found[0] if found else None


def render_eps(a: EventuallyPeriodicSet) -> str:
    """
    Render a set in the report grammar.

    Args:
        a: Set to render

    Returns:
        One of EMPTY, N, N\\{...}, {...}, or a union of a finite part and
        progressions (b+p·N0)
    """
    if eps_is_empty(a):
        return "EMPTY"
    if a == NATURALS:
        return "N"
    listed = [n for n in range(1, a.threshold + 1) if a.prefix[n - 1]]
    if eps_is_cofinite(a):
        missing = [n for n in range(1, a.threshold + 1) if not a.prefix[n - 1]]
        return "N\\{" + ",".join(str(n) for n in missing) + "}"
    if eps_is_finite(a):
        return "{" + ",".join(str(n) for n in listed) + "}"
    parts = []
    if listed:
        parts.append("{" + ",".join(str(n) for n in listed) + "}")
    for r, bit in enumerate(a.residues):
        if bit:
            parts.append(f"({a.threshold + 1 + r}+{a.period}·N0)")
    return " ∪ ".join(parts)


_UNION_SPLIT = re.compile(r"\s*(?:∪|\|)\s*|\s+U\s+")
_FINITE = re.compile(r"^\{\s*([0-9,\s]*)\}$")
_COFINITE = re.compile(r"^N\s*\\\s*\{\s*([0-9,\s]*)\}$")
_PROGRESSION = re.compile(r"^\(?\s*([0-9]+)\s*\+\s*([0-9]+)\s*[·*]\s*N0\s*\)?$")
_MULTIPLES = re.compile(r"^([0-9]+)\s*[·*]?\s*N$")


def _parse_numbers(body: str, text: str) -> List[int]:
    numbers = [int(tok) for tok in body.replace(",", " ").split()]
    if any(k < 1 for k in numbers):
        raise ParseError(f"set elements must be >= 1 in {text!r}")
    return numbers


def parse_eps(text: str) -> EventuallyPeriodicSet:
    """
    Parse the report grammar back into a set.

    Accepts `*` for `·` and `|` or ` U ` for `∪`, plus the shorthand `dN`.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty set expression")
    result = EMPTY
    for term in _UNION_SPLIT.split(text):
        term = term.strip()
        if term == "EMPTY":
            piece = EMPTY
        elif term == "N":
            piece = NATURALS
        elif _COFINITE.match(term):
            body = _COFINITE.match(term).group(1)
            piece = eps_complement(eps_finite(_parse_numbers(body, text)))
        elif _FINITE.match(term):
            piece = eps_finite(_parse_numbers(_FINITE.match(term).group(1), text))
        elif _PROGRESSION.match(term):
            start, step = _PROGRESSION.match(term).groups()
            if int(step) < 1:
                raise ParseError(f"progression step must be >= 1 in {text!r}")
            piece = eps_from_progression(int(start), int(step))
        elif _MULTIPLES.match(term):
            step = int(_MULTIPLES.match(term).group(1))
            if step < 1:
                raise ParseError(f"multiple must be >= 1 in {text!r}")
            piece = eps_from_progression(0, step)
        else:
            raise ParseError(f"cannot parse set term {term!r}")
        result = eps_union(result, piece)
    return result
