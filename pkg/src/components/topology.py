"""
Finite topological spaces on the node set {0, ..., n-1}.
Opens are int bitmasks; validation, standard topologies, enumeration and sampling.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from src.utils.errors import (
    GuardExceeded,
    MissingEmptyOrFull,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
    ParseError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 4

NodeSet = Union[int, Iterable[int]]


def nodes_to_mask(nodes: NodeSet) -> int:
    """Accept a bitmask or an iterable of node indices."""
    if isinstance(nodes, (int, np.integer)):
        return int(nodes)
    mask = 0
    for i in nodes:
        mask |= 1 << int(i)
    return mask


def mask_to_nodes(mask: int) -> FrozenSet[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def _open_order(mask: int) -> Tuple[int, int]:
    return (bin(mask).count("1"), mask)


@dataclass(frozen=True)
class FiniteTopology:
    """Validated topology; build it with topology_validate or the helpers below."""

    n: int
    opens: Tuple[int, ...]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def nonempty_opens(self) -> Tuple[int, ...]:
        return tuple(u for u in self.opens if u)

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def open_sets(self) -> List[FrozenSet[int]]:
        return [mask_to_nodes(u) for u in self.opens]


def _closure_witness(opens: Sequence[int]) -> Tuple[str, int, int]:
    present = set(opens)
    for a, b in itertools.combinations(sorted(present, key=_open_order), 2):
        if a | b not in present:
            return "union", a, b
    for a, b in itertools.combinations(sorted(present, key=_open_order), 2):
        if a & b not in present:
            return "intersection", a, b
    return "", 0, 0


def topology_validate(n: int, opens: Iterable[NodeSet]) -> FiniteTopology:
    """
    Validate a collection of opens and return it canonically ordered.

    Args:
        n: Number of nodes, n >= 1
        opens: Open sets as bitmasks or node iterables

    Returns:
        FiniteTopology with opens sorted by (popcount, value)
    """
    if n < 1:
        raise PreconditionError(f"topology needs at least one node, got {n}")
    full = (1 << n) - 1
    masks = set()
    for u in opens:
        mask = nodes_to_mask(u)
        if mask & ~full or mask < 0:
            raise PreconditionError(f"open set {sorted(mask_to_nodes(mask))} is out of range for n={n}")
        masks.add(mask)
    if 0 not in masks or full not in masks:
        raise MissingEmptyOrFull(f"topology on {n} nodes must contain the empty set and the full set")
    kind, a, b = _closure_witness(list(masks))
    if kind == "union":
        raise NotClosedUnderUnion(a, b)
    if kind == "intersection":
        raise NotClosedUnderIntersection(a, b)
    return FiniteTopology(n, tuple(sorted(masks, key=_open_order)))


def topology_discrete(n: int) -> FiniteTopology:
    if n < 1:
        raise PreconditionError(f"topology needs at least one node, got {n}")
    return FiniteTopology(n, tuple(sorted(range(1 << n), key=_open_order)))


def topology_antidiscrete(n: int) -> FiniteTopology:
    if n < 1:
        raise PreconditionError(f"topology needs at least one node, got {n}")
    return FiniteTopology(n, (0, (1 << n) - 1))


def topology_generated_by(n: int, generators: Iterable[NodeSet]) -> FiniteTopology:
    """Smallest topology on n nodes containing the generators."""
    full = (1 << n) - 1
    opens = {0, full} | {nodes_to_mask(g) & full for g in generators}
    frontier = set(opens)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in list(opens):
                for c in (a | b, a & b):
                    if c not in opens:
                        fresh.add(c)
        opens |= fresh
        frontier = fresh
    return FiniteTopology(n, tuple(sorted(opens, key=_open_order)))


@lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> Tuple[FiniteTopology, ...]:
    full = (1 << n) - 1
    middle = list(range(1, full))
    found = []
    for choice in range(1 << len(middle)):
        opens = [0, full] + [middle[i] for i in range(len(middle)) if choice >> i & 1]
        present = set(opens)
        closed = True
        for a in opens:
            for b in opens:
                if a | b not in present or a & b not in present:
                    closed = False
                    break
            if not closed:
                break
        if closed:
            found.append(FiniteTopology(n, tuple(sorted(opens, key=_open_order))))
    logger.debug("enumerated %d topologies on %d nodes", len(found), n)
    return tuple(found)


def topology_enumerate_all(n: int) -> Iterator[FiniteTopology]:
    """
    Every labeled topology on n <= 4 points exactly once.

    Candidates are all collections of proper nonempty subsets, in increasing
    order of their selection bitmask, filtered by the closure axioms.
    """
    if n < 1:
        raise PreconditionError(f"topology needs at least one node, got {n}")
    if n > ENUMERATION_LIMIT:
        raise GuardExceeded(
            f"exhaustive topology enumeration is limited to n <= {ENUMERATION_LIMIT}; "
            "use sample_topologies for larger n"
        )
    return iter(_enumerate_cached(n))


def topologies_generated_by_at_most(n: int, k: int) -> List[FiniteTopology]:
    """All distinct topologies generated by at most k nonempty proper subsets."""
    full = (1 << n) - 1
    seen = {}
    for r in range(0, k + 1):
        for gens in itertools.combinations(range(1, full), r):
            top = topology_generated_by(n, gens)
            seen.setdefault(top.opens, top)
    return [seen[key] for key in sorted(seen, key=lambda opens: (len(opens), opens))]


def sample_topologies(
    n: int, count: int, seed: int = 0, max_generators: int = 3
) -> List[FiniteTopology]:
    """
    Draw topologies generated by at most max_generators random subsets.

    Args:
        n: Number of nodes
        count: Number of draws (duplicates are dropped)
        seed: Seed for numpy's default_rng
        max_generators: Largest generating family drawn

    Returns:
        Distinct topologies in draw order; discrete and anti-discrete come first
    """
    rng = np.random.default_rng(seed)
    full = (1 << n) - 1
    picked = [topology_discrete(n), topology_antidiscrete(n)]
    seen = {t.opens for t in picked}
    for _ in range(count):
        k = int(rng.integers(1, max_generators + 1))
        gens = [int(g) for g in rng.integers(1, full + 1, size=k)]
        top = topology_generated_by(n, gens)
        if top.opens not in seen:
            seen.add(top.opens)
            picked.append(top)
    return picked


def topology_to_text(top: FiniteTopology) -> List[str]:
    """One `open:` line per open set, nodes numbered from 1."""
    lines = []
    for u in top.opens:
        nodes = " ".join(str(i + 1) for i in sorted(mask_to_nodes(u)))
        lines.append(f"open: {nodes}".rstrip())
    return lines


def topology_from_text(n: int, lines: Iterable[Tuple[int, str]]) -> FiniteTopology:
    """
    Parse numbered `open:` lines.

    Args:
        n: Number of nodes
        lines: Pairs of (1-based line number, line text)

    Returns:
        Validated FiniteTopology
    """
    opens = []
    for number, text in lines:
        body = text.split(":", 1)[1] if ":" in text else ""
        try:
            nodes = [int(tok) - 1 for tok in body.split()]
        except ValueError as exc:
            raise ParseError(f"bad node index in {text.strip()!r}", number) from exc
        if any(i < 0 or i >= n for i in nodes):
            raise ParseError(f"node index out of range 1..{n}", number)
        opens.append(nodes_to_mask(nodes))
    return topology_validate(n, opens)
