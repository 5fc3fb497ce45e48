"""
Binary relations on a finite node set as boolean matrices.
Composition, powers and their eventual periodicity, return-time sets and a walk oracle.

Matrix convention: bits[i, j] is True iff (x_i, x_j) is in the relation, and
compose(sigma, rho) applies rho first, so its matrix is rho.bits @ sigma.bits.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.components.natset import EventuallyPeriodicSet, eps_from_pattern
from src.components.topology import mask_to_nodes, nodes_to_mask
from src.utils.errors import DimensionMismatch, GuardExceeded, PreconditionError
from src.utils.performance_helpers import cached_computation

logger = logging.getLogger(__name__)

S_COLLECTION_LIMIT = 10


class BooleanRelation:
    """Immutable n x n boolean matrix, hashable by value."""

    def __init__(self, bits):
        matrix = np.array(bits, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"relation matrix must be square, got shape {matrix.shape}")
        if matrix.shape[0] < 1:
            raise PreconditionError("relation needs at least one node")
        matrix.setflags(write=False)
        self.bits = matrix
        self.n = matrix.shape[0]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "BooleanRelation":
        bits = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise PreconditionError(f"pair ({i}, {j}) out of range for n={n}")
            bits[i, j] = True
        return cls(bits)

    @classmethod
    def identity(cls, n: int) -> "BooleanRelation":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "BooleanRelation":
        return cls(np.zeros((n, n), dtype=bool))

    def pairs(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.bits))]

    def row_masks(self) -> List[int]:
        """Successor set of every node as a bitmask."""
        weights = 1 << np.arange(self.n, dtype=np.int64)
        return [int(v) for v in (self.bits.astype(np.int64) @ weights)]

    def image(self, mask: int) -> int:
        out = 0
        for i, row in enumerate(self.row_masks()):
            if mask >> i & 1:
                out |= row
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanRelation):
            return NotImplemented
        return self.n == other.n and self.bits.tobytes() == other.bits.tobytes()

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BooleanRelation(n={self.n}, bits={np.packbits(self.bits).tobytes().hex()})"


def _check_same_size(*relations: BooleanRelation) -> int:
    sizes = {r.n for r in relations}
    if len(sizes) != 1:
        raise DimensionMismatch(f"relations have different node counts: {sorted(sizes)}")
    return sizes.pop()


def _bool_product(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return (left.astype(np.int64) @ right.astype(np.int64)) > 0


def rel_compose(sigma: BooleanRelation, rho: BooleanRelation) -> BooleanRelation:
    """sigma after rho: (x, t) iff some y has x rho y and y sigma t."""
    _check_same_size(sigma, rho)
    return BooleanRelation(_bool_product(rho.bits, sigma.bits))


def rel_inverse(rho: BooleanRelation) -> BooleanRelation:
    return BooleanRelation(rho.bits.T)


def rel_power(rho: BooleanRelation, k: int) -> BooleanRelation:
    """k-fold composition; the zeroth power is the identity."""
    if k < 0:
        raise PreconditionError(f"power must be >= 0, got {k}")
    if k == 0:
        return BooleanRelation.identity(rho.n)
    return BooleanRelation(rel_power_trace(rho).power(k))


def rel_domain(rho: BooleanRelation) -> FrozenSet[int]:
    return frozenset(int(i) for i in np.flatnonzero(rho.bits.any(axis=1)))


def rel_range(rho: BooleanRelation) -> FrozenSet[int]:
    return frozenset(int(j) for j in np.flatnonzero(rho.bits.any(axis=0)))


def rel_image(rho: BooleanRelation, nodes: Iterable[int]) -> FrozenSet[int]:
    return mask_to_nodes(rho.image(nodes_to_mask(nodes)))


def rel_restrict_rows(rho: BooleanRelation, nodes: Iterable[int]) -> BooleanRelation:
    """Keep only the arcs that start inside nodes."""
    keep = np.zeros(rho.n, dtype=bool)
    keep[list(nodes)] = True
    return BooleanRelation(rho.bits & keep[:, None])


@dataclass(frozen=True)
class CandidateSequence:
    """
    Eventually periodic sequence of node sets C_1, C_2, ...

    Term n is prefix[n - 1] for n <= len(prefix), else
    cycle[(n - len(prefix) - 1) % len(cycle)]. Terms are bitmasks.
    """

    prefix: Tuple[int, ...]
    cycle: Tuple[int, ...]

    @property
    def threshold(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.cycle)

    def at(self, n: int) -> int:
        if n < 1:
            raise PreconditionError(f"sequence index must be >= 1, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]

    def terms(self, threshold: int, period: int) -> Tuple[List[int], List[int]]:
        """Terms 1..threshold and threshold+1..threshold+period."""
        head = [self.at(n) for n in range(1, threshold + 1)]
        tail = [self.at(n) for n in range(threshold + 1, threshold + period + 1)]
        return head, tail

    def hit_set(self, target: int) -> EventuallyPeriodicSet:
        """{n : C_n meets target}."""
        return eps_from_pattern(
            [c & target != 0 for c in self.prefix], [c & target != 0 for c in self.cycle]
        )

    def contained_set(self, target: int) -> EventuallyPeriodicSet:
        """{n : C_n is nonempty and inside target}."""
        return eps_from_pattern(
            [c != 0 and c & ~target == 0 for c in self.prefix],
            [c != 0 and c & ~target == 0 for c in self.cycle],
        )

    def never_empty(self) -> bool:
        return all(self.prefix) and all(self.cycle)


def common_window(sequences: Sequence[CandidateSequence]) -> Tuple[int, int]:
    """Threshold and period on which every sequence is aligned."""
    return (
        max(s.threshold for s in sequences),
        math.lcm(*(s.period for s in sequences)),
    )


class PowerTrace:
    """
    The eventually periodic sequence of powers A^1, A^2, ... of one relation.

    powers holds A^1 .. A^(s+p-1), all distinct; A^(k+p) = A^k for k >= s.
    """

    def __init__(self, powers: Sequence[np.ndarray], preperiod: int, period: int):
        self.powers = tuple(powers)
        self.preperiod = preperiod
        self.period = period
        for matrix in self.powers:
            matrix.setflags(write=False)

    @property
    def n(self) -> int:
        return self.powers[0].shape[0]

    def index(self, k: int) -> int:
        """Position in powers of A^k, k >= 1."""
        if k < 1:
            raise PreconditionError(f"power index must be >= 1, got {k}")
        if k < self.preperiod + self.period:
            return k - 1
        return self.preperiod - 1 + (k - self.preperiod) % self.period

    def power(self, k: int) -> np.ndarray:
        return self.powers[self.index(k)]

    def image_sequence(self, mask: int) -> CandidateSequence:
        """The sets A^n(mask) for n >= 1."""
        weights = np.zeros(self.n, dtype=bool)
        weights[[i for i in range(self.n) if mask >> i & 1]] = True
        place = 1 << np.arange(self.n, dtype=np.int64)
        images = [int(place[matrix[weights].any(axis=0)].sum()) for matrix in self.powers]
        cut = self.preperiod - 1
        return CandidateSequence(tuple(images[:cut]), tuple(images[cut:]))

    def restricted_sequence(self, nodes: Iterable[int]) -> "RelationSequence":
        """The power sequence with rows outside nodes zeroed in every power."""
        keep = np.zeros(self.n, dtype=bool)
        keep[list(nodes)] = True
        restricted = [BooleanRelation(m & keep[:, None]) for m in self.powers]
        cut = self.preperiod - 1
        return RelationSequence(tuple(restricted[:cut]), tuple(restricted[cut:]))

    def all_positive_from(self) -> Optional[int]:
        """Smallest k with A^k all-positive, or None when no power is."""
        for k, matrix in enumerate(self.powers, start=1):
            if matrix.all():
                return k
        return None

    def __repr__(self) -> str:
        return f"PowerTrace(n={self.n}, preperiod={self.preperiod}, period={self.period})"


@cached_computation
def rel_power_trace(rho: BooleanRelation) -> PowerTrace:
    """
    Store powers in a seen-map until one repeats.

    Args:
        rho: Relation to iterate

    Returns:
        PowerTrace with minimal preperiod s and period p
    """
    current = rho.bits.copy()
    powers = [current]
    seen: Dict[bytes, int] = {current.tobytes(): 1}
    while True:
        current = _bool_product(current, rho.bits)
        k = len(powers) + 1
        key = current.tobytes()
        if key in seen:
            first = seen[key]
            logger.debug("power trace n=%d: preperiod %d, period %d", rho.n, first, k - first)
            return PowerTrace(powers, first, k - first)
        seen[key] = k
        powers.append(current)


def rel_d_infinity(rho: BooleanRelation) -> FrozenSet[int]:
    """Nodes with a walk of every length k >= 1."""
    trace = rel_power_trace(rho)
    alive = np.ones(rho.n, dtype=bool)
    for matrix in trace.powers:
        alive &= matrix.any(axis=1)
    return frozenset(int(i) for i in np.flatnonzero(alive))


class RelationSequence:
    """
    An eventually periodic sequence of relations rho_1, rho_2, ...

    rho_n is prefix[n - 1] for n <= len(prefix), else
    cycle[(n - len(prefix) - 1) % len(cycle)].
    """

    def __init__(self, prefix: Sequence[BooleanRelation], cycle: Sequence[BooleanRelation]):
        if not cycle:
            raise PreconditionError("relation sequence needs a nonempty cycle")
        self.prefix = tuple(prefix)
        self.cycle = tuple(cycle)
        self.n = _check_same_size(*self.prefix, *self.cycle)

    @classmethod
    def constant(cls, rho: BooleanRelation) -> "RelationSequence":
        return cls((), (rho,))

    def relation_at(self, n: int) -> BooleanRelation:
        if n < 1:
            raise PreconditionError(f"sequence index must be >= 1, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]

    def image_sequence(self, mask: int) -> CandidateSequence:
        """The sets rho_n(mask) for n >= 1."""
        return CandidateSequence(
            tuple(r.image(mask) for r in self.prefix), tuple(r.image(mask) for r in self.cycle)
        )

    def common_domain(self) -> FrozenSet[int]:
        """Intersection of D(rho_n) over all n."""
        alive = np.ones(self.n, dtype=bool)
        for r in self.prefix + self.cycle:
            alive &= r.bits.any(axis=1)
        return frozenset(int(i) for i in np.flatnonzero(alive))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RelationSequence):
            return NotImplemented
        return self.prefix == other.prefix and self.cycle == other.cycle

    def __hash__(self) -> int:
        return hash((self.prefix, self.cycle))

    def __repr__(self) -> str:
        return f"RelationSequence(n={self.n}, prefix={len(self.prefix)}, cycle={len(self.cycle)})"


def image_sequence(source, mask: int) -> CandidateSequence:
    """Orbit sets of mask under a relation (through its powers) or a sequence."""
    if isinstance(source, RelationSequence):
        return source.image_sequence(mask)
    return rel_power_trace(source).image_sequence(mask)


def source_domain(source) -> FrozenSet[int]:
    """D_inf for a relation, the common domain for a sequence."""
    if isinstance(source, RelationSequence):
        return source.common_domain()
    return rel_d_infinity(source)


def rel_hit_set(rho: BooleanRelation, x: int, target: Iterable[int]) -> EventuallyPeriodicSet:
    """S(x, V) for the power sequence of rho."""
    return rel_power_trace(rho).image_sequence(1 << x).hit_set(nodes_to_mask(target))


def rel_hit_set_uv(
    rho: BooleanRelation, source: Iterable[int], target: Iterable[int]
) -> EventuallyPeriodicSet:
    """S(U, V) for the power sequence of rho."""
    return rel_power_trace(rho).image_sequence(nodes_to_mask(source)).hit_set(nodes_to_mask(target))


def seq_hit_set(seq: RelationSequence, x: int, target: Iterable[int]) -> EventuallyPeriodicSet:
    return seq.image_sequence(1 << x).hit_set(nodes_to_mask(target))


def _subset_images(row_masks: Sequence[int], n: int) -> np.ndarray:
    """Image of every subset mask 0 .. 2^n - 1, built bit by bit."""
    images = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        low = 1 << b
        images[low: 2 * low] = images[:low] | row_masks[b]
    return images


def _hit_patterns(
    rho: BooleanRelation, sources: np.ndarray, targets: np.ndarray
) -> Tuple[np.ndarray, int]:
    trace = rel_power_trace(rho)
    place = 1 << np.arange(rho.n, dtype=np.int64)
    columns = []
    for matrix in trace.powers:
        rows = [int(v) for v in matrix.astype(np.int64) @ place]
        images = _subset_images(rows, rho.n)[sources]
        columns.append((images[:, None] & targets[None, :]) != 0)
    return np.stack(columns, axis=-1), trace.preperiod - 1


def rel_s_collection(
    rho: BooleanRelation, opens: Optional[Sequence[int]] = None
) -> List[EventuallyPeriodicSet]:
    """
    The distinct S(U, V) over nonempty U, V, deterministically sorted.

    Args:
        rho: Relation whose powers define S
        opens: Open masks to range over; all subsets when None

    Returns:
        Sorted list of distinct EventuallyPeriodicSets
    """
    if opens is None:
        if rho.n > S_COLLECTION_LIMIT:
            raise GuardExceeded(
                f"all-subsets S-collection is limited to n <= {S_COLLECTION_LIMIT}, got {rho.n}"
            )
        masks = np.arange(1, 1 << rho.n, dtype=np.int64)
    else:
        masks = np.array(sorted({int(u) for u in opens if u}), dtype=np.int64)
    patterns, cut = _hit_patterns(rho, masks, masks)
    flat = np.unique(patterns.reshape(-1, patterns.shape[-1]), axis=0)
    found = {eps_from_pattern(row[:cut], row[cut:]) for row in flat}
    return sorted(found, key=lambda s: s.sort_key())


def rel_membership_table(rho: BooleanRelation, window: int) -> np.ndarray:
    """
    Membership of n in S(U, V) for all nonempty subsets.

    Returns:
        Boolean array indexed [U - 1, V - 1, n - 1] for n = 1..window
    """
    if rho.n > S_COLLECTION_LIMIT:
        raise GuardExceeded(f"membership table is limited to n <= {S_COLLECTION_LIMIT}")
    trace = rel_power_trace(rho)
    masks = np.arange(1, 1 << rho.n, dtype=np.int64)
    patterns, _ = _hit_patterns(rho, masks, masks)
    order = [trace.index(k) for k in range(1, window + 1)]
    return patterns[:, :, order]


def walk_endpoints(rho: BooleanRelation, starts: Iterable[int], length: int) -> FrozenSet[int]:
    """Endpoints of walks of exactly the given length, by layered expansion."""
    successors: Dict[int, List[int]] = {i: [] for i in range(rho.n)}
    for i, j in rho.pairs():
        successors[i].append(j)
    layer = set(starts)
    for _ in range(length):
        layer = {j for i in layer for j in successors[i]}
        if not layer:
            break
    return frozenset(layer)


WALK_CACHE_SIZE = 1 << 16


@lru_cache(maxsize=WALK_CACHE_SIZE)
def walk_exists(rho: BooleanRelation, i: int, j: int, length: int) -> bool:
    """Whether an x_i to x_j walk of exactly the given length exists."""
    if length == 0:
        return i == j
    return any(
        walk_exists(rho, y, j, length - 1) for y in range(rho.n) if rho.bits[i, y]
    )
