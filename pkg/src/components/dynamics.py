"""
Deciders for hypercyclicity and topological transitivity of relations on finite spaces.

Covers the plain, strong, disjoint and strong disjoint variants for a single
relation (iterated through its powers) or an eventually periodic relation
sequence, plus the shift-transfer check and the restriction to D_inf.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.components.family import (
    FamilySpec,
    family_interval_member,
    family_membership,
    family_transfer_holds,
)
from src.components.natset import (
    EMPTY,
    EventuallyPeriodicSet,
    eps_from_pattern,
    eps_intersect,
    eps_shift,
    eps_union,
    render_eps,
)
from src.components.relations import (
    BooleanRelation,
    CandidateSequence,
    RelationSequence,
    common_window,
    image_sequence,
    rel_d_infinity,
    rel_power,
    rel_power_trace,
    source_domain,
)
from src.components.selection import (
    DEFAULT_SEARCH_BUDGET,
    SelectionOutcome,
    SelectionProblem,
    SelectionSchedule,
    Status,
    search_selection,
)
from src.components.topology import FiniteTopology, mask_to_nodes
from src.utils.errors import DimensionMismatch, PreconditionError

logger = logging.getLogger(__name__)

Source = Union[BooleanRelation, RelationSequence]
Refutation = Tuple[FrozenSet[int], ...]


class DynamicalProperty(Enum):
    HYPERCYCLIC = "hypercyclic"
    TRANSITIVE = "transitive"
    STRONG_HYPERCYCLIC = "strong-hypercyclic"
    STRONG_TRANSITIVE = "strong-transitive"
    D_HYPERCYCLIC = "d-hypercyclic"
    D_TRANSITIVE = "d-transitive"
    STRONG_D_HYPERCYCLIC = "strong-d-hypercyclic"
    STRONG_D_TRANSITIVE = "strong-d-transitive"

    @property
    def is_disjoint(self) -> bool:
        return self.value.startswith("d-") or self.value.startswith("strong-d-")


@dataclass(frozen=True)
class Verdict:
    """
    Three-valued decision.

    witness is the smallest witnessing node (existential properties),
    refutation the open-set tuple whose return-time set leaves the family
    (universal properties).
    """

    status: Status
    witness: Optional[int] = None
    witnesses: Tuple[int, ...] = ()
    schedule: Optional[SelectionSchedule] = None
    refutation: Optional[Refutation] = None
    refuted_set: Optional[EventuallyPeriodicSet] = None
    detail: str = ""
    facts: Dict[str, bool] = field(default_factory=dict, compare=False)

    @property
    def is_yes(self) -> bool:
        return self.status is Status.YES

    @property
    def is_no(self) -> bool:
        return self.status is Status.NO


def _size(source: Source) -> int:
    return source.n


def _check_sizes(sources: Sequence[Source], top: FiniteTopology) -> None:
    sizes = {_size(s) for s in sources} | {top.n}
    if len(sizes) != 1:
        raise DimensionMismatch(f"relations and topology disagree on node count: {sorted(sizes)}")


def _check_tuple(sources: Sequence[Source]) -> None:
    if len(sources) < 2:
        raise DimensionMismatch(f"disjoint properties need at least two relations, got {len(sources)}")


@lru_cache(maxsize=1 << 16)
def _member(family: FamilySpec, a: EventuallyPeriodicSet) -> bool:
    return family_membership(family, a)


def _aligned(sequences: Sequence[CandidateSequence], threshold: int, period: int) -> np.ndarray:
    """Terms 1..threshold+period of every sequence, shape (len, span)."""
    rows = []
    for seq in sequences:
        head, tail = seq.terms(threshold, period)
        rows.append(head + tail)
    return np.array(rows, dtype=np.int64).reshape(len(sequences), threshold + period)


def _hit_rows(terms: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Per target, whether each term meets it: shape (m, span)."""
    masks = np.array(targets, dtype=np.int64)
    return (terms[None, :] & masks[:, None]) != 0


def _inside_rows(terms: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    masks = np.array(targets, dtype=np.int64)
    return (terms[None, :] != 0) & ((terms[None, :] & ~masks[:, None]) == 0)


def _box_product(rows: Sequence[np.ndarray]) -> np.ndarray:
    """AND of one row per factor for every box, in itertools.product order."""
    out = rows[0]
    for nxt in rows[1:]:
        out = (out[:, None, :] & nxt[None, :, :]).reshape(-1, out.shape[-1])
    return out


def _pattern_sets(patterns: np.ndarray, cut: int) -> Tuple[List[EventuallyPeriodicSet], np.ndarray]:
    """Distinct rows as sets, plus the index of every row's set."""
    unique, inverse = np.unique(patterns, axis=0, return_inverse=True)
    sets = [eps_from_pattern(row[:cut], row[cut:]) for row in unique]
    return sets, np.asarray(inverse).reshape(-1)


def _first_outside(
    family: FamilySpec, patterns: np.ndarray, cut: int
) -> Optional[Tuple[int, EventuallyPeriodicSet]]:
    """First row whose set is not in the family."""
    sets, inverse = _pattern_sets(patterns, cut)
    good = np.array([_member(family, s) for s in sets], dtype=bool)
    bad = np.flatnonzero(~good[inverse])
    if bad.size == 0:
        return None
    row = int(bad[0])
    return row, sets[inverse[row]]


def _box_of(index: int, targets: Sequence[int], factors: int) -> Refutation:
    m = len(targets)
    picks = []
    for _ in range(factors):
        index, r = divmod(index, m)
        picks.append(r)
    return tuple(mask_to_nodes(targets[r]) for r in reversed(picks))


def hit_sets(source: Source, x: int, top: FiniteTopology) -> List[Tuple[FrozenSet[int], EventuallyPeriodicSet]]:
    """S(x, V) for every nonempty open V."""
    seq = image_sequence(source, 1 << x)
    return [(mask_to_nodes(v), seq.hit_set(v)) for v in top.nonempty_opens()]


def transitivity_sets(source: Source, top: FiniteTopology) -> List[Tuple[Refutation, EventuallyPeriodicSet]]:
    """S(U, V) for every pair of nonempty opens."""
    found = []
    for u in top.nonempty_opens():
        seq = image_sequence(source, u)
        for v in top.nonempty_opens():
            found.append(((mask_to_nodes(u), mask_to_nodes(v)), seq.hit_set(v)))
    return found


def _node_failure(
    source: Source, x: int, top: FiniteTopology, family: FamilySpec
) -> Optional[Tuple[Refutation, EventuallyPeriodicSet]]:
    seq = image_sequence(source, 1 << x)
    targets = top.nonempty_opens()
    terms = _aligned([seq], seq.threshold, seq.period)[0]
    failure = _first_outside(family, _hit_rows(terms, targets), seq.threshold)
    if failure is None:
        return None
    row, bad = failure
    return (frozenset({x}), mask_to_nodes(targets[row])), bad


def hypercyclic_vectors(source: Source, top: FiniteTopology, family: FamilySpec) -> FrozenSet[int]:
    """
    Nodes x in D_inf whose every S(x, V) over nonempty opens V is in F.

    For a relation sequence D_inf is the intersection of the domains of all terms.
    """
    _check_sizes([source], top)
    return frozenset(
        x for x in sorted(source_domain(source)) if _node_failure(source, x, top, family) is None
    )


def is_F_hypercyclic(source: Source, top: FiniteTopology, family: FamilySpec) -> Verdict:
    vectors = sorted(hypercyclic_vectors(source, top, family))
    if vectors:
        return Verdict(Status.YES, witness=vectors[0], witnesses=tuple(vectors))
    domain = sorted(source_domain(source))
    if not domain:
        return Verdict(Status.NO, detail="D_inf is empty")
    refutation, bad = _node_failure(source, domain[0], top, family)
    return Verdict(
        Status.NO,
        refutation=refutation,
        refuted_set=bad,
        detail="no node in D_inf has all return-time sets in the family",
    )


def is_F_top_transitive(source: Source, top: FiniteTopology, family: FamilySpec) -> Verdict:
    """Every S(U, V) over nonempty opens U, V is in F."""
    _check_sizes([source], top)
    targets = top.nonempty_opens()
    for u in targets:
        seq = image_sequence(source, u)
        terms = _aligned([seq], seq.threshold, seq.period)[0]
        failure = _first_outside(family, _hit_rows(terms, targets), seq.threshold)
        if failure is not None:
            row, bad = failure
            return Verdict(
                Status.NO,
                refutation=(mask_to_nodes(u), mask_to_nodes(targets[row])),
                refuted_set=bad,
            )
    return Verdict(Status.YES)


def _node_problem(seq: CandidateSequence, targets: Sequence[int], n: int) -> SelectionProblem:
    kinds = [sum(1 << t for t, v in enumerate(targets) if v >> y & 1) for y in range(n)]

    def nodes(mask: int) -> Tuple[int, ...]:
        return tuple(y for y in range(n) if mask >> y & 1)

    return SelectionProblem(
        prefix=tuple(nodes(c) for c in seq.prefix),
        cycle=tuple(nodes(c) for c in seq.cycle),
        target_count=len(targets),
        classify=kinds.__getitem__,
    )


def _tuple_problem(
    sequences: Sequence[CandidateSequence], targets: Sequence[int], n: int
) -> SelectionProblem:
    threshold, period = common_window(sequences)
    terms = _aligned(sequences, threshold, period)
    m = len(targets)
    inside = [[t for t, v in enumerate(targets) if v >> y & 1] for y in range(n)]
    memo: Dict[Tuple[int, ...], int] = {}

    def classify(symbol: Tuple[int, ...]) -> int:
        if symbol not in memo:
            mask = 0
            for combo in itertools.product(*(inside[y] for y in symbol)):
                index = 0
                for c in combo:
                    index = index * m + c
                mask |= 1 << index
            memo[symbol] = mask
        return memo[symbol]

    def symbols(k: int) -> Tuple[Tuple[int, ...], ...]:
        factors = [[y for y in range(n) if int(terms[j, k]) >> y & 1] for j in range(len(sequences))]
        return tuple(itertools.product(*factors))

    return SelectionProblem(
        prefix=tuple(symbols(k) for k in range(threshold)),
        cycle=tuple(symbols(k) for k in range(threshold, threshold + period)),
        target_count=m ** len(sequences),
        classify=classify,
    )


def strong_hypercyclic_vectors(
    source: Source,
    top: FiniteTopology,
    family: FamilySpec,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Tuple[FrozenSet[int], Dict[int, SelectionOutcome]]:
    """
    Strong witnesses and the search outcome of every node.

    Returns:
        Tuple of (nodes with a Yes outcome, outcome per node)
    """
    _check_sizes([source], top)
    targets = top.nonempty_opens()
    outcomes = {}
    for x in range(top.n):
        seq = image_sequence(source, 1 << x)
        outcomes[x] = search_selection(_node_problem(seq, targets, top.n), family, budget)
    found = frozenset(x for x, o in outcomes.items() if o.status is Status.YES)
    return found, outcomes


def _existential(outcomes: Dict[int, SelectionOutcome], empty_detail: str) -> Verdict:
    yes = sorted(x for x, o in outcomes.items() if o.status is Status.YES)
    if yes:
        return Verdict(
            Status.YES, witness=yes[0], witnesses=tuple(yes), schedule=outcomes[yes[0]].schedule
        )
    unknown = sorted(x for x, o in outcomes.items() if o.status is Status.UNKNOWN)
    if unknown:
        return Verdict(Status.UNKNOWN, detail=f"{outcomes[unknown[0]].reason} at x{unknown[0] + 1}")
    return Verdict(Status.NO, detail=empty_detail)


def is_strongly_F_hypercyclic(
    source: Source, top: FiniteTopology, family: FamilySpec, budget: int = DEFAULT_SEARCH_BUDGET
) -> Verdict:
    _, outcomes = strong_hypercyclic_vectors(source, top, family, budget)
    return _existential(outcomes, "no node admits a selection realizing the family")


def is_strongly_F_top_transitive(
    source: Source, top: FiniteTopology, family: FamilySpec, budget: int = DEFAULT_SEARCH_BUDGET
) -> Verdict:
    """For every nonempty open U, a selection y_n in rho_n(U) realizing F on every open V."""
    _check_sizes([source], top)
    targets = top.nonempty_opens()
    pending = None
    for u in targets:
        seq = image_sequence(source, u)
        outcome = search_selection(_node_problem(seq, targets, top.n), family, budget)
        if outcome.status is Status.NO:
            return Verdict(Status.NO, refutation=(mask_to_nodes(u),), detail=outcome.reason)
        if outcome.status is Status.UNKNOWN and pending is None:
            pending = Verdict(Status.UNKNOWN, refutation=(mask_to_nodes(u),), detail=outcome.reason)
    return pending or Verdict(Status.YES)


def d_hit_set(
    sources: Sequence[Source], x: int, targets: Sequence[Sequence[int]]
) -> EventuallyPeriodicSet:
    """Intersection over j of S_j(x, V_j)."""
    _check_tuple(sources)
    if len(targets) != len(sources):
        raise DimensionMismatch(f"{len(sources)} relations but {len(targets)} target sets")
    result = None
    for src, v in zip(sources, targets):
        mask = sum(1 << i for i in v)
        hit = image_sequence(src, 1 << x).hit_set(mask)
        result = hit if result is None else eps_intersect(result, hit)
    return result


def d_transitive_set(
    sources: Sequence[Source], source_nodes: Sequence[int], targets: Sequence[Sequence[int]]
) -> EventuallyPeriodicSet:
    """{n : some x in U has rho_j^n x meeting V_j for every j}."""
    result = EMPTY
    for x in sorted(set(source_nodes)):
        result = eps_union(result, d_hit_set(sources, x, targets))
    return result


def _common_domain(sources: Sequence[Source]) -> FrozenSet[int]:
    domain = None
    for src in sources:
        d = source_domain(src)
        domain = d if domain is None else domain & d
    return domain


def _box_rows(
    sources: Sequence[Source], x_mask: int, targets: Sequence[int], inside: bool = False
) -> Tuple[np.ndarray, int]:
    sequences = [image_sequence(src, x_mask) for src in sources]
    threshold, period = common_window(sequences)
    terms = _aligned(sequences, threshold, period)
    rows_of = _inside_rows if inside else _hit_rows
    return _box_product([rows_of(terms[j], targets) for j in range(len(sources))]), threshold


def _d_node_failure(
    sources: Sequence[Source], x: int, top: FiniteTopology, family: FamilySpec
) -> Optional[Tuple[Refutation, EventuallyPeriodicSet]]:
    targets = top.nonempty_opens()
    patterns, cut = _box_rows(sources, 1 << x, targets)
    failure = _first_outside(family, patterns, cut)
    if failure is None:
        return None
    row, bad = failure
    return (frozenset({x}),) + _box_of(row, targets, len(sources)), bad


def d_hypercyclic_vectors(
    sources: Sequence[Source], top: FiniteTopology, family: FamilySpec
) -> FrozenSet[int]:
    """Nodes in every D_inf(rho_j) whose d-return sets over all open tuples are in F."""
    _check_tuple(sources)
    _check_sizes(sources, top)
    return frozenset(
        x
        for x in sorted(_common_domain(sources))
        if _d_node_failure(sources, x, top, family) is None
    )


def is_dF_hypercyclic(sources: Sequence[Source], top: FiniteTopology, family: FamilySpec) -> Verdict:
    vectors = sorted(d_hypercyclic_vectors(sources, top, family))
    if vectors:
        return Verdict(Status.YES, witness=vectors[0], witnesses=tuple(vectors))
    domain = sorted(_common_domain(sources))
    if not domain:
        return Verdict(Status.NO, detail="the relations share no node of D_inf")
    refutation, bad = _d_node_failure(sources, domain[0], top, family)
    return Verdict(Status.NO, refutation=refutation, refuted_set=bad)


def is_dF_top_transitive(sources: Sequence[Source], top: FiniteTopology, family: FamilySpec) -> Verdict:
    """
    For all open U and open tuples (V_j): {n : exists x in U, all j meet} is in F.

    The existential over x sits inside the return-time set, so the per-node
    patterns are OR-ed over U before membership is tested.
    """
    _check_tuple(sources)
    _check_sizes(sources, top)
    targets = top.nonempty_opens()
    per_node = {}
    for x in range(top.n):
        per_node[x] = _box_rows(sources, 1 << x, targets)
    threshold = max(cut for _, cut in per_node.values())
    period = 1
    for rows, cut in per_node.values():
        period = np.lcm(period, rows.shape[-1] - cut)
    span = threshold + int(period)

    def stretch(rows: np.ndarray, cut: int) -> np.ndarray:
        p = rows.shape[-1] - cut
        index = [k if k < cut else cut + (k - cut) % p for k in range(span)]
        return rows[:, index]

    stretched = {x: stretch(rows, cut) for x, (rows, cut) in per_node.items()}
    for u in targets:
        combined = np.zeros_like(stretched[0])
        for x in mask_to_nodes(u):
            combined |= stretched[x]
        failure = _first_outside(family, combined, threshold)
        if failure is not None:
            row, bad = failure
            return Verdict(
                Status.NO,
                refutation=(mask_to_nodes(u),) + _box_of(row, targets, len(sources)),
                refuted_set=bad,
            )
    return Verdict(Status.YES)


def strong_d_hypercyclic_vectors(
    sources: Sequence[Source],
    top: FiniteTopology,
    family: FamilySpec,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Tuple[FrozenSet[int], Dict[int, SelectionOutcome]]:
    """
    Nodes x with selections y_(j,n) in rho_j^n(x) realizing F on every open box.

    Symbols are node tuples; a tuple's type is the set of boxes V_1 x ... x V_N it lies in.
    """
    _check_tuple(sources)
    _check_sizes(sources, top)
    targets = top.nonempty_opens()
    domain = _common_domain(sources)
    outcomes = {}
    for x in range(top.n):
        if x not in domain:
            outcomes[x] = SelectionOutcome(Status.NO, reason="outside the common D_inf")
            continue
        sequences = [image_sequence(src, 1 << x) for src in sources]
        outcomes[x] = search_selection(_tuple_problem(sequences, targets, top.n), family, budget)
    found = frozenset(x for x, o in outcomes.items() if o.status is Status.YES)
    return found, outcomes


def is_strongly_dF_hypercyclic(
    sources: Sequence[Source],
    top: FiniteTopology,
    family: FamilySpec,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Verdict:
    _, outcomes = strong_d_hypercyclic_vectors(sources, top, family, budget)
    return _existential(outcomes, "no node admits a joint selection realizing the family")


def is_strongly_dF_top_transitive(
    sources: Sequence[Source], top: FiniteTopology, family: FamilySpec
) -> Verdict:
    """
    For every open U and open box, some x in U with selections realizing F on the box.

    With a single box the realizable sets are exactly those between the times
    where every choice lands in the box and the times where some choice does.
    """
    _check_tuple(sources)
    _check_sizes(sources, top)
    targets = top.nonempty_opens()
    domain = _common_domain(sources)
    good: Dict[int, np.ndarray] = {}
    for x in sorted(domain):
        hit, cut = _box_rows(sources, 1 << x, targets)
        forced, _ = _box_rows(sources, 1 << x, targets, inside=True)
        cache: Dict[Tuple[bytes, bytes], bool] = {}
        row_ok = []
        for k in range(hit.shape[0]):
            key = (forced[k].tobytes(), hit[k].tobytes())
            if key not in cache:
                lower = eps_from_pattern(forced[k][:cut], forced[k][cut:])
                upper = eps_from_pattern(hit[k][:cut], hit[k][cut:])
                cache[key] = family_interval_member(family, lower, upper)
            row_ok.append(cache[key])
        good[x] = np.array(row_ok, dtype=bool)
    boxes = len(targets) ** len(sources)
    for u in targets:
        covered = np.zeros(boxes, dtype=bool)
        for x in mask_to_nodes(u):
            if x in good:
                covered |= good[x]
        if not covered.all():
            row = int(np.flatnonzero(~covered)[0])
            return Verdict(
                Status.NO, refutation=(mask_to_nodes(u),) + _box_of(row, targets, len(sources))
            )
    return Verdict(Status.YES)


def restrict_to_d_infinity(rho: BooleanRelation) -> RelationSequence:
    """The power sequence of rho with rows outside D_inf zeroed."""
    return rel_power_trace(rho).restricted_sequence(rel_d_infinity(rho))


def check_shift_transfer(
    rho: BooleanRelation, top: FiniteTopology, family: FamilySpec, z: int, lag: int
) -> Verdict:
    """
    Check the transfer of hypercyclicity from rho^l(z) back to z on one instance.

    premise: some x in rho^l(z) is hypercyclic; transfer: for every node w in
    D_inf and open V, S(w, V) - l in F implies S(w, V) in F; conclusion: z is
    hypercyclic. Yes when the transfer holds and the implication is not
    violated.
    """
    if lag < 1:
        raise PreconditionError(f"shift lag must be >= 1, got {lag}")
    _check_sizes([rho], top)
    vectors = hypercyclic_vectors(rho, top, family)
    reach = mask_to_nodes(rel_power(rho, lag).image(1 << z))
    premise = bool(reach & vectors)
    conclusion = z in vectors
    broken = None
    for w in sorted(rel_d_infinity(rho)):
        for v, s in hit_sets(rho, w, top):
            if not family_transfer_holds(family, s, eps_shift(s, lag)):
                broken = ((frozenset({w}), v), s)
                break
        if broken:
            break
    facts = {"premise": premise, "transfer": broken is None, "conclusion": conclusion}
    if broken is not None:
        refutation, s = broken
        return Verdict(
            Status.NO,
            refutation=refutation,
            refuted_set=s,
            detail=f"S - {lag} = {render_eps(eps_shift(s, lag))} is in the family but S is not",
            facts=facts,
        )
    if premise and not conclusion:
        return Verdict(Status.NO, detail="implication violated", facts=facts)
    return Verdict(Status.YES, witness=z if conclusion else None, facts=facts)


def decide(
    prop: DynamicalProperty,
    sources: Union[Source, Sequence[Source]],
    top: FiniteTopology,
    family: FamilySpec,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Verdict:
    """Dispatch one property; disjoint properties take a tuple of sources."""
    if prop.is_disjoint:
        group = tuple(sources) if isinstance(sources, (list, tuple)) else (sources,)
        if prop is DynamicalProperty.D_HYPERCYCLIC:
            return is_dF_hypercyclic(group, top, family)
        if prop is DynamicalProperty.D_TRANSITIVE:
            return is_dF_top_transitive(group, top, family)
        if prop is DynamicalProperty.STRONG_D_HYPERCYCLIC:
            return is_strongly_dF_hypercyclic(group, top, family, budget)
        return is_strongly_dF_top_transitive(group, top, family)
    single = sources[0] if isinstance(sources, (list, tuple)) else sources
    if prop is DynamicalProperty.HYPERCYCLIC:
        return is_F_hypercyclic(single, top, family)
    if prop is DynamicalProperty.TRANSITIVE:
        return is_F_top_transitive(single, top, family)
    if prop is DynamicalProperty.STRONG_HYPERCYCLIC:
        return is_strongly_F_hypercyclic(single, top, family, budget)
    return is_strongly_F_top_transitive(single, top, family, budget)
