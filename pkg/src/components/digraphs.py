"""
Loop-free digraphs and tournaments.

Connectivity, primitivity and exponent, the F_w-properties read off the
underlying graph, tournament bit codes with canonical forms, Redei paths,
the exponent tail check, the disjoint counterexample pair and the a_n survey.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from src.components.dynamics import (
    DynamicalProperty,
    Verdict,
    d_hit_set,
    decide,
    is_dF_hypercyclic,
    is_strongly_dF_hypercyclic,
)
from src.components.family import (
    FamilyKind,
    FamilySpec,
    all_nonempty,
    family_members,
    finite_unions_of,
    family_membership,
)
from src.components.graphs import SimpleGraph, graph_from_edges, graph_to_relation
from src.components.natset import (
    EventuallyPeriodicSet,
    eps_contains_tail_from,
    render_eps,
)
from src.components.relations import BooleanRelation, rel_power_trace, rel_s_collection, walk_exists
from src.components.selection import DEFAULT_SEARCH_BUDGET, Status
from src.components.topology import FiniteTopology, topology_discrete, topology_validate
from src.utils.errors import GuardExceeded, HyperrelError, NotPrimitive, PreconditionError
from src.utils.performance_helpers import parallel_map

logger = logging.getLogger(__name__)

TOURNAMENT_LIMIT = 7


@dataclass(frozen=True)
class Digraph:
    """Loop-free directed graph on nodes 0..n-1."""

    n: int
    arcs: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError(f"digraphs need at least two nodes, got {self.n}")
        for i, j in self.arcs:
            if i == j:
                raise PreconditionError(f"loop at node {i} is not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise PreconditionError(f"arc ({i}, {j}) out of range for n={self.n}")

    def to_relation(self) -> BooleanRelation:
        return BooleanRelation.from_pairs(self.n, self.arcs)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.arcs)
        return g


@dataclass(frozen=True)
class Tournament(Digraph):
    """Digraph with exactly one arc between any two distinct nodes."""

    def __post_init__(self):
        super().__post_init__()
        for i, j in itertools.combinations(range(self.n), 2):
            if ((i, j) in self.arcs) == ((j, i) in self.arcs):
                raise PreconditionError(f"nodes {i} and {j} need exactly one arc between them")


def digraph_from_arcs(n: int, arcs) -> Digraph:
    return Digraph(n, frozenset(arcs))


def tournament_from_arcs(n: int, arcs) -> Tournament:
    return Tournament(n, frozenset(arcs))


def digraph_strongly_connected(d: Digraph) -> bool:
    return nx.is_strongly_connected(d.to_networkx())


def digraph_weakly_connected(d: Digraph) -> bool:
    return nx.is_weakly_connected(d.to_networkx())


def digraph_is_asymmetric(d: Digraph) -> bool:
    return all((j, i) not in d.arcs for i, j in d.arcs)


def digraph_underlying(d: Digraph) -> SimpleGraph:
    return graph_from_edges(d.n, d.arcs)


def digraph_wproperty(
    digraphs: Sequence[Digraph],
    top: FiniteTopology,
    family: FamilySpec,
    prop: DynamicalProperty,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Verdict:
    """
    Decide prop on the underlying graphs of the digraphs.

    When F is upward closed a Yes for the digraphs themselves must carry over
    to their underlying graphs; the outcome of that check is stored in
    facts["implication"].
    """
    group = list(digraphs)
    if not prop.is_disjoint:
        group = group[:1]
    graphs = [graph_to_relation(digraph_underlying(d)) for d in group]
    directed = [d.to_relation() for d in group]
    wverdict = decide(prop, graphs if prop.is_disjoint else graphs[0], top, family, budget)
    facts = dict(wverdict.facts)
    if family.upward_closed:
        dverdict = decide(prop, directed if prop.is_disjoint else directed[0], top, family, budget)
        holds = not dverdict.is_yes or wverdict.is_yes
        facts["implication"] = holds
        if not holds:
            logger.warning("%s holds for the digraphs but not for their underlying graphs", prop.value)
    return replace(wverdict, facts=facts)


def digraph_is_primitive(d: Digraph) -> bool:
    return rel_power_trace(d.to_relation()).all_positive_from() is not None


def digraph_exponent(d: Digraph) -> int:
    """Smallest k with every entry of A^k positive."""
    exponent = rel_power_trace(d.to_relation()).all_positive_from()
    if exponent is None:
        raise NotPrimitive(f"no power of the {d.n}-node digraph is all-positive")
    return exponent


def directed_diameter(d: Digraph) -> float:
    """Largest shortest-path length over ordered pairs; math.inf unless strongly connected."""
    if not digraph_strongly_connected(d):
        return math.inf
    lengths = nx.all_pairs_shortest_path_length(d.to_networkx())
    return float(max(max(row.values()) for _, row in lengths))


# Tournament codes: the pairs (i, j), i < j, in lexicographic order; the first
# pair is the most significant bit and a 1 means the arc runs i -> j.


@lru_cache(maxsize=None)
def _pair_index(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


@lru_cache(maxsize=None)
def _bit_weights(n: int) -> np.ndarray:
    m = n * (n - 1) // 2
    return 1 << np.arange(m - 1, -1, -1, dtype=np.int64)


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def _check_tournament_size(n: int) -> None:
    if n < 2:
        raise PreconditionError(f"tournaments need at least two nodes, got {n}")
    if n > TOURNAMENT_LIMIT:
        raise GuardExceeded(f"tournament enumeration is limited to n <= {TOURNAMENT_LIMIT}, got {n}")


def tournament_from_bits(n: int, bits: int) -> Tournament:
    pairs = list(itertools.combinations(range(n), 2))
    if not 0 <= bits < 1 << len(pairs):
        raise PreconditionError(f"code {bits} out of range for n={n}")
    arcs = []
    for k, (i, j) in enumerate(pairs):
        forward = bits >> (len(pairs) - 1 - k) & 1
        arcs.append((i, j) if forward else (j, i))
    return Tournament(n, frozenset(arcs))


def tournament_to_bits(t: Tournament) -> int:
    rows, cols = _pair_index(t.n)
    adjacency = t.to_relation().bits
    return int(adjacency[rows, cols].astype(np.int64) @ _bit_weights(t.n))


def _canonical_code(adjacency: np.ndarray) -> int:
    n = adjacency.shape[0]
    perms = _permutations(n)
    relabelled = adjacency[perms[:, :, None], perms[:, None, :]]
    rows, cols = _pair_index(n)
    codes = relabelled[:, rows, cols].astype(np.int64) @ _bit_weights(n)
    return int(codes.min())


def tournament_canonical_bits(t: Tournament) -> int:
    """Smallest code over all relabellings of the nodes."""
    _check_tournament_size(t.n)
    return _canonical_code(t.to_relation().bits)


@lru_cache(maxsize=None)
def _iso_codes(n: int) -> Tuple[int, ...]:
    if n == 2:
        return (0,)
    found = set()
    for code in _iso_codes(n - 1):
        base = tournament_from_bits(n - 1, code).to_relation().bits
        for orientation in range(1 << (n - 1)):
            adjacency = np.zeros((n, n), dtype=bool)
            adjacency[: n - 1, : n - 1] = base
            for i in range(n - 1):
                if orientation >> i & 1:
                    adjacency[i, n - 1] = True
                else:
                    adjacency[n - 1, i] = True
            found.add(_canonical_code(adjacency))
    logger.debug("%d tournament classes on %d nodes", len(found), n)
    return tuple(sorted(found))


def tournament_enumerate(n: int, up_to_iso: bool = False) -> Iterator[Tournament]:
    """
    All tournaments on n nodes in increasing code order.

    Args:
        n: Node count, 2 <= n <= 7
        up_to_iso: Yield one canonical representative per isomorphism class

    Returns:
        Iterator of Tournament
    """
    _check_tournament_size(n)
    codes = _iso_codes(n) if up_to_iso else range(1 << (n * (n - 1) // 2))
    for code in codes:
        yield tournament_from_bits(n, code)


def tournament_indegrees(t: Tournament) -> List[int]:
    return [int(c) for c in t.to_relation().bits.sum(axis=0)]


def _is_path(t: Tournament, path: Sequence[int]) -> bool:
    return sorted(path) == list(range(t.n)) and all((a, b) in t.arcs for a, b in zip(path, path[1:]))


def tournament_redei_path(t: Tournament) -> List[int]:
    """Hamiltonian directed path by insertion."""
    path = [0]
    for k in range(1, t.n):
        if (k, path[0]) in t.arcs:
            path.insert(0, k)
            continue
        for p in range(len(path) - 1):
            if (path[p], k) in t.arcs and (k, path[p + 1]) in t.arcs:
                path.insert(p + 1, k)
                break
        else:
            path.append(k)
    if not _is_path(t, path):
        raise HyperrelError(f"insertion produced an invalid path {path}")
    return path


def tournament_is_hamiltonian(t: Tournament) -> bool:
    """Whether a directed cycle through every node exists."""
    if t.n < 3:
        return False
    for rest in itertools.permutations(range(1, t.n)):
        cycle = (0,) + rest
        if all((a, b) in t.arcs for a, b in zip(cycle, cycle[1:] + (0,))):
            return True
    return False


def tournament_s_collection(
    t: Digraph, top: Optional[FiniteTopology] = None
) -> List[EventuallyPeriodicSet]:
    opens = None if top is None else top.nonempty_opens()
    return rel_s_collection(t.to_relation(), opens)


def collection_discrepancies(
    collection: Sequence[EventuallyPeriodicSet], published: Sequence[EventuallyPeriodicSet]
) -> Dict[str, List[EventuallyPeriodicSet]]:
    """
    Compare a realized collection with a published generator list.

    Returns:
        "unrealized": published sets the relation never realizes;
        "outside": realized sets that are not finite unions of the published ones
    """
    unions = finite_unions_of(published, include_empty=True)
    realized = set(collection)
    report = {
        "unrealized": [g for g in published if g not in realized],
        "outside": [s for s in collection if not family_membership(unions, s)],
    }
    for key, sets in report.items():
        if sets:
            logger.warning("%s: %s", key, ", ".join(render_eps(s) for s in sets))
    return report


@dataclass(frozen=True)
class ExponentTailReport:
    """Outcome of the exponent tail check for one tournament or a tuple of them."""

    exponent: int
    diameter: float
    lacking: Tuple[EventuallyPeriodicSet, ...]
    gap_pair: Optional[Tuple[int, int]]
    family_lacking: Tuple[EventuallyPeriodicSet, ...] = ()
    facts: Dict[str, bool] = field(default_factory=dict, compare=False)

    @property
    def verdict(self) -> Verdict:
        broken = [k for k, ok in self.facts.items() if not ok and k != "family_has_tail"]
        if self.lacking:
            return Verdict(
                Status.NO,
                refuted_set=self.lacking[0],
                detail=f"realized set misses part of the tail from {self.exponent}",
                facts=self.facts,
            )
        if broken:
            return Verdict(Status.NO, detail="failed: " + ", ".join(broken), facts=self.facts)
        return Verdict(Status.YES, facts=self.facts)


def _family_samples(family: FamilySpec) -> List[EventuallyPeriodicSet]:
    if family.kind is FamilyKind.FINITE_UNIONS_OF:
        return family_members(family)
    return list(family.generators)


def tournament_exponent_tail_check(
    tournaments: Sequence[Tournament], family: Optional[FamilySpec] = None
) -> ExponentTailReport:
    """
    Tail containment {k >= e} for the realized return-time sets.

    Args:
        tournaments: One strongly connected tournament, or several for the
            disjoint form; e is then the largest exponent
        family: Optional family; its listed members or generators lacking
            the tail are reported, and when the tournaments are hypercyclic
            for it under the discrete topology facts["family_has_tail"]
            records whether all of them contain the tail

    Returns:
        ExponentTailReport
    """
    group = list(tournaments)
    if not group:
        raise PreconditionError("the tail check needs at least one tournament")
    for t in group:
        if not digraph_strongly_connected(t):
            raise PreconditionError("the tail check needs strongly connected tournaments")
    exponents = [digraph_exponent(t) for t in group]
    e = max(exponents)
    n = group[0].n
    if len(group) == 1:
        realized = tournament_s_collection(group[0])
    else:
        relations = [t.to_relation() for t in group]
        realized = sorted(
            {
                d_hit_set(relations, x, [[y] for y in ys])
                for x in range(n)
                for ys in itertools.product(range(n), repeat=len(group))
            },
            key=lambda s: s.sort_key(),
        )
    lacking = tuple(s for s in realized if not eps_contains_tail_from(s, e))

    leader = group[exponents.index(e)]
    rho = leader.to_relation()
    gap = next(
        ((i, j) for i in range(n) for j in range(n) if not walk_exists(rho, i, j, e - 1)),
        None,
    )
    diameter = directed_diameter(leader)
    facts = {"gap_pair": gap is not None}
    if n >= 5:
        facts["exponent_range"] = 3 <= e <= n + 2
        facts["diameter_bound"] = diameter <= e <= diameter + 3

    family_lacking: Tuple[EventuallyPeriodicSet, ...] = ()
    if family is not None:
        family_lacking = tuple(a for a in _family_samples(family) if not eps_contains_tail_from(a, e))
        relations = [t.to_relation() for t in group]
        if len(group) > 1:
            claimed = decide(DynamicalProperty.D_HYPERCYCLIC, relations, topology_discrete(n), family)
        else:
            claimed = decide(DynamicalProperty.HYPERCYCLIC, relations[0], topology_discrete(n), family)
        if claimed.is_yes:
            facts["family_has_tail"] = not family_lacking
    return ExponentTailReport(e, diameter, lacking, gap, family_lacking, facts)


def build_disjoint_counterexample(
    n: int, copies: int = 2, verify: bool = True
) -> Tuple[Tuple[Tournament, ...], FiniteTopology]:
    """
    Two tournaments whose tuple is d-hypercyclic but not strongly d-hypercyclic.

    The node x1 dominates everything in both; T1 reverses x3x5, T2 reverses
    x2x3 and x2x5. Every other arc runs from the lower to the higher index.
    Copies beyond two alternate T1, T2. The topology opens {x2}, {x3} and
    their union.

    Args:
        n: Node count, at least 5
        copies: Tuple length N >= 2
        verify: Re-decide both properties under ALL_NONEMPTY before returning

    Returns:
        Tuple of (tournaments, topology)
    """
    if n < 5:
        raise PreconditionError(f"no counterexample exists below five nodes, got n={n}")
    if copies < 2:
        raise PreconditionError(f"the disjoint form needs at least two tournaments, got {copies}")
    reversed_first = {(2, 4)}
    reversed_second = {(1, 2), (1, 4)}

    def build(flipped) -> Tournament:
        arcs = [(j, i) if (i, j) in flipped else (i, j) for i, j in itertools.combinations(range(n), 2)]
        return Tournament(n, frozenset(arcs))

    first, second = build(reversed_first), build(reversed_second)
    tournaments = tuple(first if k % 2 == 0 else second for k in range(copies))
    top = topology_validate(n, [(), (1,), (2,), (1, 2), range(n)])
    if verify:
        verdict = verify_disjoint_counterexample(tournaments, top)
        if not verdict.is_yes:
            raise HyperrelError(f"constructed tuple is not a counterexample: {verdict.detail}")
    return tournaments, top


def verify_disjoint_counterexample(
    tournaments: Sequence[Tournament], top: FiniteTopology, family: Optional[FamilySpec] = None
) -> Verdict:
    """Yes iff x1 is the only d-hypercyclic vector and no strong one exists."""
    family = family or all_nonempty()
    relations = [t.to_relation() for t in tournaments]
    plain = is_dF_hypercyclic(relations, top, family)
    strong = is_strongly_dF_hypercyclic(relations, top, family)
    facts = {
        "d_hypercyclic": plain.is_yes,
        "unique_witness": plain.witnesses == (0,),
        "strongly_refuted": strong.is_no,
    }
    if all(facts.values()):
        return Verdict(Status.YES, witness=0, witnesses=(0,), facts=facts)
    failed = ", ".join(k for k, ok in facts.items() if not ok)
    return Verdict(Status.NO, detail=f"failed: {failed}", facts=facts)


def _survey_row(job: Tuple[int, int]) -> Dict:
    n, code = job
    t = tournament_from_bits(n, code)
    collection = tournament_s_collection(t)
    strong = digraph_strongly_connected(t)
    exponent = rel_power_trace(t.to_relation()).all_positive_from()
    return {
        "bits": code,
        "s_index": len(collection),
        "exponent": exponent,
        "strong": strong,
        "hamiltonian": tournament_is_hamiltonian(t),
        "collection": "; ".join(render_eps(s) for s in collection),
    }


@dataclass
class Survey:
    """a_n data: one row per tournament, the largest S-index and the classes attaining it."""

    n: int
    table: pd.DataFrame
    maximum: int
    extremal: List[int]

    def a_n(self) -> List[int]:
        """The distinct S-index values, ascending."""
        return sorted(int(v) for v in self.table["s_index"].unique())


def survey_a_n(
    n: int, up_to_iso: bool = True, strong_only: bool = False, workers: Optional[int] = None
) -> Survey:
    """
    S-index of every tournament on n nodes under the discrete topology.

    Args:
        n: Node count, 2 <= n <= 7
        up_to_iso: One row per isomorphism class instead of per labelled tournament
        strong_only: Keep strongly connected tournaments only
        workers: Worker processes; HYPERREL_THREADS when None

    Returns:
        Survey sorted by code
    """
    _check_tournament_size(n)
    codes = _iso_codes(n) if up_to_iso else range(1 << (n * (n - 1) // 2))
    rows = parallel_map(_survey_row, [(n, code) for code in codes], workers=workers)
    columns = ["bits", "s_index", "exponent", "strong", "hamiltonian", "collection"]
    table = pd.DataFrame(rows, columns=columns)
    table["exponent"] = table["exponent"].astype(object)
    if strong_only:
        table = table[table["strong"]].reset_index(drop=True)
    if table.empty:
        return Survey(n, table, 0, [])
    maximum = int(table["s_index"].max())
    extremal = [int(b) for b in table.loc[table["s_index"] == maximum, "bits"]]
    logger.info("survey n=%d: %d rows, maximum S-index %d", n, len(table), maximum)
    return Survey(n, table, maximum, extremal)
