"""
Simple undirected graphs as symmetric loop-free relations.
Distances, bipartite closed forms for S(U, V), the S-index and the walk-parity bound theta.
"""

import logging
import math
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.components.dynamics import Verdict
from src.components.natset import (
    EMPTY,
    EventuallyPeriodicSet,
    eps_from_progression,
    eps_is_subset,
    eps_union,
)
from src.components.relations import BooleanRelation, image_sequence, rel_s_collection
from src.components.selection import Status
from src.components.topology import FiniteTopology, mask_to_nodes
from src.utils.errors import HyperrelError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected loop-free graph on nodes 0..n-1; edges stored as (i, j) with i < j."""

    n: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError(f"graphs need at least two nodes, got {self.n}")
        normal = set()
        for i, j in self.edges:
            if i == j:
                raise PreconditionError(f"loop at node {i} is not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise PreconditionError(f"edge ({i}, {j}) out of range for n={self.n}")
            normal.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normal))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def graph_from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> SimpleGraph:
    return SimpleGraph(n, frozenset(edges))


def graph_from_networkx(g: nx.Graph) -> SimpleGraph:
    index = {node: k for k, node in enumerate(sorted(g.nodes()))}
    return SimpleGraph(g.number_of_nodes(), frozenset((index[a], index[b]) for a, b in g.edges()))


def graph_to_relation(g: SimpleGraph) -> BooleanRelation:
    pairs = [(i, j) for i, j in g.edges] + [(j, i) for i, j in g.edges]
    return BooleanRelation.from_pairs(g.n, pairs)


def graph_standard(kind: str, n: int) -> SimpleGraph:
    """
    Standard graphs P_n, C_n and K_n.

    Args:
        kind: One of path, cycle, complete
        n: Number of nodes (>= 2, >= 3 for cycles)

    Returns:
        SimpleGraph
    """
    builders = {"path": nx.path_graph, "cycle": nx.cycle_graph, "complete": nx.complete_graph}
    if kind not in builders:
        raise PreconditionError(f"unknown graph kind {kind!r}; choose from {sorted(builders)}")
    if n < 2 or (kind == "cycle" and n < 3):
        raise PreconditionError(f"{kind} graph needs more nodes, got {n}")
    return graph_from_networkx(builders[kind](n))


def graph_is_connected(g: SimpleGraph) -> bool:
    return nx.is_connected(g.to_networkx())


def graph_is_bipartite(g: SimpleGraph) -> bool:
    return nx.is_bipartite(g.to_networkx())


def graph_distance_matrix(g: SimpleGraph) -> np.ndarray:
    """Shortest-path distances; unreachable pairs hold math.inf."""
    dist = np.full((g.n, g.n), math.inf)
    for u, lengths in nx.all_pairs_shortest_path_length(g.to_networkx()):
        for v, d in lengths.items():
            dist[u, v] = d
    return dist


def graph_diameter(g: SimpleGraph) -> float:
    return float(graph_distance_matrix(g).max())


def _require_connected(g: SimpleGraph) -> None:
    if not graph_is_connected(g):
        raise PreconditionError("graph must be connected")


def _parity_bounds(dist: np.ndarray, sources: Sequence[int], targets: Sequence[int]) -> Tuple[float, float]:
    block = dist[np.ix_(list(sources), list(targets))]
    even = block[block % 2 == 0]
    odd = block[block % 2 == 1]
    return (even.min() if even.size else math.inf, odd.min() if odd.size else math.inf)


def graph_l_set(g: SimpleGraph, source: Iterable[int], target: Iterable[int]) -> EventuallyPeriodicSet:
    """
    L(U, V) = {d(u, v) + 2k : u in U, v in V, k >= 0} intersected with N.

    Only the smallest even and the smallest odd distance matter, since the
    progressions of one parity are nested.
    """
    _require_connected(g)
    return _l_from_distances(graph_distance_matrix(g), source, target)


def _l_from_distances(dist: np.ndarray, source: Iterable[int], target: Iterable[int]) -> EventuallyPeriodicSet:
    sources, targets = sorted(set(source)), sorted(set(target))
    if not sources or not targets:
        raise PreconditionError("L(U, V) needs nonempty U and V")
    result = EMPTY
    for d in _parity_bounds(dist, sources, targets):
        if d != math.inf:
            result = eps_union(result, eps_from_progression(int(d), 2))
    return result


def graph_verify_l_sets(g: SimpleGraph, top: FiniteTopology) -> Verdict:
    """
    Compare S(U, V) with L(U, V) over all nonempty open pairs.

    Bipartite graphs must give equality; other connected graphs only L inside S.
    """
    _require_connected(g)
    rho = graph_to_relation(g)
    bipartite = graph_is_bipartite(g)
    dist = graph_distance_matrix(g)
    opens = top.nonempty_opens()
    for u in opens:
        seq = image_sequence(rho, u)
        for v in opens:
            s = seq.hit_set(v)
            ell = _l_from_distances(dist, mask_to_nodes(u), mask_to_nodes(v))
            ok = s == ell if bipartite else eps_is_subset(ell, s)
            if not ok:
                return Verdict(
                    Status.NO,
                    refutation=(mask_to_nodes(u), mask_to_nodes(v)),
                    refuted_set=s,
                    detail="S differs from L" if bipartite else "L is not inside S",
                )
    return Verdict(Status.YES, facts={"bipartite": bipartite})


def graph_s_index(
    g: SimpleGraph, top: Optional[FiniteTopology] = None
) -> Tuple[int, List[EventuallyPeriodicSet]]:
    """
    Number of distinct S(U, V) with the collection itself.

    Args:
        g: Graph
        top: Ranges over its nonempty opens; all nonempty subsets when None

    Returns:
        Tuple of (count, sorted collection)
    """
    opens = None if top is None else top.nonempty_opens()
    collection = rel_s_collection(graph_to_relation(g), opens)
    logger.debug("S-index %d on %d nodes with %d edges", len(collection), g.n, len(g.edges))
    return len(collection), collection


def _bipartite_formula(d: int) -> int:
    numerator = 4 * d + d * d - (d % 2)
    if numerator % 4:
        raise PreconditionError(f"bipartite bound is not integral for d={d}")
    return numerator // 4


def graph_bound_bipartite(g: SimpleGraph) -> int:
    """d + d^2/4 - [d odd]/4 for the diameter d."""
    _require_connected(g)
    return _bipartite_formula(int(graph_diameter(g)))


def graph_path_formula(n: int) -> int:
    """Closed form of the S-index of the path on n nodes."""
    if n < 2:
        raise PreconditionError(f"path needs at least two nodes, got {n}")
    return _bipartite_formula(n - 1)


def _parity_distances(g: SimpleGraph) -> Tuple[np.ndarray, np.ndarray]:
    """Shortest even and odd walk lengths >= 1 for every ordered pair."""
    base = g.to_networkx()
    cover = nx.tensor_product(base, nx.complete_graph(2))
    even = np.full((g.n, g.n), math.inf)
    odd = np.full((g.n, g.n), math.inf)
    for u in range(g.n):
        lengths = nx.single_source_shortest_path_length(cover, (u, 0))
        for (v, parity), d in lengths.items():
            (odd if parity else even)[u, v] = d
        even[u, u] = 2 if base.degree(u) else math.inf
    return even, odd


def graph_theta(g: SimpleGraph, include_diagonal: bool = True) -> float:
    """
    Smallest L such that every pair has an even and an odd walk of length at most L.

    Walk lengths are >= 1. Infinite for bipartite or disconnected graphs.
    """
    even, odd = _parity_distances(g)
    worst = np.maximum(even, odd)
    if not include_diagonal:
        np.fill_diagonal(worst, 0)
    return float(worst.max())


def graph_theta_variants(g: SimpleGraph) -> Tuple[float, float]:
    """theta with and without the pairs u = v."""
    return graph_theta(g, True), graph_theta(g, False)


def graph_bound_theta(g: SimpleGraph) -> int:
    """floor((theta + 1)^2 / 4)."""
    theta = graph_theta(g)
    if theta == math.inf:
        raise PreconditionError("theta is infinite for bipartite or disconnected graphs")
    t = int(theta)
    return (t * t + 2 * t + 1) // 4


def graph_theta_upper_odd_cycle(g: SimpleGraph, cycle: Sequence[int]) -> int:
    """
    max over pairs of 2 d(u, C) + d(u, v) + |C| for an odd cycle C of g.

    Args:
        g: Connected graph
        cycle: Nodes of the cycle in order

    Returns:
        The bound, which dominates theta

    Raises:
        HyperrelError: if the bound falls below theta
    """
    _require_connected(g)
    nodes = list(cycle)
    if len(nodes) < 3 or len(nodes) % 2 == 0 or len(set(nodes)) != len(nodes):
        raise PreconditionError(f"{nodes} is not an odd cycle of distinct nodes")
    for a, b in zip(nodes, nodes[1:] + nodes[:1]):
        if (min(a, b), max(a, b)) not in g.edges:
            raise PreconditionError(f"{a} and {b} are not adjacent, so {nodes} is not a cycle of g")
    dist = graph_distance_matrix(g)
    to_cycle = dist[:, nodes].min(axis=1)
    bound = int((2 * to_cycle[:, None] + dist).max()) + len(nodes)
    theta = graph_theta(g)
    if bound < theta:
        raise HyperrelError(f"odd-cycle bound {bound} is below theta {theta} for cycle {nodes}")
    return bound


def graph_shared_bipartition(
    first: SimpleGraph, second: SimpleGraph
) -> Optional[Tuple[FrozenSet[int], FrozenSet[int]]]:
    """A bipartition (X, Y) shared by both graphs, or None."""
    if first.n != second.n:
        return None
    union = nx.compose(first.to_networkx(), second.to_networkx())
    if not nx.is_connected(union) or not nx.is_bipartite(union):
        return None
    left, right = nx.bipartite.sets(union)
    return frozenset(left), frozenset(right)


def connected_graphs(n: int) -> List[SimpleGraph]:
    """Connected graphs on n <= 7 nodes, one per isomorphism class, from the graph atlas."""
    if n < 2 or n > 7:
        raise PreconditionError(f"the graph atlas covers 2 <= n <= 7, got {n}")
    return [
        graph_from_networkx(g)
        for g in nx.graph_atlas_g()
        if g.number_of_nodes() == n and nx.is_connected(g)
    ]
