"""
Sample instances for hyperrel.
Named worked instances with their topologies, the published 4-tournament collections,
and a seeded generator for random relations, digraphs, tournaments and topologies.
"""

import logging
from typing import Dict, List

import networkx as nx
import numpy as np

from src.components.digraphs import Digraph, Tournament, tournament_from_bits
from src.components.family import finite_unions_of
from src.components.graphs import SimpleGraph, graph_from_networkx, graph_standard
from src.components.natset import (
    EMPTY,
    EventuallyPeriodicSet,
    eps_complement,
    eps_finite,
    eps_from_progression,
)
from src.components.relations import BooleanRelation, RelationSequence
from src.components.topology import FiniteTopology, topology_generated_by, topology_validate
from src.data.instance_io import InstanceFile, make_instance

logger = logging.getLogger(__name__)


def _one_based(pairs) -> List:
    return [(i - 1, j - 1) for i, j in pairs]


def _cofinite(*missing: int) -> EventuallyPeriodicSet:
    return eps_complement(eps_finite(missing))


def one_way_digraph() -> Digraph:
    """x3 reaches the closed walk x1x4 through x2 and the sink x5."""
    return Digraph(5, frozenset(_one_based([(3, 2), (3, 5), (2, 1), (1, 4), (4, 1)])))


def one_way_topology() -> FiniteTopology:
    return topology_validate(5, [(), (1,), (4,), (1, 4), range(5)])


def forked_digraph() -> Digraph:
    """x1 forks to x2 and to the two-cycle x3x4."""
    return Digraph(4, frozenset(_one_based([(1, 2), (1, 3), (3, 4), (4, 3)])))


def forked_topology() -> FiniteTopology:
    return topology_validate(4, [(), (1,), (2,), (1, 2), range(4)])


def looped_pair() -> BooleanRelation:
    """x1 -> x2 with a loop at x2."""
    return BooleanRelation.from_pairs(2, _one_based([(1, 2), (2, 2)]))


def looped_pair_topology() -> FiniteTopology:
    return topology_validate(2, [(), (1,), range(2)])


def single_arc() -> BooleanRelation:
    return BooleanRelation.from_pairs(2, [(0, 1)])


def single_arc_family():
    """The unions of {1} with the empty set allowed."""
    return finite_unions_of([eps_finite([1])], include_empty=True)


def alternating_sequence() -> RelationSequence:
    """rho_n = {(x, y)} for odd n and {(y, x)} for even n."""
    forward = BooleanRelation.from_pairs(2, [(0, 1)])
    backward = BooleanRelation.from_pairs(2, [(1, 0)])
    return RelationSequence((), (forward, backward))


def transitive_tournament(n: int = 4) -> Tournament:
    return tournament_from_bits(n, (1 << (n * (n - 1) // 2)) - 1)


def dominating_cycle_tournament() -> Tournament:
    """x1 beats the directed triangle x2x3x4."""
    return Tournament(4, frozenset(_one_based([(1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (4, 2)])))


def dominated_cycle_tournament() -> Tournament:
    """The directed triangle x2x3x4 beats x1."""
    return Tournament(4, frozenset(_one_based([(2, 1), (3, 1), (4, 1), (2, 3), (3, 4), (4, 2)])))


def strong_tournament() -> Tournament:
    """The directed square x1x2x3x4 with the chords x1x3 and x2x4."""
    return Tournament(4, frozenset(_one_based([(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (2, 4)])))


FOUR_TOURNAMENTS = {
    "transitive": transitive_tournament,
    "dominating-cycle": dominating_cycle_tournament,
    "dominated-cycle": dominated_cycle_tournament,
    "strong": strong_tournament,
}

# Return-time sets listed in the literature for each 4-tournament under the
# discrete topology; the realized collections are compared against them.
_CYCLIC = [EMPTY, eps_from_progression(0, 3), eps_from_progression(1, 3), eps_from_progression(2, 3)]
PUBLISHED_COLLECTIONS: Dict[str, List[EventuallyPeriodicSet]] = {
    "transitive": [EMPTY, eps_finite([1]), eps_finite([2]), eps_finite([1, 2, 3])],
    "dominating-cycle": _CYCLIC,
    "dominated-cycle": _CYCLIC,
    "strong": [
        _cofinite(2),
        _cofinite(1, 4),
        _cofinite(2, 3, 6),
        _cofinite(1, 2, 3, 6),
        _cofinite(1, 3, 4, 7),
        _cofinite(1, 2, 4, 5, 8),
    ],
}


class InstanceGenerator:
    """Generate seeded random instances."""

    def __init__(self, seed: int = 0):
        """
        Initialize the generator.

        Args:
            seed: Seed for numpy's default_rng (default: 0)
        """
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def random_relation(self, n: int, density: float = 0.3, loops: bool = True) -> BooleanRelation:
        bits = self.rng.random((n, n)) < density
        if not loops:
            np.fill_diagonal(bits, False)
        return BooleanRelation(bits)

    def random_digraph(self, n: int, density: float = 0.3) -> Digraph:
        rel = self.random_relation(n, density, loops=False)
        return Digraph(n, frozenset(rel.pairs()))

    def random_tournament(self, n: int) -> Tournament:
        m = n * (n - 1) // 2
        return tournament_from_bits(n, int(self.rng.integers(0, 1 << m)))

    def random_connected_graph(self, n: int, p: float = 0.4, attempts: int = 100) -> SimpleGraph:
        """G(n, p) draws until one is connected; the path on n nodes as a fallback."""
        for _ in range(attempts):
            g = nx.gnp_random_graph(n, p, seed=int(self.rng.integers(0, 2**31)))
            if nx.is_connected(g):
                return graph_from_networkx(g)
        logger.warning("no connected G(%d, %.2f) in %d attempts, using the path", n, p, attempts)
        return graph_standard("path", n)

    def random_topology(self, n: int, max_generators: int = 3) -> FiniteTopology:
        k = int(self.rng.integers(1, max_generators + 1))
        gens = [int(g) for g in self.rng.integers(1, 1 << n, size=k)]
        return topology_generated_by(n, gens)


def get_sample_instances() -> Dict[str, InstanceFile]:
    """
    Convenience function to get the named worked instances.

    Returns:
        Dict of name to InstanceFile
    """
    instances = {
        "one-way": make_instance([one_way_digraph()], one_way_topology(), name="one-way"),
        "forked-pair": make_instance(
            [forked_digraph(), forked_digraph()], forked_topology(), name="forked-pair"
        ),
        "looped-pair": make_instance([looped_pair()], looped_pair_topology(), name="looped-pair"),
        "single-arc": make_instance([single_arc()], family=single_arc_family(), name="single-arc"),
        "k2": make_instance([graph_standard("complete", 2)], name="k2"),
        "c4": make_instance([graph_standard("cycle", 4)], name="c4"),
    }
    for name, build in FOUR_TOURNAMENTS.items():
        instances[f"tournament-{name}"] = make_instance([build()], name=f"tournament-{name}")
    return instances


if __name__ == "__main__":
    from src.data.instance_io import instance_to_text

    for label, instance in get_sample_instances().items():
        print(f"== {label}")
        print(instance_to_text(instance))
