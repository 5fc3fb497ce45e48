"""
Named verification suites.

Each suite sweeps a family of instances, runs independent computations that
must agree, and returns one CheckResult per instance. Sweeps fan out over
parallel_map, so results come back in job order at every worker count.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.components.digraphs import (
    Digraph,
    build_disjoint_counterexample,
    collection_discrepancies,
    digraph_is_asymmetric,
    digraph_strongly_connected,
    digraph_wproperty,
    tournament_canonical_bits,
    tournament_enumerate,
    tournament_exponent_tail_check,
    tournament_indegrees,
    tournament_is_hamiltonian,
    tournament_redei_path,
    tournament_s_collection,
)
from src.components.dynamics import (
    DynamicalProperty,
    decide,
    hypercyclic_vectors,
    is_dF_hypercyclic,
    is_dF_top_transitive,
    is_F_hypercyclic,
    is_F_top_transitive,
    is_strongly_dF_hypercyclic,
    is_strongly_dF_top_transitive,
    is_strongly_F_hypercyclic,
    is_strongly_F_top_transitive,
    restrict_to_d_infinity,
    strong_hypercyclic_vectors,
)
from src.components.family import (
    all_nonempty,
    family_membership,
    odd_only,
    standard_families,
    upward_from,
)
from src.components.graphs import (
    SimpleGraph,
    connected_graphs,
    graph_bound_bipartite,
    graph_bound_theta,
    graph_from_edges,
    graph_is_bipartite,
    graph_path_formula,
    graph_s_index,
    graph_shared_bipartition,
    graph_standard,
    graph_theta,
    graph_theta_upper_odd_cycle,
    graph_to_relation,
    graph_verify_l_sets,
)
from src.components.natset import (
    EventuallyPeriodicSet,
    eps_complement,
    eps_contains,
    eps_contains_tail_from,
    eps_finite,
    eps_from_pattern,
    eps_from_progression,
    render_eps,
)
from src.components.relations import (
    BooleanRelation,
    rel_d_infinity,
    rel_hit_set,
    rel_power,
    rel_power_trace,
    rel_s_collection,
    seq_hit_set,
    walk_endpoints,
)
from src.components.selection import DEFAULT_SEARCH_BUDGET, Status
from src.components.topology import (
    FiniteTopology,
    mask_to_nodes,
    sample_topologies,
    topology_antidiscrete,
    topology_discrete,
    topology_enumerate_all,
)
from src.data.sample_instances import (
    FOUR_TOURNAMENTS,
    PUBLISHED_COLLECTIONS,
    InstanceGenerator,
    alternating_sequence,
    forked_digraph,
    forked_topology,
    looped_pair,
    looped_pair_topology,
    one_way_digraph,
    one_way_topology,
    single_arc,
    single_arc_family,
)
from src.layouts.report_layout import create_discrepancy_lines
from src.utils.errors import PreconditionError
from src.utils.performance_helpers import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepBounds:
    """
    Size limits shared by every suite.

    samples = 0 means exhaustive wherever a suite offers it; otherwise the
    suite draws that many instances or topologies with numpy's default_rng(seed).
    """

    max_n: int = 4
    samples: int = 0
    seed: int = 0
    workers: Optional[int] = None
    budget: int = DEFAULT_SEARCH_BUDGET


@dataclass(frozen=True)
class CheckResult:
    suite: str
    instance: str
    passed: bool
    detail: str = ""


Suite = Callable[[SweepBounds], List[CheckResult]]
SUITES: Dict[str, Tuple[Suite, str]] = {}


def suite(name: str, description: str) -> Callable[[Suite], Suite]:
    def register(func: Suite) -> Suite:
        SUITES[name] = (func, description)
        return func

    return register


# Short names that verify accepts for groups of suites.
SUITE_ALIASES: Dict[str, Tuple[str, ...]] = {
    "poka": ("graph-disjoint-strong",),
    "vaterpolo": ("discrete-digraph-strong", "small-digraph-disjoint"),
    "pende-primp": ("small-digraph-strong",),
    "pende-bn": ("tournament-disjoint", "tournament-counterexample"),
    "moguce": ("bipartite-closed-form",),
    "reza": ("parity-bound", "diameter-bound"),
    "radio": ("nonbipartite-disjoint", "bipartite-disjoint"),
    "idiot": ("exponent-tail",),
}


def list_suites() -> List[Tuple[str, str]]:
    """Registered suites in registration order, then the aliases."""
    suites = [(name, SUITES[name][1]) for name in SUITES]
    aliases = [(name, "runs " + ", ".join(members)) for name, members in SUITE_ALIASES.items()]
    return suites + aliases


def resolve_suites(names: Sequence[str]) -> List[str]:
    """Expand `all` and aliases into registered suite names, first occurrence kept."""
    selected: List[str] = []
    for name in names:
        if name == "all":
            expanded = list(SUITES)
        elif name in SUITE_ALIASES:
            expanded = list(SUITE_ALIASES[name])
        elif name in SUITES:
            expanded = [name]
        else:
            choices = ", ".join(list(SUITES) + list(SUITE_ALIASES))
            raise PreconditionError(f"unknown suite {name!r}; choose from {choices}")
        selected.extend(s for s in expanded if s not in selected)
    return selected


def run_suite(name: str, bounds: SweepBounds) -> List[CheckResult]:
    if name not in SUITES:
        return run_suites([name], bounds)
    logger.info("running %s with max_n=%d samples=%d", name, bounds.max_n, bounds.samples)
    return SUITES[name][0](bounds)


def run_suites(names: Sequence[str], bounds: SweepBounds) -> List[CheckResult]:
    results = []
    for name in resolve_suites(names):
        results.extend(run_suite(name, bounds))
    return results


# Instance sources


def relation_key(rho: BooleanRelation) -> str:
    return f"n={rho.n}:{np.packbits(rho.bits).tobytes().hex()}"


def _relations_from_cells(n: int, cells: Sequence[Tuple[int, int]]) -> Iterator[BooleanRelation]:
    for code in range(1 << len(cells)):
        yield BooleanRelation.from_pairs(n, [c for k, c in enumerate(cells) if code >> k & 1])


def all_relations(n: int) -> Iterator[BooleanRelation]:
    return _relations_from_cells(n, [(i, j) for i in range(n) for j in range(n)])


def loop_free_relations(n: int) -> Iterator[BooleanRelation]:
    return _relations_from_cells(n, [(i, j) for i in range(n) for j in range(n) if i != j])


def labelled_graphs(n: int) -> Iterator[SimpleGraph]:
    pairs = list(itertools.combinations(range(n), 2))
    for code in range(1 << len(pairs)):
        yield graph_from_edges(n, [p for k, p in enumerate(pairs) if code >> k & 1])


def _rng(bounds: SweepBounds, salt: int = 0) -> np.random.Generator:
    return np.random.default_rng(bounds.seed + salt)


def _subsample(items: List, count: int, rng: np.random.Generator) -> List:
    if count <= 0 or count >= len(items):
        return items
    picked = np.sort(rng.choice(len(items), size=count, replace=False))
    return [items[int(k)] for k in picked]


def _topologies(n: int, bounds: SweepBounds, salt: int = 0) -> List[FiniteTopology]:
    if n <= 3:
        return list(topology_enumerate_all(n))
    if n == 4:
        return _subsample(list(topology_enumerate_all(4)), bounds.samples, _rng(bounds, salt))
    return sample_topologies(n, bounds.samples or 20, seed=bounds.seed + salt)


def _sizes(bounds: SweepBounds, low: int, high: int) -> range:
    return range(low, min(bounds.max_n, high) + 1)


def _run(name: str, jobs: List[Tuple], bounds: SweepBounds) -> List[CheckResult]:
    logger.debug("%s: %d jobs", name, len(jobs))
    return parallel_map(_dispatch, [(name,) + job for job in jobs], workers=bounds.workers)


def _dispatch(job: Tuple) -> CheckResult:
    name, key, payload = job
    try:
        passed, detail = CHECKS[name](payload)
    except Exception as exc:  # noqa: BLE001 - surfaced as a failed check
        logger.exception("check %s %s raised", name, key)
        return CheckResult(name, key, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, key, passed, detail)


def _single(name: str, key: str, check: Callable[[], Tuple[bool, str]]) -> CheckResult:
    try:
        passed, detail = check()
    except Exception as exc:  # noqa: BLE001
        logger.exception("check %s %s raised", name, key)
        return CheckResult(name, key, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, key, passed, detail)


def _open_label(top: FiniteTopology) -> str:
    return "[" + " ".join(format(u, "b") for u in top.opens) + "]"


# Equivalence checks: plain and strong deciders agree under ALL_NONEMPTY


def _same(plain, strong) -> bool:
    return plain.status is strong.status and plain.status is not Status.UNKNOWN


def _check_hypercyclic_equivalence(payload) -> Tuple[bool, str]:
    relations, topologies, with_transitive, budget = payload
    family = all_nonempty()
    rho = relations[0]
    for top in topologies:
        plain = is_F_hypercyclic(rho, top, family)
        strong = is_strongly_F_hypercyclic(rho, top, family, budget)
        if not _same(plain, strong):
            return False, f"hypercyclic {plain.status.value} vs strong {strong.status.value} on {_open_label(top)}"
        if with_transitive:
            plain = is_F_top_transitive(rho, top, family)
            strong = is_strongly_F_top_transitive(rho, top, family, budget)
            if not _same(plain, strong):
                return False, f"transitive {plain.status.value} vs strong {strong.status.value}"
    return True, ""


def _check_disjoint_equivalence(payload) -> Tuple[bool, str]:
    relations, topologies, _, budget = payload
    family = all_nonempty()
    for top in topologies:
        plain = is_dF_hypercyclic(relations, top, family)
        strong = is_strongly_dF_hypercyclic(relations, top, family, budget)
        if not _same(plain, strong):
            return False, f"d-hypercyclic {plain.status.value} vs strong {strong.status.value} on {_open_label(top)}"
    return True, ""


def _pair_key(relations: Sequence[BooleanRelation]) -> str:
    return " | ".join(relation_key(r) for r in relations)


@suite("graph-disjoint-strong", "graph pairs: d-hypercyclic iff strongly d-hypercyclic")
def graph_disjoint_strong(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 4):
        graphs = list(labelled_graphs(n)) if n <= 3 else _atlas_graphs(n)
        relations = [graph_to_relation(g) for g in graphs]
        tops = tuple(_topologies(n, bounds))
        for first, second in itertools.product(relations, repeat=2):
            jobs.append((_pair_key([first, second]), ((first, second), tops, False, bounds.budget)))
    return _run("graph-disjoint-strong", jobs, bounds)


def _atlas_graphs(n: int) -> List[SimpleGraph]:
    """Every graph on n nodes up to isomorphism, connected or not."""
    return [graph_from_edges(n, g.edges()) for g in nx.graph_atlas_g() if g.number_of_nodes() == n]


@suite("discrete-digraph-strong", "loop-free digraphs, discrete topology: plain and strong agree")
def discrete_digraph_strong(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 4):
        tops = (topology_discrete(n),)
        for rho in loop_free_relations(n):
            jobs.append((relation_key(rho), ((rho,), tops, True, bounds.budget)))
    return _run("discrete-digraph-strong", jobs, bounds)


@suite("small-digraph-strong", "loop-free digraphs on every topology: hypercyclic iff strongly")
def small_digraph_strong(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 4):
        tops = tuple(_topologies(n, bounds, salt=n))
        for rho in loop_free_relations(n):
            jobs.append((relation_key(rho), ((rho,), tops, False, bounds.budget)))
    return _run("small-digraph-strong", jobs, bounds)


@suite("small-digraph-disjoint", "loop-free digraph pairs on every topology: d-hypercyclic iff strongly")
def small_digraph_disjoint(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 3):
        tops = tuple(_topologies(n, bounds))
        relations = list(loop_free_relations(n))
        pairs = list(itertools.product(relations, repeat=2))
        for first, second in _subsample(pairs, bounds.samples, _rng(bounds, n)):
            jobs.append((_pair_key([first, second]), ((first, second), tops, False, bounds.budget)))
    return _run("small-digraph-disjoint", jobs, bounds)


@suite("tournament-strong", "tournaments: hypercyclic iff strongly hypercyclic")
def tournament_strong(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 3, 6):
        tops = tuple(_topologies(n, bounds, salt=n))
        for t in tournament_enumerate(n, up_to_iso=n >= 5):
            rho = t.to_relation()
            jobs.append((relation_key(rho), ((rho,), tops, False, bounds.budget)))
    return _run("tournament-strong", jobs, bounds)


@suite("tournament-disjoint", "tournament pairs: d-hypercyclic iff strongly d-hypercyclic")
def tournament_disjoint(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 4):
        tops = tuple(_topologies(n, bounds))
        relations = [t.to_relation() for t in tournament_enumerate(n)]
        pairs = list(itertools.product(relations, repeat=2))
        for first, second in _subsample(pairs, bounds.samples, _rng(bounds, n)):
            jobs.append((_pair_key([first, second]), ((first, second), tops, False, bounds.budget)))
    return _run("tournament-disjoint", jobs, bounds)


# Graph suites


def _check_l_sets(payload) -> Tuple[bool, str]:
    (g,) = payload
    verdict = graph_verify_l_sets(g, topology_discrete(g.n))
    if verdict.is_yes:
        return True, ""
    u, v = verdict.refutation
    return False, f"{verdict.detail} at U={sorted(u)} V={sorted(v)}: S={render_eps(verdict.refuted_set)}"


def _graph_key(g: SimpleGraph) -> str:
    return f"n={g.n}:" + ",".join(f"{i + 1}-{j + 1}" for i, j in sorted(g.edges))


@suite("bipartite-closed-form", "connected graphs: S(U,V) equals L(U,V) when bipartite, contains it otherwise")
def bipartite_closed_form(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 7):
        for g in connected_graphs(n):
            if graph_is_bipartite(g) or n <= 5:
                jobs.append((_graph_key(g), (g,)))
    return _run("bipartite-closed-form", jobs, bounds)


def _check_diameter_bound(payload) -> Tuple[bool, str]:
    g, top = payload
    s_all, _ = graph_s_index(g)
    s_top, _ = graph_s_index(g, top)
    bound = graph_bound_bipartite(g)
    if not s_top <= s_all <= bound:
        return False, f"S_tau={s_top} S={s_all} bound={bound}"
    return True, f"S={s_all} bound={bound}"


@suite("diameter-bound", "connected bipartite graphs: S_(G,tau) <= S_G <= diameter bound")
def diameter_bound(bounds: SweepBounds) -> List[CheckResult]:
    generator = InstanceGenerator(bounds.seed)
    jobs = []
    for n in _sizes(bounds, 3, 7):
        for g in connected_graphs(n):
            if graph_is_bipartite(g):
                jobs.append((_graph_key(g), (g, generator.random_topology(n))))
    return _run("diameter-bound", jobs, bounds)


def _odd_cycle(g: SimpleGraph) -> List[int]:
    for cycle in nx.cycle_basis(g.to_networkx()):
        if len(cycle) % 2:
            return cycle
    raise PreconditionError("graph has no odd cycle")


def _check_parity_bound(payload) -> Tuple[bool, str]:
    (g,) = payload
    s_all, collection = graph_s_index(g)
    theta = graph_theta(g)
    bound = graph_bound_theta(g)
    if s_all > bound:
        return False, f"S={s_all} exceeds bound {bound}"
    lacking = [s for s in collection if not eps_contains_tail_from(s, int(theta))]
    if lacking:
        return False, f"{render_eps(lacking[0])} misses the tail from theta={int(theta)}"
    upper = graph_theta_upper_odd_cycle(g, _odd_cycle(g))
    if upper < theta:
        return False, f"odd-cycle bound {upper} below theta {int(theta)}"
    return True, f"S={s_all} bound={bound}"


@suite("parity-bound", "connected non-bipartite graphs: S_G <= floor((theta+1)^2/4) and tails from theta")
def parity_bound(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 3, 7):
        for g in connected_graphs(n):
            if not graph_is_bipartite(g):
                jobs.append((_graph_key(g), (g,)))
    return _run("parity-bound", jobs, bounds)


@suite("path-formula", "paths P_2..P_8: closed form equals the enumerated S-index")
def path_formula(bounds: SweepBounds) -> List[CheckResult]:
    results = []
    for n in range(2, 9):

        def check(n=n):
            count, _ = graph_s_index(graph_standard("path", n))
            expected = graph_path_formula(n)
            if n == 2:
                # distances 0 and 2 share the progression 2N only when diameter >= 2
                return count == 3, f"S={count} formula={expected}, diameter 1 lies outside the closed form"
            return count == expected, f"S={count} formula={expected}"

        results.append(_single("path-formula", f"P_{n}", check))
    return results


def _check_nonbipartite_disjoint(payload) -> Tuple[bool, str]:
    first, second, budget = payload
    n = first.n
    verdict = is_strongly_dF_hypercyclic([first, second], topology_discrete(n), all_nonempty(), budget)
    if verdict.witnesses != tuple(range(n)):
        return False, f"{verdict.status.value} with witnesses {list(verdict.witnesses)}"
    return True, ""


@suite("nonbipartite-disjoint", "connected non-bipartite graph pairs: every node is a strong d-witness")
def nonbipartite_disjoint(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 3, 5):
        graphs = [graph_to_relation(g) for g in connected_graphs(n) if not graph_is_bipartite(g)]
        pairs = list(itertools.product(graphs, repeat=2))
        for first, second in _subsample(pairs, bounds.samples, _rng(bounds, n)):
            jobs.append((_pair_key([first, second]), (first, second, bounds.budget)))
    return _run("nonbipartite-disjoint", jobs, bounds)


def _check_bipartite_disjoint(payload) -> Tuple[bool, str]:
    first, second = payload
    rels = [graph_to_relation(first), graph_to_relation(second)]
    verdict = is_dF_hypercyclic(rels, topology_discrete(first.n), all_nonempty())
    return verdict.is_no, verdict.status.value


@suite("bipartite-disjoint", "graph pairs with a shared bipartition are never d-hypercyclic")
def bipartite_disjoint(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 5):
        graphs = [g for g in connected_graphs(n) if graph_is_bipartite(g)]
        for first, second in itertools.product(graphs, repeat=2):
            if graph_shared_bipartition(first, second) is not None:
                jobs.append((_graph_key(first) + " | " + _graph_key(second), (first, second)))
    return _run("bipartite-disjoint", jobs, bounds)


# Tournament suites


def _walk_collection(rho: BooleanRelation, masks: Sequence[int]) -> List[EventuallyPeriodicSet]:
    """S(U, V) from layered walk expansion over lengths 1..s+2p, no matrix products."""
    trace = rel_power_trace(rho)
    cut, period = trace.preperiod - 1, trace.period
    horizon = cut + 2 * period
    found = set()
    for u in masks:
        reached = [walk_endpoints(rho, mask_to_nodes(u), k) for k in range(1, horizon + 1)]
        for v in masks:
            targets = mask_to_nodes(v)
            bits = [bool(r & targets) for r in reached]
            if bits[cut : cut + period] != bits[cut + period :]:
                raise PreconditionError("walk membership is not periodic where the powers are")
            found.add(eps_from_pattern(bits[:cut], bits[cut : cut + period]))
    return sorted(found, key=lambda s: s.sort_key())


@suite("four-tournaments", "the four 4-tournaments: matrix and walk collections agree; published lists compared")
def four_tournaments(bounds: SweepBounds) -> List[CheckResult]:
    results = []
    masks = list(range(1, 16))
    for name, build in FOUR_TOURNAMENTS.items():

        def check(name=name, build=build):
            t = build()
            matrix = tournament_s_collection(t)
            walks = _walk_collection(t.to_relation(), masks)
            if matrix != walks:
                return False, "matrix and walk collections differ"
            report = collection_discrepancies(matrix, PUBLISHED_COLLECTIONS[name])
            notes = create_discrepancy_lines(name, report)
            return True, f"S={len(matrix)}; " + "; ".join(notes)

        results.append(_single("four-tournaments", name, check))

    def classes():
        iso = {tournament_canonical_bits(t) for t in tournament_enumerate(4, up_to_iso=True)}
        named = {tournament_canonical_bits(build()) for build in FOUR_TOURNAMENTS.values()}
        return iso == named and len(iso) == 4, f"{len(iso)} classes"

    results.append(_single("four-tournaments", "classes", classes))
    return results


def _check_counterexample(payload) -> Tuple[bool, str]:
    n, copies = payload
    tournaments, _ = build_disjoint_counterexample(n, copies, verify=True)
    return len(tournaments) == copies, ""


@suite("tournament-counterexample", "the d-hypercyclic but not strongly d-hypercyclic tournament tuples")
def tournament_counterexample(bounds: SweepBounds) -> List[CheckResult]:
    jobs = [(f"n={n} N={k}", (n, k)) for n in range(5, max(5, min(bounds.max_n, 7)) + 1) for k in (2, 3)]
    results = _run("tournament-counterexample", jobs, bounds)

    def rejects_small():
        try:
            build_disjoint_counterexample(4)
        except PreconditionError:
            return True, ""
        return False, "n=4 was accepted"

    results.append(_single("tournament-counterexample", "n=4 rejected", rejects_small))
    return results


def _check_exponent_tail(payload) -> Tuple[bool, str]:
    tournaments = payload
    report = tournament_exponent_tail_check(tournaments)
    verdict = report.verdict
    return verdict.is_yes, f"e={report.exponent} d={int(report.diameter)} {verdict.detail}".strip()


@suite("exponent-tail", "strong tournaments: exponent range, diameter bound and tails of realized sets")
def exponent_tail(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 4, 7):
        strong = [t for t in tournament_enumerate(n, up_to_iso=True) if digraph_strongly_connected(t)]
        for t in strong:
            jobs.append((relation_key(t.to_relation()), (t,)))
        if n == 4:
            for first, second in itertools.product(strong, repeat=2):
                jobs.append((_pair_key([first.to_relation(), second.to_relation()]), (first, second)))
    return _run("exponent-tail", jobs, bounds)


def _check_tournament_structure(payload) -> Tuple[bool, str]:
    t, with_tuple = payload
    top = topology_discrete(t.n)
    family = all_nonempty()
    rho = t.to_relation()
    strong_hyp = is_strongly_F_hypercyclic(rho, top, family).is_yes
    indegrees_ok = min(tournament_indegrees(t)) >= 1
    if strong_hyp != indegrees_ok:
        return False, f"strongly hypercyclic={strong_hyp} but indegrees {tournament_indegrees(t)}"
    connected = digraph_strongly_connected(t)
    if t.n >= 3 and tournament_is_hamiltonian(t) != connected:
        return False, f"hamiltonian={not connected}, strongly connected={connected}"
    if with_tuple:
        tuple_ok = is_strongly_dF_top_transitive([rho, rho], top, family).is_yes
        if tuple_ok != connected:
            return False, f"strong d-transitivity={tuple_ok} but strongly connected={connected}"
    for x in range(t.n if digraph_is_asymmetric(t) else 0):
        if eps_contains(rel_hit_set(rho, x, [x]), 2):
            return False, f"closed walk of length 2 at x{x + 1}"
    return True, ""


def _check_redei(payload) -> Tuple[bool, str]:
    (t,) = payload
    path = tournament_redei_path(t)
    return len(path) == t.n, ""


@suite("tournament-structure", "indegrees, Hamiltonicity, strong connectivity and Redei paths of tournaments")
def tournament_structure(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 2, 6):
        for t in tournament_enumerate(n, up_to_iso=True):
            jobs.append((relation_key(t.to_relation()), (t, n in (4, 5))))
    results = _run("tournament-structure", jobs, bounds)
    paths = [
        (relation_key(t.to_relation()), (t,))
        for n in _sizes(bounds, 2, 5)
        for t in tournament_enumerate(n)
    ]
    return results + _run("redei-path", paths, bounds)


def _check_underlying(payload) -> Tuple[bool, str]:
    (rho,) = payload
    d = Digraph(rho.n, frozenset(rho.pairs()))
    top = topology_discrete(rho.n)
    family = all_nonempty()
    for prop in (
        DynamicalProperty.HYPERCYCLIC,
        DynamicalProperty.TRANSITIVE,
        DynamicalProperty.STRONG_HYPERCYCLIC,
        DynamicalProperty.STRONG_TRANSITIVE,
    ):
        verdict = digraph_wproperty([d], top, family, prop)
        if not verdict.facts.get("implication", True):
            return False, f"{prop.value} does not carry over to the underlying graph"
    return True, ""


@suite("underlying-graph", "digraph properties carry over to the underlying graph")
def underlying_graph(bounds: SweepBounds) -> List[CheckResult]:
    jobs = [(relation_key(rho), (rho,)) for n in _sizes(bounds, 2, 3) for rho in loop_free_relations(n)]
    return _run("underlying-graph", jobs, bounds)


# Dynamics invariants


def _relation_pool(n: int, bounds: SweepBounds) -> List[BooleanRelation]:
    if n <= 3:
        return list(all_relations(n))
    generator = InstanceGenerator(bounds.seed + n)
    return [generator.random_relation(n) for _ in range(bounds.samples or 50)]


def _check_restriction(payload) -> Tuple[bool, str]:
    rho, topologies, budget = payload
    restricted = restrict_to_d_infinity(rho)
    for top in topologies:
        for family in standard_families():
            for prop in (DynamicalProperty.HYPERCYCLIC, DynamicalProperty.STRONG_HYPERCYCLIC):
                before = decide(prop, rho, top, family, budget)
                after = decide(prop, restricted, top, family, budget)
                if (before.status, before.witnesses) != (after.status, after.witnesses):
                    where = f"{prop.value} {family} on {_open_label(top)}"
                    return False, f"{where}: {before.status.value} vs {after.status.value}"
    return True, ""


@suite("restriction-invariance", "verdicts are unchanged by zeroing rows outside D_inf")
def restriction_invariance(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 1, 4):
        tops = tuple(_topologies(n, bounds, salt=n)) if n <= 3 else tuple(
            _subsample(list(topology_enumerate_all(4)), bounds.samples or 10, _rng(bounds, n))
        )
        for rho in _relation_pool(n, bounds):
            jobs.append((relation_key(rho), (rho, tops, bounds.budget)))
    return _run("restriction-invariance", jobs, bounds)


def _check_projection(payload) -> Tuple[bool, str]:
    first, second, topologies = payload
    for top in topologies:
        for family in standard_families():
            if not (first == second or family.upward_closed):
                continue
            if is_dF_hypercyclic([first, second], top, family).is_yes:
                for k, rho in enumerate((first, second), start=1):
                    if not is_F_hypercyclic(rho, top, family).is_yes:
                        return False, f"component {k} not hypercyclic for {family} on {_open_label(top)}"
    return True, ""


@suite("component-projection", "each component of a d-hypercyclic pair is hypercyclic")
def component_projection(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 1, 3):
        relations = list(all_relations(n))
        pairs = list(itertools.product(relations, repeat=2))
        if n == 3:
            pairs = _subsample(pairs, bounds.samples or 500, _rng(bounds, n))
        tops = tuple(_topologies(n, bounds))
        for first, second in pairs:
            jobs.append((_pair_key([first, second]), (first, second, tops)))
    return _run("component-projection", jobs, bounds)


def _check_discrete_union(payload) -> Tuple[bool, str]:
    (rho,) = payload
    top = topology_discrete(rho.n)
    domain = rel_d_infinity(rho)
    for family in standard_families():
        if not family.upward_closed:
            continue
        vectors = hypercyclic_vectors(rho, top, family)
        expected = frozenset(
            x
            for x in domain
            if all(family_membership(family, rel_hit_set(rho, x, [y])) for y in range(rho.n))
        )
        if vectors != expected:
            return False, f"{family}: {sorted(vectors)} vs singleton test {sorted(expected)}"
    return True, ""


@suite("discrete-union", "discrete topology: hypercyclic vectors follow from singleton return sets")
def discrete_union(bounds: SweepBounds) -> List[CheckResult]:
    jobs = [(relation_key(rho), (rho,)) for n in _sizes(bounds, 1, 4) for rho in _relation_pool(n, bounds)]
    return _run("discrete-union", jobs, bounds)


def _check_anti_discrete(payload) -> Tuple[bool, str]:
    rho, budget = payload
    top = topology_antidiscrete(rho.n)
    domain = rel_d_infinity(rho)
    for family in standard_families():
        if not family.contains_N:
            continue
        plain = hypercyclic_vectors(rho, top, family)
        strong, _ = strong_hypercyclic_vectors(rho, top, family, budget)
        if plain != domain or strong != domain:
            return False, f"{family}: plain {sorted(plain)} strong {sorted(strong)} D_inf {sorted(domain)}"
    return True, ""


@suite("anti-discrete-collapse", "anti-discrete topology: plain and strong witnesses both equal D_inf")
def anti_discrete_collapse(bounds: SweepBounds) -> List[CheckResult]:
    jobs = [
        (relation_key(rho), (rho, bounds.budget))
        for n in _sizes(bounds, 1, 4)
        for rho in _relation_pool(n, bounds)
    ]
    return _run("anti-discrete-collapse", jobs, bounds)


def _check_strong_implies_plain(payload) -> Tuple[bool, str]:
    rho, topologies, budget = payload
    for top in topologies:
        for family in standard_families():
            if not family.upward_closed:
                continue
            pairs = (
                (is_strongly_F_hypercyclic, is_F_hypercyclic),
                (is_strongly_F_top_transitive, is_F_top_transitive),
            )
            for strong_decider, plain_decider in pairs:
                if strong_decider(rho, top, family, budget).is_yes and not plain_decider(rho, top, family).is_yes:
                    return False, f"{plain_decider.__name__} fails for {family} on {_open_label(top)}"
    return True, ""


@suite("strong-implies-plain", "upward-closed families: every strong Yes has a plain Yes")
def strong_implies_plain(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 1, 3):
        tops = tuple(_topologies(n, bounds))
        for rho in _relation_pool(n, bounds):
            jobs.append((relation_key(rho), (rho, tops, bounds.budget)))
    return _run("strong-implies-plain", jobs, bounds)


# Relation oracle


def _check_walk_oracle(payload) -> Tuple[bool, str]:
    (rho,) = payload
    for k in range(1, 9):
        power = rel_power(rho, k)
        for i in range(rho.n):
            expected = walk_endpoints(rho, [i], k)
            got = frozenset(int(j) for j in np.flatnonzero(power.bits[i]))
            if got != expected:
                return False, f"row x{i + 1} of power {k}"
    if rho.n <= 3:
        masks = list(range(1, 1 << rho.n))
        if rel_s_collection(rho) != _walk_collection(rho, masks):
            return False, "S-collections differ"
    return True, ""


@suite("walk-oracle", "matrix powers and S-collections agree with walk enumeration")
def walk_oracle(bounds: SweepBounds) -> List[CheckResult]:
    jobs = []
    for n in _sizes(bounds, 1, 5):
        pool = list(all_relations(n)) if n <= 2 else [
            InstanceGenerator(bounds.seed + n).random_relation(n) for _ in range(bounds.samples or 200)
        ]
        jobs.extend((relation_key(rho), (rho,)) for rho in pool)
    return _run("walk-oracle", jobs, bounds)


# Worked examples


def _worked_checks() -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
    odd = eps_from_progression(1, 2)
    even = eps_from_progression(0, 2)
    not_one = eps_complement(eps_finite([1]))

    def k2():
        rho = graph_to_relation(graph_standard("complete", 2))
        got = (rel_hit_set(rho, 0, [0]), rel_hit_set(rho, 0, [1]))
        return got == (even, odd), f"{render_eps(got[0])}, {render_eps(got[1])}"

    def complete():
        for n in (3, 4, 5):
            rho = graph_to_relation(graph_standard("complete", n))
            if rel_hit_set(rho, 0, [0]) != not_one:
                return False, f"K_{n}: S(x1,{{x1}}) = {render_eps(rel_hit_set(rho, 0, [0]))}"
            family = upward_from([not_one])
            top = topology_discrete(n)
            if not is_F_hypercyclic(rho, top, family).is_yes:
                return False, f"K_{n} is not hypercyclic for upward:[N\\{{1}}]"
        return True, ""

    def square():
        rho = graph_to_relation(graph_standard("cycle", 4))
        top = topology_discrete(4)
        yes = [
            p.value
            for p in DynamicalProperty
            if decide(p, [rho, rho] if p.is_disjoint else rho, top, odd_only()).is_yes
        ]
        return not yes, ", ".join(yes)

    def one_way():
        rho = one_way_digraph().to_relation()
        top = one_way_topology()
        family = all_nonempty()
        vectors = hypercyclic_vectors(rho, top, family)
        strong, _ = strong_hypercyclic_vectors(rho, top, family)
        transitive = is_F_top_transitive(rho, top, family)
        ok = vectors == {2} and not strong and transitive.is_no
        return ok, f"vectors={sorted(vectors)} strong={sorted(strong)} transitive={transitive.status.value}"

    def forked():
        rho = forked_digraph().to_relation()
        top = forked_topology()
        family = all_nonempty()
        plain = is_dF_hypercyclic([rho, rho], top, family)
        strong = is_strongly_dF_hypercyclic([rho, rho], top, family)
        ok = plain.witnesses == (0,) and strong.is_no and is_dF_top_transitive([rho, rho], top, family).is_no
        return ok, f"witnesses={list(plain.witnesses)} strong={strong.status.value}"

    def looped():
        rho = looped_pair()
        top = looped_pair_topology()
        family = all_nonempty()
        vectors = hypercyclic_vectors(rho, top, family)
        strong, _ = strong_hypercyclic_vectors(rho, top, family)
        return vectors == {0, 1} and strong == {0, 1}, f"vectors={sorted(vectors)} strong={sorted(strong)}"

    def single():
        rho = single_arc()
        top = topology_discrete(2)
        family = single_arc_family()
        plain = is_F_top_transitive(rho, top, family)
        strong = is_strongly_F_top_transitive(rho, top, family)
        return plain.is_yes and strong.is_no, f"{plain.status.value}/{strong.status.value}"

    def alternating():
        seq = alternating_sequence()
        top = topology_discrete(2)
        family = upward_from([even, odd])
        strong = is_strongly_F_top_transitive(seq, top, family)
        hit = seq_hit_set(seq, 0, [1])
        return strong.is_no and hit == odd, f"strong={strong.status.value} S(x,{{y}})={render_eps(hit)}"

    return [
        ("K_2 return sets", k2),
        ("K_3..K_5", complete),
        ("C_4 odd-only", square),
        ("one-way digraph", one_way),
        ("forked pair", forked),
        ("looped pair", looped),
        ("single arc", single),
        ("alternating sequence", alternating),
    ]


@suite("worked-examples", "the worked instances reproduce their expected verdicts")
def worked_examples(bounds: SweepBounds) -> List[CheckResult]:
    return [_single("worked-examples", key, check) for key, check in _worked_checks()]


CHECKS: Dict[str, Callable] = {
    "graph-disjoint-strong": _check_disjoint_equivalence,
    "discrete-digraph-strong": _check_hypercyclic_equivalence,
    "small-digraph-strong": _check_hypercyclic_equivalence,
    "small-digraph-disjoint": _check_disjoint_equivalence,
    "tournament-strong": _check_hypercyclic_equivalence,
    "tournament-disjoint": _check_disjoint_equivalence,
    "bipartite-closed-form": _check_l_sets,
    "diameter-bound": _check_diameter_bound,
    "parity-bound": _check_parity_bound,
    "nonbipartite-disjoint": _check_nonbipartite_disjoint,
    "bipartite-disjoint": _check_bipartite_disjoint,
    "tournament-counterexample": _check_counterexample,
    "exponent-tail": _check_exponent_tail,
    "tournament-structure": _check_tournament_structure,
    "redei-path": _check_redei,
    "underlying-graph": _check_underlying,
    "restriction-invariance": _check_restriction,
    "component-projection": _check_projection,
    "discrete-union": _check_discrete_union,
    "anti-discrete-collapse": _check_anti_discrete,
    "strong-implies-plain": _check_strong_implies_plain,
    "walk-oracle": _check_walk_oracle,
}
