"""
Instance files: relations, graphs, digraphs and tournaments with an optional topology and family.

Format (nodes numbered from 1, `#` starts a comment):

    nodes: 5            or   tournament: 5
    kind: digraph       optional; relation, graph, digraph or tournament
    arc: 3 2            one pair per line; `edge: i j` adds both directions
    next                starts the next relation of a tuple
    open: 2 5           open sets; the discrete topology when absent
    family: all-nonempty
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from src.components.digraphs import Digraph, Tournament
from src.components.family import FamilySpec, parse_family, render_family
from src.components.graphs import SimpleGraph
from src.components.relations import BooleanRelation
from src.components.topology import FiniteTopology, topology_discrete, topology_from_text, topology_to_text
from src.utils.errors import HyperrelError, ParseError

logger = logging.getLogger(__name__)

KINDS = ("relation", "graph", "digraph", "tournament")

Structure = Union[BooleanRelation, SimpleGraph, Digraph]


@dataclass
class InstanceFile:
    """A parsed instance: one or more structures on the same nodes."""

    n: int
    kind: str
    structures: List[Structure]
    topology: FiniteTopology
    family: Optional[FamilySpec] = None
    explicit_topology: bool = False
    name: str = ""
    comments: List[str] = field(default_factory=list)

    @property
    def relations(self) -> List[BooleanRelation]:
        return [as_relation(s) for s in self.structures]

    @property
    def is_tuple(self) -> bool:
        return len(self.structures) > 1


def as_relation(structure: Structure) -> BooleanRelation:
    if isinstance(structure, BooleanRelation):
        return structure
    if isinstance(structure, SimpleGraph):
        pairs = list(structure.edges) + [(j, i) for i, j in structure.edges]
        return BooleanRelation.from_pairs(structure.n, pairs)
    return structure.to_relation()


def _pair(text: str, number: int, n: int) -> Tuple[int, int]:
    body = text.split(":", 1)[1].split()
    if len(body) != 2:
        raise ParseError(f"expected two node indices in {text!r}", number)
    try:
        i, j = (int(tok) - 1 for tok in body)
    except ValueError as exc:
        raise ParseError(f"bad node index in {text!r}", number) from exc
    if not (0 <= i < n and 0 <= j < n):
        raise ParseError(f"node index out of range 1..{n}", number)
    return i, j


def _build(kind: str, n: int, pairs: List[Tuple[int, int]], number: int) -> Structure:
    try:
        if kind == "relation":
            return BooleanRelation.from_pairs(n, pairs)
        if kind == "graph":
            return SimpleGraph(n, frozenset(pairs))
        if kind == "digraph":
            return Digraph(n, frozenset(pairs))
        return Tournament(n, frozenset(pairs))
    except HyperrelError as exc:
        raise ParseError(str(exc), number) from exc


def parse_instance(text: str, name: str = "") -> InstanceFile:
    """
    Parse instance text.

    Args:
        text: File contents
        name: Label carried into reports

    Returns:
        InstanceFile with validated structures and topology
    """
    n = None
    kind = None
    blocks: List[List[Tuple[int, int, bool]]] = [[]]
    opens: List[Tuple[int, str]] = []
    family = None
    comments = []
    last = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        last = number
        line = raw.split("#", 1)[0].strip()
        if raw.strip().startswith("#"):
            comments.append(raw.strip()[1:].strip())
        if not line:
            continue
        key = line.split(":", 1)[0].strip().lower()
        value = line.split(":", 1)[1].strip() if ":" in line else ""
        if key in ("nodes", "tournament"):
            if n is not None:
                raise ParseError("node count given twice", number)
            try:
                n = int(value)
            except ValueError as exc:
                raise ParseError(f"bad node count {value!r}", number) from exc
            if key == "tournament":
                kind = "tournament"
        elif key == "kind":
            if value not in KINDS:
                raise ParseError(f"unknown kind {value!r}; choose from {', '.join(KINDS)}", number)
            kind = value
        elif key in ("arc", "edge", "pair"):
            if n is None:
                raise ParseError("pairs must follow the node count", number)
            i, j = _pair(line, number, n)
            blocks[-1].append((i, j, key == "edge"))
        elif key == "next":
            blocks.append([])
        elif key == "open":
            opens.append((number, line))
        elif key == "family":
            try:
                family = parse_family(value)
            except ParseError as exc:
                raise ParseError(exc.message, number) from exc
        else:
            raise ParseError(f"unknown directive {key!r}", number)
    if n is None:
        raise ParseError("missing `nodes:` line", last or None)
    if kind is None:
        uses_edges = any(undirected for block in blocks for _, _, undirected in block)
        kind = "graph" if uses_edges else "relation"
    structures = []
    for block in blocks:
        pairs = []
        for i, j, undirected in block:
            pairs.append((i, j))
            if undirected and kind != "graph":
                pairs.append((j, i))
        structures.append(_build(kind, n, pairs, last))
    topology = topology_from_text(n, opens) if opens else topology_discrete(n)
    logger.debug("parsed %s instance on %d nodes with %d structure(s)", kind, n, len(structures))
    return InstanceFile(n, kind, structures, topology, family, bool(opens), name, comments)


def load_instance(path: Union[str, Path]) -> InstanceFile:
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), name=path.stem)


def _pair_lines(structure: Structure) -> List[str]:
    if isinstance(structure, SimpleGraph):
        return [f"edge: {i + 1} {j + 1}" for i, j in sorted(structure.edges)]
    return [f"arc: {i + 1} {j + 1}" for i, j in sorted(as_relation(structure).pairs())]


def instance_to_text(instance: InstanceFile) -> str:
    """Render an instance in the file format; parse_instance reads it back."""
    lines = [f"# {c}" for c in instance.comments]
    if instance.kind == "tournament":
        lines.append(f"tournament: {instance.n}")
    else:
        lines.append(f"nodes: {instance.n}")
        lines.append(f"kind: {instance.kind}")
    for k, structure in enumerate(instance.structures):
        if k:
            lines.append("next")
        lines.extend(_pair_lines(structure))
    if instance.explicit_topology:
        lines.extend(topology_to_text(instance.topology))
    if instance.family is not None:
        lines.append(f"family: {render_family(instance.family)}")
    return "\n".join(lines) + "\n"


def tournament_to_text(t: Tournament) -> str:
    return "\n".join([f"tournament: {t.n}"] + _pair_lines(t)) + "\n"


def make_instance(
    structures: Sequence[Structure],
    topology: Optional[FiniteTopology] = None,
    family: Optional[FamilySpec] = None,
    name: str = "",
) -> InstanceFile:
    """Wrap in-memory structures as an instance; the kind follows the first structure."""
    first = structures[0]
    if isinstance(first, Tournament):
        kind = "tournament"
    elif isinstance(first, Digraph):
        kind = "digraph"
    elif isinstance(first, SimpleGraph):
        kind = "graph"
    else:
        kind = "relation"
    n = first.n
    return InstanceFile(
        n,
        kind,
        list(structures),
        topology or topology_discrete(n),
        family,
        topology is not None,
        name,
    )
