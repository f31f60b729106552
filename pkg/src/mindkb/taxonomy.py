"""Six-level mental-disorder taxonomy: types, validation, edits, queries, JSON I/O.

The hierarchy runs Root (1) -> DisorderGroup (2) -> Disorder (3) ->
Concept (4) -> Instance (5) -> SubInstance (6+), connected by Hierarchical
edges that must form a tree. Cross edges carry a typed label; ``SameAs``
edges are treated as symmetric by queries even when stored once.

Taxonomy values are immutable; edits return new values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .errors import (
    CannotRemoveRoot,
    DuplicateId,
    ParseError,
    UnknownNode,
    UnknownParent,
    ValidationError,
)


class NodeKind(str, Enum):
    ROOT = "Root"
    DISORDER_GROUP = "DisorderGroup"
    DISORDER = "Disorder"
    CONCEPT = "Concept"
    INSTANCE = "Instance"
    SUB_INSTANCE = "SubInstance"


class RelationKind(str, Enum):
    HIERARCHICAL = "Hierarchical"
    CROSS = "Cross"


SAME_AS = "SameAs"
CAUSE_IN = "CauseIn"

CONCEPT_LABELS = frozenset({"Symptoms", "Risk Factors", "Supportive Symptoms"})


@dataclass(frozen=True)
class TaxonomyNode:
    id: str
    label: str
    level: int
    kind: NodeKind


@dataclass(frozen=True)
class Relationship:
    source: str
    target: str
    kind: RelationKind
    cross_type: str | None = None

    def key(self) -> tuple[str, str, str]:
        return (self.source, self.target, self.kind.value)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: str  # offending node id or "from->to" edge key

    def __str__(self) -> str:
        return f"{self.code}: {self.message} [{self.subject}]"


@dataclass(frozen=True)
class Taxonomy:
    name: str
    version: str
    nodes: tuple[TaxonomyNode, ...]
    edges: tuple[Relationship, ...]
    source_notes: str = ""
    _by_id: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        by_id = {}
        for node in self.nodes:
            by_id.setdefault(node.id, node)
        object.__setattr__(self, "_by_id", by_id)

    def node(self, node_id: str) -> TaxonomyNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNode(f"no node with id {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._by_id

    def hierarchical_parent(self, node_id: str) -> str | None:
        for edge in self.edges:
            if edge.kind is RelationKind.HIERARCHICAL and edge.target == node_id:
                return edge.source
        return None

    def children(self, node_id: str) -> list[str]:
        out = [e.target for e in self.edges
               if e.kind is RelationKind.HIERARCHICAL and e.source == node_id]
        return sorted(out)

    def cross_edges(self, node_id: str) -> list[Relationship]:
        return [e for e in self.edges
                if e.kind is RelationKind.CROSS
                and node_id in (e.source, e.target)]

    def roots(self) -> list[TaxonomyNode]:
        return [n for n in self.nodes if n.kind is NodeKind.ROOT]

    def instances(self) -> list[TaxonomyNode]:
        return [n for n in self.nodes
                if n.kind in (NodeKind.INSTANCE, NodeKind.SUB_INSTANCE)]


def validate(taxonomy: Taxonomy) -> list[Violation]:
    """Return every invariant violation; empty list means valid.

    Node-level violations come first, ordered by node id, then edge-level
    ones ordered by (source, target).
    """
    node_violations: list[tuple[str, Violation]] = []
    edge_violations: list[tuple[tuple[str, str], Violation]] = []

    seen: set[str] = set()
    for node in taxonomy.nodes:
        if not node.id:
            node_violations.append(("", Violation(
                "empty-id", "node has an empty id", repr(node.label))))
            continue
        if node.id in seen:
            node_violations.append((node.id, Violation(
                "duplicate-id", "node id used more than once", node.id)))
        seen.add(node.id)

    roots = taxonomy.roots()
    if not roots:
        node_violations.append(("", Violation(
            "no-root", "taxonomy has no Root node", "<taxonomy>")))
    elif len(roots) > 1:
        ids = ",".join(sorted(n.id for n in roots))
        node_violations.append(("", Violation(
            "multiple-roots", "taxonomy has more than one Root node", ids)))

    for node in taxonomy.nodes:
        if (node.level == 1) != (node.kind is NodeKind.ROOT):
            node_violations.append((node.id, Violation(
                "kind-level-mismatch",
                f"level 1 and kind Root must coincide "
                f"(got level {node.level}, kind {node.kind.value})", node.id)))
        if node.kind is NodeKind.CONCEPT:
            if node.level != 4:
                node_violations.append((node.id, Violation(
                    "kind-level-mismatch",
                    f"Concept nodes live at level 4 (got {node.level})", node.id)))
            if node.label not in CONCEPT_LABELS:
                node_violations.append((node.id, Violation(
                    "concept-label",
                    f"Concept label must be one of {sorted(CONCEPT_LABELS)} "
                    f"(got {node.label!r})", node.id)))
        if node.kind is NodeKind.INSTANCE and node.level != 5:
            node_violations.append((node.id, Violation(
                "kind-level-mismatch",
                f"Instance nodes live at level 5 (got {node.level})", node.id)))
        if node.kind is NodeKind.SUB_INSTANCE and node.level < 6:
            node_violations.append((node.id, Violation(
                "kind-level-mismatch",
                f"SubInstance nodes live at level >= 6 (got {node.level})",
                node.id)))

    parents: dict[str, list[str]] = {}
    for edge in taxonomy.edges:
        key = (edge.source, edge.target)
        subject = f"{edge.source}->{edge.target}"
        if not taxonomy.has_node(edge.source) or not taxonomy.has_node(edge.target):
            edge_violations.append((key, Violation(
                "orphan-edge", "edge endpoint is not a node in the taxonomy",
                subject)))
            continue
        if edge.kind is RelationKind.HIERARCHICAL:
            lf = taxonomy.node(edge.source).level
            lt = taxonomy.node(edge.target).level
            if lt != lf + 1:
                edge_violations.append((key, Violation(
                    "level-violation",
                    f"hierarchical edge must connect level L to L+1 "
                    f"(got {lf} -> {lt})", subject)))
            parents.setdefault(edge.target, []).append(edge.source)
        else:
            if not edge.cross_type:
                edge_violations.append((key, Violation(
                    "missing-cross-type", "cross edge carries no cross_type",
                    subject)))

    root_ids = {n.id for n in roots}
    for node in taxonomy.nodes:
        node_parents = parents.get(node.id, [])
        if node.id in root_ids:
            if node_parents:
                node_violations.append((node.id, Violation(
                    "root-has-parent", "Root node has a hierarchical parent",
                    node.id)))
        elif node.id in seen:
            if len(node_parents) == 0:
                node_violations.append((node.id, Violation(
                    "missing-parent",
                    "non-root node has no hierarchical parent", node.id)))
            elif len(node_parents) > 1:
                node_violations.append((node.id, Violation(
                    "multiple-parents",
                    "non-root node has more than one hierarchical parent",
                    node.id)))

    # Reachability from the root catches hierarchical cycles and islands.
    if len(roots) == 1:
        reachable = {roots[0].id}
        frontier = [roots[0].id]
        children: dict[str, list[str]] = {}
        for edge in taxonomy.edges:
            if edge.kind is RelationKind.HIERARCHICAL:
                children.setdefault(edge.source, []).append(edge.target)
        while frontier:
            current = frontier.pop()
            for child in children.get(current, ()):
                if child not in reachable:
                    reachable.add(child)
                    frontier.append(child)
        for node in taxonomy.nodes:
            if node.id and node.id not in reachable:
                node_violations.append((node.id, Violation(
                    "unreachable",
                    "node is not reachable from the root "
                    "(hierarchical cycle or disconnected subtree)", node.id)))

    node_violations.sort(key=lambda item: (item[0], item[1].code))
    edge_violations.sort(key=lambda item: (item[0], item[1].code))
    return [v for _, v in node_violations] + [v for _, v in edge_violations]


# --- JSON document format ---


def _node_from_dict(raw: dict) -> TaxonomyNode:
    try:
        return TaxonomyNode(
            id=str(raw["id"]),
            label=str(raw["label"]),
            level=int(raw["level"]),
            kind=NodeKind(raw["kind"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad taxonomy node {raw!r}: {exc}") from exc


def _edge_from_dict(raw: dict) -> Relationship:
    try:
        return Relationship(
            source=str(raw["from"]),
            target=str(raw["to"]),
            kind=RelationKind(raw["kind"]),
            cross_type=raw.get("cross_type"),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad taxonomy edge {raw!r}: {exc}") from exc


def from_dict(document: dict) -> Taxonomy:
    if not isinstance(document, dict):
        raise ParseError("taxonomy document must be a JSON object")
    try:
        nodes = tuple(_node_from_dict(n) for n in document["nodes"])
        edges = tuple(_edge_from_dict(e) for e in document["edges"])
    except KeyError as exc:
        raise ParseError(f"taxonomy document missing key: {exc}") from exc
    return Taxonomy(
        name=str(document.get("name", "")),
        version=str(document.get("version", "")),
        nodes=nodes,
        edges=edges,
        source_notes=str(document.get("source_notes", "")),
    )


def to_dict(taxonomy: Taxonomy) -> dict:
    doc = {
        "name": taxonomy.name,
        "version": taxonomy.version,
        "nodes": [
            {"id": n.id, "label": n.label, "level": n.level, "kind": n.kind.value}
            for n in taxonomy.nodes
        ],
        "edges": [],
    }
    if taxonomy.source_notes:
        doc["source_notes"] = taxonomy.source_notes
    for e in taxonomy.edges:
        raw = {"from": e.source, "to": e.target, "kind": e.kind.value}
        if e.cross_type is not None:
            raw["cross_type"] = e.cross_type
        doc["edges"].append(raw)
    return doc


def load_taxonomy(path: str | Path) -> Taxonomy:
    """Load, parse, and validate a taxonomy JSON document."""
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as handle:
            document = json.load(handle)
    except OSError:
        raise
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    taxonomy = from_dict(document)
    violations = validate(taxonomy)
    if violations:
        raise ValidationError(violations)
    return taxonomy


def save_taxonomy(taxonomy: Taxonomy, path: str | Path) -> None:
    path = Path(path)
    path.write_text(
        json.dumps(to_dict(taxonomy), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


# --- edits ---


def add_node(taxonomy: Taxonomy, node: TaxonomyNode, parent: str) -> Taxonomy:
    """Insert ``node`` under ``parent`` with one hierarchical edge."""
    if taxonomy.has_node(node.id):
        raise DuplicateId(f"node id {node.id!r} already exists")
    if not taxonomy.has_node(parent):
        raise UnknownParent(f"parent {parent!r} does not exist")
    parent_node = taxonomy.node(parent)
    if parent_node.level != node.level - 1:
        raise ValidationError([Violation(
            "level-violation",
            f"parent level {parent_node.level} cannot hold a level "
            f"{node.level} child", f"{parent}->{node.id}")])
    edge = Relationship(parent, node.id, RelationKind.HIERARCHICAL)
    return replace(
        taxonomy, nodes=taxonomy.nodes + (node,), edges=taxonomy.edges + (edge,))


def remove_node(taxonomy: Taxonomy, node_id: str) -> Taxonomy:
    """Remove a node, its hierarchical subtree, and all incident cross edges."""
    node = taxonomy.node(node_id)  # raises UnknownNode
    if node.kind is NodeKind.ROOT:
        raise CannotRemoveRoot("the Root node cannot be removed")
    doomed = {node_id}
    frontier = [node_id]
    while frontier:
        current = frontier.pop()
        for child in taxonomy.children(current):
            if child not in doomed:
                doomed.add(child)
                frontier.append(child)
    nodes = tuple(n for n in taxonomy.nodes if n.id not in doomed)
    edges = tuple(e for e in taxonomy.edges
                  if e.source not in doomed and e.target not in doomed)
    return replace(taxonomy, nodes=nodes, edges=edges)


# --- queries ---

RELATION_FILTERS = ("ancestors", "descendants", "children", "parent", "cross")


def query_related(
    taxonomy: Taxonomy, node_id: str, relation_filter: str
) -> list[tuple[str, Relationship]]:
    """Related nodes per filter.

    ``relation_filter`` is one of :data:`RELATION_FILTERS` or a cross-type
    label (e.g. ``"SameAs"``). ``SameAs`` edges are followed in both
    directions regardless of stored orientation; other named cross types
    follow the stored direction.
    """
    taxonomy.node(node_id)  # raises UnknownNode
    if relation_filter == "ancestors":
        out = []
        current = node_id
        while True:
            parent = taxonomy.hierarchical_parent(current)
            if parent is None:
                return out
            out.append((parent, Relationship(
                parent, current, RelationKind.HIERARCHICAL)))
            current = parent
    if relation_filter == "parent":
        parent = taxonomy.hierarchical_parent(node_id)
        if parent is None:
            return []
        return [(parent, Relationship(parent, node_id, RelationKind.HIERARCHICAL))]
    if relation_filter == "children":
        return [(c, Relationship(node_id, c, RelationKind.HIERARCHICAL))
                for c in taxonomy.children(node_id)]
    if relation_filter == "descendants":
        out = []
        frontier = [node_id]
        while frontier:
            current = frontier.pop(0)
            for child in taxonomy.children(current):
                out.append((child, Relationship(
                    current, child, RelationKind.HIERARCHICAL)))
                frontier.append(child)
        return out
    if relation_filter == "cross":
        out = []
        for edge in taxonomy.cross_edges(node_id):
            other = edge.target if edge.source == node_id else edge.source
            out.append((other, edge))
        return sorted(out, key=lambda item: item[0])
    # A named cross type.
    out = []
    for edge in taxonomy.cross_edges(node_id):
        if edge.cross_type != relation_filter:
            continue
        if edge.source == node_id:
            out.append((edge.target, edge))
        elif relation_filter == SAME_AS:
            out.append((edge.source, edge))
    return sorted(out, key=lambda item: item[0])
