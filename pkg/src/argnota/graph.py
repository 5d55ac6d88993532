"""Argument graph construction and analysis.

Builds the logical graph of proposition nodes and relation nodes from a
document, merges identity classes, splits the graph into argument components,
and infers propositional roles from the relational structure.

Relation lists conventionally repeat inner relations as standalone entries
(a joint listed on its own and again inside a match). Node construction
deduplicates: entries that are exact duplicates or subexpressions of another
entry contribute no extra nodes. A joint appearing directly inside a match
slot is absorbed into the match's node, which carries both functions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .model import (
    AnnotationDocument,
    Attack,
    Identity,
    Joint,
    Match,
    PropRef,
    RelationExpr,
    Support,
    prop_ids_of,
    subexpressions,
)
from .notation import serialize_expr
from .validation import Diagnostic, Severity, ValidationMode, validate_document


class InvalidDocument(ValueError):
    """Document has error-severity diagnostics and cannot be turned into a graph."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__(
            "document has error diagnostics: "
            + "; ".join(f"{d.code.value} at {d.locus()}" for d in diagnostics)
        )
        self.diagnostics = diagnostics


class RelationKind(Enum):
    SUPPORT = "Support"
    ATTACK = "Attack"
    JOINT = "Joint"
    MATCH = "Match"


@dataclass(frozen=True)
class RelationNode:
    """One relation node; `path` addresses the occurrence inside the source
    relation list as (entry index, slot index, slot index, ...)."""

    index: int
    kind: RelationKind
    expr: RelationExpr
    path: tuple[int, ...]
    absorbed_joint: Joint | None = None  # set on a match that carries its joint's function

    @property
    def name(self) -> str:
        return f"rel_{self.index}"


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    directed: bool


def prop_node(prop_id: int) -> str:
    return f"p{prop_id}"


@dataclass(frozen=True)
class ArgumentGraph:
    """Logical graph over proposition nodes (named "p<id>") and relation nodes
    (named "rel_<index>"). `prop_ids` always lists every document proposition;
    after merging, non-representative identity members no longer appear as
    nodes but stay listed in `identity_classes`."""

    prop_ids: tuple[int, ...]
    relation_nodes: tuple[RelationNode, ...]
    edges: tuple[Edge, ...]
    identity_classes: tuple[tuple[int, ...], ...]
    merged: bool = False

    def representative(self, prop_id: int) -> int:
        for cls in self.identity_classes:
            if prop_id in cls:
                return min(cls)
        return prop_id

    def prop_node_ids(self) -> tuple[int, ...]:
        if not self.merged:
            return self.prop_ids
        return tuple(sorted({self.representative(pid) for pid in self.prop_ids}))

    def prop_label(self, prop_id: int) -> str:
        """Display label; a merged class representative shows the whole class."""
        if self.merged:
            for cls in self.identity_classes:
                if min(cls) == prop_id:
                    return "/".join(f"p{member}" for member in cls)
        return f"p{prop_id}"

    def relation_node(self, index: int) -> RelationNode:
        return self.relation_nodes[index]


def _identity_classes(relations: tuple[RelationExpr, ...]) -> tuple[tuple[int, ...], ...]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for rel in relations:
        for node in subexpressions(rel):
            if isinstance(node, Identity) and node.members:
                first = node.members[0].id
                for member in node.members[1:]:
                    union(first, member.id)
    classes: dict[int, list[int]] = {}
    for member in parent:
        classes.setdefault(find(member), []).append(member)
    nontrivial = [tuple(sorted(ms)) for ms in classes.values() if len(ms) > 1]
    return tuple(sorted(nontrivial))


def _maximal_entries(relations: tuple[RelationExpr, ...]) -> list[tuple[int, RelationExpr]]:
    """Distinct entries that are not subexpressions of any other entry."""
    canonicals = [serialize_expr(rel) for rel in relations]
    proper_subs: set[str] = set()
    for rel in relations:
        for node in subexpressions(rel):
            if node is not rel:
                proper_subs.add(serialize_expr(node))
    kept: list[tuple[int, RelationExpr]] = []
    seen: set[str] = set()
    for index, (rel, canonical) in enumerate(zip(relations, canonicals)):
        if canonical in seen or canonical in proper_subs:
            continue
        seen.add(canonical)
        kept.append((index, rel))
    return kept


def build_graph(doc: AnnotationDocument) -> ArgumentGraph:
    """Construct the unmerged argument graph.

    Requires the document to be free of error diagnostics in permissive mode;
    raises InvalidDocument otherwise.
    """
    diagnostics = validate_document(doc, ValidationMode.PERMISSIVE)
    errors = [d for d in diagnostics if d.severity is Severity.ERROR]
    if errors:
        raise InvalidDocument(errors)

    nodes: list[RelationNode] = []
    edges: list[Edge] = []

    def add_node(kind: RelationKind, expr: RelationExpr, path: tuple[int, ...],
                 absorbed: Joint | None = None) -> RelationNode:
        node = RelationNode(len(nodes), kind, expr, path, absorbed)
        nodes.append(node)
        return node

    def build(expr: RelationExpr, path: tuple[int, ...]) -> str:
        """Create nodes/edges for the occurrence and return its outermost node name."""
        if isinstance(expr, PropRef):
            return prop_node(expr.id)
        if isinstance(expr, Identity):
            # no node of its own; stands for the lowest-id member
            return prop_node(min(m.id for m in expr.members))
        if isinstance(expr, Joint):
            node = add_node(RelationKind.JOINT, expr, path)
            for slot_index, member in enumerate(expr.members):
                member_node = build(member, path + (slot_index,))
                edges.append(Edge(member_node, node.name, directed=False))
            return node.name
        if isinstance(expr, Match):
            if isinstance(expr.particular, Joint):
                node = add_node(RelationKind.MATCH, expr, path, absorbed=expr.particular)
                for slot_index, member in enumerate(expr.particular.members):
                    member_node = build(member, path + (0, slot_index))
                    edges.append(Edge(member_node, node.name, directed=False))
            else:
                node = add_node(RelationKind.MATCH, expr, path)
                source_node = build(expr.particular, path + (0,))
                edges.append(Edge(source_node, node.name, directed=True))
            general_node = build(expr.general, path + (1,))
            edges.append(Edge(node.name, general_node, directed=True))
            return node.name
        if isinstance(expr, (Support, Attack)):
            kind = RelationKind.SUPPORT if isinstance(expr, Support) else RelationKind.ATTACK
            node = add_node(kind, expr, path)
            source_node = build(expr.source, path + (0,))
            edges.append(Edge(source_node, node.name, directed=True))
            target_node = build(expr.target, path + (1,))
            edges.append(Edge(node.name, target_node, directed=True))
            return node.name
        raise TypeError(f"not a relation expression: {expr!r}")

    for entry_index, rel in _maximal_entries(doc.relations):
        if isinstance(rel, (PropRef, Identity)):
            continue  # no relation node; identities only feed the classes
        build(rel, (entry_index,))

    return ArgumentGraph(
        prop_ids=tuple(sorted(p.id for p in doc.propositions)),
        relation_nodes=tuple(nodes),
        edges=tuple(edges),
        identity_classes=_identity_classes(doc.relations),
    )


def merge_identities(graph: ArgumentGraph) -> ArgumentGraph:
    """Rewire every edge incident to an identity member onto the class
    representative (the minimum id). Idempotent."""
    if graph.merged:
        return graph
    rename: dict[str, str] = {}
    for cls in graph.identity_classes:
        rep = prop_node(min(cls))
        for member in cls:
            rename[prop_node(member)] = rep
    rewired: list[Edge] = []
    seen: set[Edge] = set()
    for edge in graph.edges:
        new = Edge(rename.get(edge.src, edge.src), rename.get(edge.dst, edge.dst), edge.directed)
        if new not in seen:
            seen.add(new)
            rewired.append(new)
    return replace(graph, edges=tuple(rewired), merged=True)


@dataclass(frozen=True)
class Component:
    """A weakly connected part of the graph; isolated means a lone proposition."""

    prop_ids: tuple[int, ...]
    relation_indices: tuple[int, ...]
    isolated: bool

    def nodes(self) -> tuple[str, ...]:
        return tuple(prop_node(pid) for pid in self.prop_ids) + tuple(
            f"rel_{i}" for i in self.relation_indices
        )


def components(graph: ArgumentGraph) -> list[Component]:
    """Weakly connected components, ordered by minimum contained proposition id.

    Identities are merged first (a no-op on already-merged graphs).
    """
    graph = merge_identities(graph)
    node_names = [prop_node(pid) for pid in graph.prop_node_ids()] + [
        n.name for n in graph.relation_nodes
    ]
    adjacency: dict[str, set[str]] = {name: set() for name in node_names}
    for edge in graph.edges:
        adjacency.setdefault(edge.src, set()).add(edge.dst)
        adjacency.setdefault(edge.dst, set()).add(edge.src)

    seen: set[str] = set()
    out: list[Component] = []
    for start in node_names:
        if start in seen:
            continue
        stack = [start]
        members: set[str] = set()
        while stack:
            current = stack.pop()
            if current in members:
                continue
            members.add(current)
            stack.extend(sorted(adjacency.get(current, ())))
        seen |= members
        prop_ids = tuple(sorted(int(name[1:]) for name in members if name.startswith("p")))
        rel_indices = tuple(sorted(int(name[4:]) for name in members if name.startswith("rel_")))
        out.append(
            Component(prop_ids, rel_indices, isolated=len(rel_indices) == 0 and len(prop_ids) == 1)
        )
    out.sort(key=lambda c: min(c.prop_ids) if c.prop_ids else 0)
    return out


class Role(Enum):
    PREMISE = "Premise"
    SUB_CONCLUSION = "SubConclusion"
    CONCLUSION = "Conclusion"
    ISOLATED = "Isolated"


@dataclass(frozen=True)
class RoleAssignment:
    """Role per proposition id, total over the document's propositions."""

    roles: dict[int, Role]

    def __getitem__(self, prop_id: int) -> Role:
        return self.roles[prop_id]


def ultimate_target(expr: RelationExpr) -> int | None:
    """The proposition a support or attack ultimately lands on, following
    target slots through nested relations; None when the chain ends in a
    joint or identity, which have no single target."""
    while True:
        match expr:
            case Support(target=t) | Attack(target=t):
                expr = t
            case Match(general=g):
                expr = g
            case PropRef(id=pid):
                return pid
            case _:
                return None


def infer_roles(graph: ArgumentGraph) -> RoleAssignment:
    """Derive roles from the relational structure.

    A class receives when it is the ultimate target of a support or attack
    node; it contributes when it occurs in any feeding slot (source, member,
    particular, or general). Receives and contributes: SubConclusion; only
    receives: Conclusion; only contributes: Premise; neither: Isolated.
    Identities are merged first and the class role is shared by all members.
    """
    graph = merge_identities(graph)
    rep = graph.representative

    receives: set[int] = set()
    contributes: set[int] = set()
    for node in graph.relation_nodes:
        if node.kind in (RelationKind.SUPPORT, RelationKind.ATTACK):
            landed = ultimate_target(node.expr)
            if landed is not None:
                receives.add(rep(landed))
        match node.expr:
            case Support(source=s) | Attack(source=s):
                feeding = prop_ids_of(s)
            case Match(particular=p, general=g):
                feeding = prop_ids_of(p) + prop_ids_of(g)
            case Joint() as j:
                feeding = prop_ids_of(j)
            case _:
                feeding = ()
        contributes.update(rep(pid) for pid in feeding)

    roles: dict[int, Role] = {}
    for pid in graph.prop_ids:
        r = rep(pid)
        if r in receives and r in contributes:
            roles[pid] = Role.SUB_CONCLUSION
        elif r in receives:
            roles[pid] = Role.CONCLUSION
        elif r in contributes:
            roles[pid] = Role.PREMISE
        else:
            roles[pid] = Role.ISOLATED
    return RoleAssignment(roles)


def format_roles(assignment: RoleAssignment) -> str:
    """One "p<id> <role>" line per proposition, ascending by id."""
    lines = [f"p{pid} {assignment.roles[pid].value}" for pid in sorted(assignment.roles)]
    return "".join(line + "\n" for line in lines)


def document_graph(doc: AnnotationDocument) -> ArgumentGraph:
    """Build and merge in one step; the form every consumer wants."""
    return merge_identities(build_graph(doc))
