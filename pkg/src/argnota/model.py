"""Core data model for argumentation-structure annotations of judicial decisions.

Typed propositions, the recursive relation expressions connecting them, case
metadata, and the annotation document one annotator produces for one judgment.
All values are frozen dataclasses and safe to share between threads; updates
produce new values.

Construction is deliberately permissive: faulty values (for example a general
normative judgment missing its subtype, or a joint with a single member built
programmatically) can be created and inspected. `check_invariants` rejects any
value that violates the model's rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Iterator, Mapping, Union


class BaseType(Enum):
    """The four basic judgment types: particular/general crossed with factual/normative."""

    SF = "SF"  # particular factual
    GF = "GF"  # general factual
    SM = "SM"  # particular normative
    GM = "GM"  # general normative


class GmSubtype(Enum):
    """Source-based subtypes of general normative judgments."""

    L = "L"  # statutory provision
    I = "I"  # legal interpretation
    C = "C"  # contract or contract interpretation
    U = "U"  # custom or industry practice
    M = "M"  # morality or value principle
    O = "O"  # other normative source


@dataclass(frozen=True)
class PropositionType:
    """A base type plus, for general normative judgments only, exactly one subtype."""

    base: BaseType
    gm_subtype: GmSubtype | None = None

    def label(self) -> str:
        if self.gm_subtype is not None:
            return f"{self.base.value}-{self.gm_subtype.value}"
        return self.base.value

    @classmethod
    def from_label(cls, label: str) -> "PropositionType":
        """Parse a label such as "SF" or "GM-L".

        Lenient about the subtype rule so that rule violations (a bare "GM",
        a subtype on a non-GM base) can be surfaced by invariant checking or
        validation instead of failing here; unknown codes raise ValueError.
        """
        base_part, dash, sub_part = label.partition("-")
        try:
            base = BaseType(base_part)
        except ValueError:
            raise ValueError(f"unknown proposition base type {base_part!r}") from None
        subtype: GmSubtype | None = None
        if dash:
            try:
                subtype = GmSubtype(sub_part)
            except ValueError:
                raise ValueError(f"unknown GM subtype {sub_part!r}") from None
        return cls(base, subtype)


#: Character span into the document's scope text, 0-based half-open.
Span = tuple[int, int]


@dataclass(frozen=True)
class Proposition:
    """An atomic, truth-evaluable judgment extracted from the reasoning text.

    The text may be a normalized restatement rather than the literal slice at
    `span`; the span records where in the scope text the judgment was made.
    """

    id: int
    text: str
    ptype: PropositionType
    span: Span | None = None


# --- relation expressions -------------------------------------------------


@dataclass(frozen=True)
class PropRef:
    """Leaf reference to a proposition by id."""

    id: int


@dataclass(frozen=True)
class Support:
    """`source` provides reasons for the establishment of `target`."""

    source: "RelationExpr"
    target: "RelationExpr"


@dataclass(frozen=True)
class Attack:
    """`source` provides reasons against `target` (a proposition or a relation)."""

    source: "RelationExpr"
    target: "RelationExpr"


@dataclass(frozen=True)
class Joint:
    """Conjunction of members that are jointly necessary; at least two."""

    members: tuple["RelationExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class Match:
    """Correspondence of a particular judgment (or joint of them) with a general rule."""

    particular: "RelationExpr"
    general: "RelationExpr"


@dataclass(frozen=True)
class Identity:
    """Semantic-equivalence class of repeated propositions; members are leaves only."""

    members: tuple[PropRef, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))


RelationExpr = Union[PropRef, Support, Attack, Joint, Match, Identity]


def kind_name(expr: RelationExpr) -> str:
    """Stable kind name of an expression node ("Support", "PropRef", ...)."""
    return type(expr).__name__


def slots(expr: RelationExpr) -> tuple[tuple[str, RelationExpr], ...]:
    """Named child slots in notation order; empty for leaves."""
    match expr:
        case Support(source=s, target=t) | Attack(source=s, target=t):
            return (("source", s), ("target", t))
        case Match(particular=p, general=g):
            return (("particular", p), ("general", g))
        case Joint(members=ms) | Identity(members=ms):
            return tuple(("member", m) for m in ms)
        case PropRef():
            return ()
    raise TypeError(f"not a relation expression: {expr!r}")


def subexpressions(expr: RelationExpr) -> Iterator[RelationExpr]:
    """Pre-order traversal of the expression tree, including `expr` itself."""
    yield expr
    for _, child in slots(expr):
        yield from subexpressions(child)


def prop_ids_of(expr: RelationExpr) -> tuple[int, ...]:
    """All proposition ids in the tree, deduplicated, in first-occurrence order."""
    seen: dict[int, None] = {}
    for node in subexpressions(expr):
        if isinstance(node, PropRef):
            seen.setdefault(node.id, None)
    return tuple(seen)


# --- case metadata --------------------------------------------------------


class CourtLevel(Enum):
    BASIC = "Basic"
    INTERMEDIATE = "Intermediate"
    HIGHER = "Higher"
    SUPREME = "Supreme"


class TrialLevel(Enum):
    FIRST = "First"
    SECOND = "Second"
    RETRIAL = "Retrial"


class CaseCategory(Enum):
    CIVIL = "Civil"
    CRIMINAL = "Criminal"
    ADMINISTRATIVE = "Administrative"
    ENFORCEMENT = "Enforcement"


class OutcomeType(Enum):
    FULLY_UPHELD = "FullyUpheld"
    PARTIALLY_UPHELD = "PartiallyUpheld"
    DISMISSED = "Dismissed"


@dataclass(frozen=True)
class OriginalJudgment:
    """Case information recorded for an original judgment document."""

    case_number: str
    court: str
    court_level: CourtLevel
    trial_level: TrialLevel
    judgment_date: date
    case_category: CaseCategory
    cause_of_action: str
    outcome_type: OutcomeType


@dataclass(frozen=True)
class GuidingCase:
    """Case information recorded for a guiding case."""

    case_type: str
    case_name: str
    release_date: date
    case_category: CaseCategory
    relevant_provisions: str
    highlights: str


@dataclass(frozen=True)
class ReferenceCase:
    """Case information recorded for a reference case from the case database."""

    case_type: str
    case_name: str
    db_entry_number: str
    case_category: CaseCategory
    relevant_provisions: str
    highlights: str


CaseMetadata = Union[OriginalJudgment, GuidingCase, ReferenceCase]


# --- documents ------------------------------------------------------------


@dataclass(frozen=True)
class AnnotationDocument:
    """One annotator's complete annotation of one judgment's reasoning section."""

    doc_id: str
    annotator_id: str
    guideline_version: str
    metadata: CaseMetadata
    scope_text: str
    propositions: tuple[Proposition, ...]
    relations: tuple[RelationExpr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "propositions", tuple(self.propositions))
        object.__setattr__(self, "relations", tuple(self.relations))


class UnknownProposition(LookupError):
    """Raised when a proposition id does not exist in a document."""


class InvariantError(ValueError):
    """A value violates a model invariant. `code` names the broken rule."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def prop_map(doc: AnnotationDocument) -> dict[int, Proposition]:
    """Map id to proposition; on duplicate ids the first occurrence wins."""
    out: dict[int, Proposition] = {}
    for prop in doc.propositions:
        out.setdefault(prop.id, prop)
    return out


def resolve_prop(doc: AnnotationDocument, prop_id: int) -> Proposition:
    """Return the proposition with the given id or raise UnknownProposition."""
    for prop in doc.propositions:
        if prop.id == prop_id:
            return prop
    raise UnknownProposition(f"no proposition with id p{prop_id} in {doc.doc_id!r}")


def check_type_invariants(ptype: PropositionType) -> None:
    if ptype.base is BaseType.GM and ptype.gm_subtype is None:
        raise InvariantError("GmSubtypeMissing", "GM propositions require exactly one subtype")
    if ptype.base is not BaseType.GM and ptype.gm_subtype is not None:
        raise InvariantError(
            "GmSubtypeOnNonGm", f"subtype given on non-GM base {ptype.base.value}"
        )


def check_invariants(doc: AnnotationDocument) -> None:
    """Reject any document violating the model's structural rules.

    Raises InvariantError on the first violation found. For a full report of
    every problem use `validation.validate_document` instead.
    """
    seen: set[int] = set()
    for prop in doc.propositions:
        if not isinstance(prop.id, int) or isinstance(prop.id, bool) or prop.id < 1:
            raise InvariantError("BadPropId", f"proposition id must be a positive integer, got {prop.id!r}")
        if prop.id in seen:
            raise InvariantError("DuplicatePropId", f"duplicate proposition id p{prop.id}")
        seen.add(prop.id)
        if not prop.text:
            raise InvariantError("EmptyText", f"proposition p{prop.id} has empty text")
        check_type_invariants(prop.ptype)
        if prop.span is not None:
            start, end = prop.span
            if not (0 <= start < end <= len(doc.scope_text)):
                raise InvariantError(
                    "InvalidSpan",
                    f"span {prop.span} of p{prop.id} outside scope text of length {len(doc.scope_text)}",
                )
    for index, rel in enumerate(doc.relations):
        for node in subexpressions(rel):
            if isinstance(node, PropRef) and node.id not in seen:
                raise InvariantError(
                    "DanglingPropRef", f"relation {index} refers to unknown proposition p{node.id}"
                )
            if isinstance(node, (Joint, Identity)) and len(node.members) < 2:
                raise InvariantError(
                    "JointArity", f"{kind_name(node)} in relation {index} has fewer than 2 members"
                )
            if isinstance(node, Identity):
                for member in node.members:
                    if not isinstance(member, PropRef):
                        raise InvariantError(
                            "IdentityNonLeaf",
                            f"identity in relation {index} contains non-leaf member {kind_name(member)}",
                        )


def types_of(doc: AnnotationDocument) -> Mapping[int, PropositionType]:
    """Id-to-type map used by typing checks; first occurrence wins on duplicates."""
    return {pid: prop.ptype for pid, prop in prop_map(doc).items()}
