"""Document validation against the structural and semantic annotation rules.

Two modes: Strict additionally enforces match typing (particular vs general
judgments) and warns about nesting patterns outside the catalogued forms.
Permissive accepts any well-formed tree. Checks that fire on a relation
subexpression are reported once per distinct canonical form, because the same
relation is conventionally listed both on its own and nested inside larger
expressions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .model import (
    AnnotationDocument,
    Attack,
    BaseType,
    Identity,
    Joint,
    Match,
    PropRef,
    PropositionType,
    RelationExpr,
    Support,
    kind_name,
    prop_ids_of,
    slots,
    subexpressions,
    types_of,
)
from .notation import serialize_expr


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


class Code(Enum):
    DANGLING_PROP_REF = "DanglingPropRef"
    DUPLICATE_PROP_ID = "DuplicatePropId"
    MATCH_TYPE_VIOLATION = "MatchTypeViolation"
    IDENTITY_TYPE_MIX_WARNING = "IdentityTypeMixWarning"
    NON_WHITELISTED_NESTING = "NonWhitelistedNesting"
    DUPLICATE_RELATION = "DuplicateRelation"
    JOINT_ARITY = "JointArity"
    GM_SUBTYPE_MISSING = "GmSubtypeMissing"
    GM_SUBTYPE_ON_NON_GM = "GmSubtypeOnNonGm"
    SELF_RELATION = "SelfRelation"


class ValidationMode(Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


@dataclass(frozen=True)
class Diagnostic:
    """One finding; locus is either a proposition id or a relation index."""

    severity: Severity
    code: Code
    message: str
    prop_id: int | None = None
    relation_index: int | None = None

    def locus(self) -> str:
        if self.prop_id is not None:
            return f"p{self.prop_id}"
        if self.relation_index is not None:
            return f"relation {self.relation_index}"
        return "document"


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


def format_diagnostics(diagnostics: list[Diagnostic]) -> str:
    """One line per diagnostic; empty string for a clean document."""
    lines = [
        f"{d.severity.value} {d.code.value} at {d.locus()}: {d.message}" for d in diagnostics
    ]
    return "".join(line + "\n" for line in lines)


# --- match typing -----------------------------------------------------------


@dataclass(frozen=True)
class MatchSlotViolation:
    """The offending slot of a mistyped match plus a human-readable reason."""

    slot: str  # "particular" or "general"
    reason: str


def _particular_reason(expr: RelationExpr, types: Mapping[int, PropositionType]) -> str | None:
    if isinstance(expr, PropRef):
        ptype = types.get(expr.id)
        if ptype is None:
            return None  # dangling refs are reported separately
        if ptype.base in (BaseType.SF, BaseType.SM):
            return None
        return f"p{expr.id} is {ptype.base.value}, expected a particular judgment (SF or SM)"
    if isinstance(expr, Joint):
        for member in expr.members:
            reason = _particular_reason(member, types)
            if reason is not None:
                return reason
        return None
    return f"{kind_name(expr)} is not allowed in the particular slot"


def _general_reason(expr: RelationExpr, types: Mapping[int, PropositionType]) -> str | None:
    if isinstance(expr, PropRef):
        ptype = types.get(expr.id)
        if ptype is None:
            return None
        if ptype.base in (BaseType.GF, BaseType.GM):
            return None
        return f"p{expr.id} is {ptype.base.value}, expected a general judgment (GF or GM)"
    return f"{kind_name(expr)} is not allowed in the general slot"


def check_match_types(
    match: Match, types: Mapping[int, PropositionType]
) -> MatchSlotViolation | None:
    """Particulars (SF/SM leaves, possibly joined) must match a general (GF/GM) leaf."""
    reason = _particular_reason(match.particular, types)
    if reason is not None:
        return MatchSlotViolation("particular", reason)
    reason = _general_reason(match.general, types)
    if reason is not None:
        return MatchSlotViolation("general", reason)
    return None


# --- nesting whitelist ------------------------------------------------------

# Catalogued embeddings; leaves are always allowed in any slot, and the
# whitelist composes transitively across levels.
NESTING_WHITELIST: frozenset[tuple[str, str, str]] = frozenset(
    {
        ("Match", "particular", "Joint"),
        ("Joint", "member", "Match"),
        ("Support", "source", "Joint"),
        ("Support", "source", "Match"),
        ("Attack", "target", "Support"),
    }
)


@dataclass(frozen=True)
class NestingFlag:
    parent: str
    slot: str
    child: str
    parent_canonical: str
    slot_index: int


def nesting_whitelist_check(expr: RelationExpr) -> list[NestingFlag]:
    """Every parent-child pair outside the catalogued embeddings, pre-order."""
    flags: list[NestingFlag] = []
    for node in subexpressions(expr):
        parent = kind_name(node)
        for slot_index, (slot, child) in enumerate(slots(node)):
            if isinstance(child, PropRef):
                continue
            if (parent, slot, kind_name(child)) not in NESTING_WHITELIST:
                flags.append(
                    NestingFlag(parent, slot, kind_name(child), serialize_expr(node), slot_index)
                )
    return flags


# --- document validation ----------------------------------------------------


def validate_document(
    doc: AnnotationDocument, mode: ValidationMode = ValidationMode.STRICT
) -> list[Diagnostic]:
    """All diagnostics for the document; an empty list means conforming.

    Deterministic and order-stable: propositions first in list order, then
    relations in list order with a pre-order walk of each expression.
    """
    strict = mode is ValidationMode.STRICT
    diags: list[Diagnostic] = []

    seen_ids: set[int] = set()
    for prop in doc.propositions:
        if prop.id in seen_ids:
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    Code.DUPLICATE_PROP_ID,
                    f"proposition id p{prop.id} is defined more than once",
                    prop_id=prop.id,
                )
            )
        seen_ids.add(prop.id)
        if prop.ptype.base is BaseType.GM and prop.ptype.gm_subtype is None:
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    Code.GM_SUBTYPE_MISSING,
                    f"p{prop.id} is GM but carries no subtype",
                    prop_id=prop.id,
                )
            )
        if prop.ptype.base is not BaseType.GM and prop.ptype.gm_subtype is not None:
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    Code.GM_SUBTYPE_ON_NON_GM,
                    f"p{prop.id} is {prop.ptype.base.value} but carries subtype "
                    f"{prop.ptype.gm_subtype.value}",
                    prop_id=prop.id,
                )
            )

    types = types_of(doc)

    entry_canonicals: dict[str, int] = {}
    reported_missing: set[int] = set()
    reported: set[tuple[Code, str]] = set()
    reported_nesting: set[tuple[str, int]] = set()

    def report_once(code: Code, key: str, diag: Diagnostic) -> None:
        if (code, key) not in reported:
            reported.add((code, key))
            diags.append(diag)

    for index, rel in enumerate(doc.relations):
        canonical = serialize_expr(rel)
        first_index = entry_canonicals.setdefault(canonical, index)
        if first_index != index:
            diags.append(
                Diagnostic(
                    Severity.WARNING,
                    Code.DUPLICATE_RELATION,
                    f"relation {canonical} duplicates relation {first_index}",
                    relation_index=index,
                )
            )
            continue

        for node in subexpressions(rel):
            node_canonical = serialize_expr(node)
            if isinstance(node, PropRef):
                if node.id not in types and node.id not in reported_missing:
                    reported_missing.add(node.id)
                    diags.append(
                        Diagnostic(
                            Severity.ERROR,
                            Code.DANGLING_PROP_REF,
                            f"reference to unknown proposition p{node.id}",
                            relation_index=index,
                        )
                    )
                continue

            if isinstance(node, (Joint, Identity)):
                if len(node.members) < 2:
                    report_once(
                        Code.JOINT_ARITY,
                        node_canonical,
                        Diagnostic(
                            Severity.ERROR,
                            Code.JOINT_ARITY,
                            f"{kind_name(node)} {node_canonical} has fewer than 2 members",
                            relation_index=index,
                        ),
                    )
                else:
                    member_keys = [serialize_expr(m) for m in node.members]
                    if len(set(member_keys)) != len(member_keys):
                        # members form a set, so repeats collapse and can drop
                        # the effective arity below 2
                        report_once(
                            Code.JOINT_ARITY,
                            node_canonical,
                            Diagnostic(
                                Severity.ERROR,
                                Code.JOINT_ARITY,
                                f"{kind_name(node)} {node_canonical} lists the same member twice",
                                relation_index=index,
                            ),
                        )

            if isinstance(node, Identity):
                bases = []
                for member in node.members:
                    if isinstance(member, PropRef) and member.id in types:
                        bases.append(types[member.id].base)
                if len(set(bases)) > 1:
                    report_once(
                        Code.IDENTITY_TYPE_MIX_WARNING,
                        node_canonical,
                        Diagnostic(
                            Severity.WARNING,
                            Code.IDENTITY_TYPE_MIX_WARNING,
                            f"identity {node_canonical} mixes base types "
                            f"{sorted(b.value for b in set(bases))}",
                            relation_index=index,
                        ),
                    )

            if isinstance(node, (Support, Attack, Match)):
                left, right = (child for _, child in slots(node))
                left_ids = set(prop_ids_of(left))
                right_ids = set(prop_ids_of(right))
                if left_ids and left_ids == right_ids:
                    report_once(
                        Code.SELF_RELATION,
                        node_canonical,
                        Diagnostic(
                            Severity.ERROR,
                            Code.SELF_RELATION,
                            f"{node_canonical} relates a proposition set to itself",
                            relation_index=index,
                        ),
                    )

            if strict and isinstance(node, Match):
                violation = check_match_types(node, types)
                if violation is not None:
                    report_once(
                        Code.MATCH_TYPE_VIOLATION,
                        node_canonical,
                        Diagnostic(
                            Severity.ERROR,
                            Code.MATCH_TYPE_VIOLATION,
                            f"{node_canonical}: {violation.slot} slot: {violation.reason}",
                            relation_index=index,
                        ),
                    )

        if strict:
            for flag in nesting_whitelist_check(rel):
                key = (flag.parent_canonical, flag.slot_index)
                if key in reported_nesting:
                    continue
                reported_nesting.add(key)
                diags.append(
                    Diagnostic(
                        Severity.WARNING,
                        Code.NON_WHITELISTED_NESTING,
                        f"{flag.child} inside the {flag.slot} slot of {flag.parent} "
                        f"({flag.parent_canonical}) is outside the catalogued nesting forms",
                        relation_index=index,
                    )
                )

    return diags
