"""Toolkit for annotating argumentation structures in judicial decisions.

Parse and validate the relation notation, build argument graphs, infer
propositional roles, render diagrams, compute dual-annotation agreement, and
store annotation documents; a CLI and an HTTP service expose the same engine.
"""

from .agreement import (
    AgreementReport,
    Alignment,
    DegenerateMarginals,
    Granularity,
    MissingSpans,
    ScopeMismatch,
    align_propositions,
    classify_disagreements,
    compare_documents,
    relation_f1,
    type_kappa,
)
from .diagram import DiagramModel, ShapeKind, emit_dot, emit_svg, layout
from .graph import (
    ArgumentGraph,
    Component,
    InvalidDocument,
    Role,
    RoleAssignment,
    build_graph,
    components,
    document_graph,
    infer_roles,
    merge_identities,
)
from .model import (
    AnnotationDocument,
    Attack,
    BaseType,
    CaseCategory,
    CaseMetadata,
    CourtLevel,
    GmSubtype,
    GuidingCase,
    Identity,
    InvariantError,
    Joint,
    Match,
    OriginalJudgment,
    OutcomeType,
    PropRef,
    Proposition,
    PropositionType,
    ReferenceCase,
    RelationExpr,
    Support,
    TrialLevel,
    UnknownProposition,
    check_invariants,
    prop_ids_of,
    resolve_prop,
)
from .notation import (
    NotationError,
    ParseDiagnostic,
    parse_expr,
    parse_relation_list,
    serialize_expr,
)
from .storage import (
    FormatError,
    load_document,
    new_document,
    parse_document_data,
    save_document,
)
from .validation import (
    Code,
    Diagnostic,
    Severity,
    ValidationMode,
    check_match_types,
    nesting_whitelist_check,
    validate_document,
)

__version__ = "0.1.0"
