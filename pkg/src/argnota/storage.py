"""On-disk annotation document format (JSON) and load/save.

One document per file. Relations are stored as canonical notation strings so
files stay human-diffable; types as labels like "SF" or "GM-L"; dates as
ISO-8601 (legacy "28-Dec-23" renderings are normalized at ingest). Saving is
canonical: fixed key order, propositions sorted by id, relations in stored
order, so equal documents produce byte-identical files.
"""

from __future__ import annotations

import json
import os
from datetime import date
from pathlib import Path
from typing import Any

from .model import (
    AnnotationDocument,
    CaseCategory,
    CaseMetadata,
    CourtLevel,
    GuidingCase,
    OriginalJudgment,
    OutcomeType,
    Proposition,
    PropositionType,
    ReferenceCase,
    TrialLevel,
    check_invariants,
)
from .notation import NotationError, parse_expr, serialize_expr

FORMAT_VERSION = "1.0"

GUIDELINE_VERSION_ENV = "ARGNOTA_GUIDELINE_VERSION"


class FormatError(ValueError):
    """The file does not conform to the document schema; `locus` says where."""

    def __init__(self, locus: str, message: str):
        super().__init__(f"{locus}: {message}")
        self.locus = locus


def default_guideline_version() -> str:
    return os.environ.get(GUIDELINE_VERSION_ENV, "1.0")


def new_document(
    doc_id: str,
    annotator_id: str,
    metadata: CaseMetadata,
    scope_text: str,
    guideline_version: str | None = None,
) -> AnnotationDocument:
    """Empty document shell; the guideline version defaults from the
    ARGNOTA_GUIDELINE_VERSION environment variable."""
    return AnnotationDocument(
        doc_id=doc_id,
        annotator_id=annotator_id,
        guideline_version=guideline_version or default_guideline_version(),
        metadata=metadata,
        scope_text=scope_text,
        propositions=(),
        relations=(),
    )


# --- dates ------------------------------------------------------------------

_MONTHS = {
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "may": 5, "jun": 6,
    "jul": 7, "aug": 8, "sep": 9, "oct": 10, "nov": 11, "dec": 12,
}


def normalize_date(value: str, locus: str) -> date:
    """Accept ISO-8601 or the "28-Dec-23" rendering; two-digit years are 20xx."""
    try:
        return date.fromisoformat(value)
    except ValueError:
        pass
    parts = value.split("-")
    if len(parts) == 3 and parts[1].lower() in _MONTHS:
        day_text, month_text, year_text = parts
        try:
            day = int(day_text)
            year = int(year_text)
        except ValueError:
            raise FormatError(locus, f"unparseable date {value!r}") from None
        if year < 100:
            year += 2000
        try:
            return date(year, _MONTHS[month_text.lower()], day)
        except ValueError:
            raise FormatError(locus, f"unparseable date {value!r}") from None
    raise FormatError(locus, f"unparseable date {value!r}, expected ISO-8601")


# --- field helpers ----------------------------------------------------------


def _require(data: dict, key: str, locus: str) -> Any:
    if key not in data:
        raise FormatError(locus, f"missing key {key!r}")
    return data[key]


def _require_str(data: dict, key: str, locus: str) -> str:
    value = _require(data, key, locus)
    if not isinstance(value, str):
        raise FormatError(f"{locus}.{key}", f"expected a string, got {type(value).__name__}")
    return value


def _require_keys(data: dict, allowed: set[str], locus: str) -> None:
    extra = set(data) - allowed
    if extra:
        raise FormatError(locus, f"unknown keys {sorted(extra)}")


def _enum_value(enum_cls, value: str, locus: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise FormatError(locus, f"{value!r} is not one of: {allowed}") from None


# --- metadata ---------------------------------------------------------------

_METADATA_KINDS = {"original_judgment", "guiding_case", "reference_case"}


def metadata_from_data(data: Any, locus: str = "metadata") -> CaseMetadata:
    if not isinstance(data, dict):
        raise FormatError(locus, "expected an object")
    kind = _require_str(data, "kind", locus)
    if kind == "original_judgment":
        _require_keys(
            data,
            {"kind", "case_number", "court", "court_level", "trial_level", "judgment_date",
             "case_category", "cause_of_action", "outcome_type"},
            locus,
        )
        return OriginalJudgment(
            case_number=_require_str(data, "case_number", locus),
            court=_require_str(data, "court", locus),
            court_level=_enum_value(CourtLevel, _require_str(data, "court_level", locus),
                                    f"{locus}.court_level"),
            trial_level=_enum_value(TrialLevel, _require_str(data, "trial_level", locus),
                                    f"{locus}.trial_level"),
            judgment_date=normalize_date(_require_str(data, "judgment_date", locus),
                                         f"{locus}.judgment_date"),
            case_category=_enum_value(CaseCategory, _require_str(data, "case_category", locus),
                                      f"{locus}.case_category"),
            cause_of_action=_require_str(data, "cause_of_action", locus),
            outcome_type=_enum_value(OutcomeType, _require_str(data, "outcome_type", locus),
                                     f"{locus}.outcome_type"),
        )
    if kind == "guiding_case":
        _require_keys(
            data,
            {"kind", "case_type", "case_name", "release_date", "case_category",
             "relevant_provisions", "highlights"},
            locus,
        )
        return GuidingCase(
            case_type=_require_str(data, "case_type", locus),
            case_name=_require_str(data, "case_name", locus),
            release_date=normalize_date(_require_str(data, "release_date", locus),
                                        f"{locus}.release_date"),
            case_category=_enum_value(CaseCategory, _require_str(data, "case_category", locus),
                                      f"{locus}.case_category"),
            relevant_provisions=_require_str(data, "relevant_provisions", locus),
            highlights=_require_str(data, "highlights", locus),
        )
    if kind == "reference_case":
        _require_keys(
            data,
            {"kind", "case_type", "case_name", "db_entry_number", "case_category",
             "relevant_provisions", "highlights"},
            locus,
        )
        return ReferenceCase(
            case_type=_require_str(data, "case_type", locus),
            case_name=_require_str(data, "case_name", locus),
            db_entry_number=_require_str(data, "db_entry_number", locus),
            case_category=_enum_value(CaseCategory, _require_str(data, "case_category", locus),
                                      f"{locus}.case_category"),
            relevant_provisions=_require_str(data, "relevant_provisions", locus),
            highlights=_require_str(data, "highlights", locus),
        )
    raise FormatError(f"{locus}.kind", f"{kind!r} is not one of: {sorted(_METADATA_KINDS)}")


def metadata_to_data(metadata: CaseMetadata) -> dict:
    if isinstance(metadata, OriginalJudgment):
        return {
            "kind": "original_judgment",
            "case_number": metadata.case_number,
            "court": metadata.court,
            "court_level": metadata.court_level.value,
            "trial_level": metadata.trial_level.value,
            "judgment_date": metadata.judgment_date.isoformat(),
            "case_category": metadata.case_category.value,
            "cause_of_action": metadata.cause_of_action,
            "outcome_type": metadata.outcome_type.value,
        }
    if isinstance(metadata, GuidingCase):
        return {
            "kind": "guiding_case",
            "case_type": metadata.case_type,
            "case_name": metadata.case_name,
            "release_date": metadata.release_date.isoformat(),
            "case_category": metadata.case_category.value,
            "relevant_provisions": metadata.relevant_provisions,
            "highlights": metadata.highlights,
        }
    if isinstance(metadata, ReferenceCase):
        return {
            "kind": "reference_case",
            "case_type": metadata.case_type,
            "case_name": metadata.case_name,
            "db_entry_number": metadata.db_entry_number,
            "case_category": metadata.case_category.value,
            "relevant_provisions": metadata.relevant_provisions,
            "highlights": metadata.highlights,
        }
    raise TypeError(f"not case metadata: {metadata!r}")


# --- documents --------------------------------------------------------------

_TOP_KEYS = {
    "format_version", "doc_id", "annotator_id", "guideline_version",
    "metadata", "scope_text", "propositions", "relations",
}


def _proposition_from_data(data: Any, locus: str) -> Proposition:
    if not isinstance(data, dict):
        raise FormatError(locus, "expected an object")
    _require_keys(data, {"id", "text", "span", "type"}, locus)
    raw_id = _require(data, "id", locus)
    if not isinstance(raw_id, int) or isinstance(raw_id, bool):
        raise FormatError(f"{locus}.id", f"expected an integer, got {raw_id!r}")
    text = _require_str(data, "text", locus)
    type_label = _require_str(data, "type", locus)
    try:
        ptype = PropositionType.from_label(type_label)
    except ValueError as err:
        raise FormatError(f"{locus}.type", str(err)) from None
    span = None
    if "span" in data:
        raw_span = data["span"]
        if (
            not isinstance(raw_span, list)
            or len(raw_span) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw_span)
        ):
            raise FormatError(f"{locus}.span", f"expected [start, end], got {raw_span!r}")
        span = (raw_span[0], raw_span[1])
    return Proposition(id=raw_id, text=text, ptype=ptype, span=span)


def parse_document_data(data: Any) -> AnnotationDocument:
    """Build a document from parsed JSON without enforcing model invariants,
    so a validator can report every problem. Schema violations still raise
    FormatError."""
    if not isinstance(data, dict):
        raise FormatError("document", "expected a top-level object")
    _require_keys(data, _TOP_KEYS, "document")
    version = _require_str(data, "format_version", "document")
    if version != FORMAT_VERSION:
        raise FormatError("document.format_version",
                          f"unsupported version {version!r}, expected {FORMAT_VERSION!r}")
    raw_props = _require(data, "propositions", "document")
    if not isinstance(raw_props, list):
        raise FormatError("document.propositions", "expected a list")
    propositions = [
        _proposition_from_data(item, f"propositions[{i}]") for i, item in enumerate(raw_props)
    ]
    raw_relations = _require(data, "relations", "document")
    if not isinstance(raw_relations, list):
        raise FormatError("document.relations", "expected a list")
    relations = []
    for i, item in enumerate(raw_relations):
        if not isinstance(item, str):
            raise FormatError(f"relations[{i}]", f"expected a notation string, got {item!r}")
        try:
            relations.append(parse_expr(item))
        except NotationError as err:
            raise FormatError(f"relations[{i}]", str(err)) from None
    return AnnotationDocument(
        doc_id=_require_str(data, "doc_id", "document"),
        annotator_id=_require_str(data, "annotator_id", "document"),
        guideline_version=_require_str(data, "guideline_version", "document"),
        metadata=metadata_from_data(_require(data, "metadata", "document")),
        scope_text=_require_str(data, "scope_text", "document"),
        propositions=tuple(propositions),
        relations=tuple(relations),
    )


def document_to_data(doc: AnnotationDocument) -> dict:
    """Canonical JSON-ready rendering: fixed key order, propositions by id."""
    props = []
    for prop in sorted(doc.propositions, key=lambda p: p.id):
        item: dict[str, Any] = {"id": prop.id, "text": prop.text}
        if prop.span is not None:
            item["span"] = [prop.span[0], prop.span[1]]
        item["type"] = prop.ptype.label()
        props.append(item)
    return {
        "format_version": FORMAT_VERSION,
        "doc_id": doc.doc_id,
        "annotator_id": doc.annotator_id,
        "guideline_version": doc.guideline_version,
        "metadata": metadata_to_data(doc.metadata),
        "scope_text": doc.scope_text,
        "propositions": props,
        "relations": [serialize_expr(rel) for rel in doc.relations],
    }


def loads_document(text: str) -> AnnotationDocument:
    """Parse and fully check a document from JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"line {err.lineno}", err.msg) from None
    doc = parse_document_data(data)
    check_invariants(doc)
    return doc


def dumps_document(doc: AnnotationDocument) -> str:
    return json.dumps(document_to_data(doc), ensure_ascii=False, indent=2) + "\n"


def load_document(path: str | Path) -> AnnotationDocument:
    """Load a core-model-valid document; FormatError for schema problems,
    InvariantError for rule violations such as a GM type without subtype."""
    return loads_document(Path(path).read_text(encoding="utf-8"))


def save_document(doc: AnnotationDocument, path: str | Path) -> None:
    Path(path).write_text(dumps_document(doc), encoding="utf-8")
