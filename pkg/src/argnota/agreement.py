"""Dual-annotation alignment, disagreement classification, and agreement stats.

Two independent annotations of the same reasoning text are aligned by span
overlap (character-offset Jaccard, greedy, deterministic). Agreement is
reported as Cohen's kappa over proposition labels (at base-type or full-label
granularity) and precision/recall/F1 over canonicalized relation sets, with
every conflict classified as a label, boundary, or relation disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import (
    AnnotationDocument,
    Attack,
    Identity,
    Joint,
    Match,
    PropRef,
    PropositionType,
    RelationExpr,
    Support,
    prop_map,
)
from .notation import serialize_expr


class AgreementError(ValueError):
    pass


class ScopeMismatch(AgreementError):
    """The two documents do not annotate the same scope text."""


class MissingSpans(AgreementError):
    """A proposition lacks the span needed for overlap alignment."""


class DegenerateMarginals(AgreementError):
    """Expected agreement is 1 (a single label throughout both sides); kappa undefined."""


class Granularity(Enum):
    BASE = "base"  # SF / GF / SM / GM
    FULL = "full"  # the nine concrete labels


class DisagreementCategory(Enum):
    LABEL = "Label"
    BOUNDARY = "Boundary"
    RELATION_DIRECTION_OR_TARGET = "RelationDirectionOrTarget"


@dataclass(frozen=True)
class AlignedPair:
    a_id: int
    b_id: int
    overlap: float  # Jaccard over character offsets, 0..1


@dataclass(frozen=True)
class Alignment:
    pairs: tuple[AlignedPair, ...]
    unmatched_a: tuple[int, ...]
    unmatched_b: tuple[int, ...]


@dataclass(frozen=True)
class Disagreement:
    category: DisagreementCategory
    detail: str
    a_id: int | None = None
    b_id: int | None = None
    relation: str | None = None
    side: str | None = None  # "a" or "b" for one-sided records


@dataclass(frozen=True)
class AgreementReport:
    base_type_kappa: float | None  # None when marginals are degenerate
    subtype_kappa: float | None
    relation_precision: float
    relation_recall: float
    relation_f1: float
    boundary_mean_overlap: float
    disagreements: tuple[Disagreement, ...]
    alignment: Alignment


def span_jaccard(a: tuple[int, int], b: tuple[int, int]) -> float:
    intersection = max(0, min(a[1], b[1]) - max(a[0], b[0]))
    union = (a[1] - a[0]) + (b[1] - b[0]) - intersection
    return intersection / union if union else 0.0


def _require_spans(doc: AnnotationDocument) -> dict[int, tuple[int, int]]:
    spans: dict[int, tuple[int, int]] = {}
    for prop in doc.propositions:
        if prop.span is None:
            raise MissingSpans(f"proposition p{prop.id} of {doc.annotator_id!r} has no span")
        spans[prop.id] = prop.span
    return spans


def align_propositions(
    a: AnnotationDocument, b: AnnotationDocument, threshold: float = 0.5
) -> Alignment:
    """Greedy one-to-one matching by descending span overlap.

    Ties break on the smaller id in `a`, then in `b`. Pairs whose Jaccard
    overlap is below `threshold` are not matched.
    """
    if a.scope_text != b.scope_text:
        raise ScopeMismatch("documents annotate different scope texts")
    spans_a = _require_spans(a)
    spans_b = _require_spans(b)

    candidates: list[tuple[float, int, int]] = []
    for a_id, span_a in spans_a.items():
        for b_id, span_b in spans_b.items():
            overlap = span_jaccard(span_a, span_b)
            if overlap >= threshold and overlap > 0:
                candidates.append((overlap, a_id, b_id))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))

    matched_a: set[int] = set()
    matched_b: set[int] = set()
    pairs: list[AlignedPair] = []
    for overlap, a_id, b_id in candidates:
        if a_id in matched_a or b_id in matched_b:
            continue
        matched_a.add(a_id)
        matched_b.add(b_id)
        pairs.append(AlignedPair(a_id, b_id, overlap))
    pairs.sort(key=lambda p: p.a_id)
    return Alignment(
        pairs=tuple(pairs),
        unmatched_a=tuple(sorted(set(spans_a) - matched_a)),
        unmatched_b=tuple(sorted(set(spans_b) - matched_b)),
    )


def _label(ptype: PropositionType, granularity: Granularity) -> str:
    if granularity is Granularity.BASE:
        return ptype.base.value
    return ptype.label()


def type_kappa(
    a: AnnotationDocument,
    b: AnnotationDocument,
    alignment: Alignment,
    granularity: Granularity = Granularity.BASE,
) -> float:
    """Cohen's kappa over the aligned pairs' labels.

    Returns exactly 1.0 on perfect agreement. Raises DegenerateMarginals when
    chance agreement is 1 (identical single-label marginals on both sides),
    where the coefficient is undefined.
    """
    if not alignment.pairs:
        raise AgreementError("cannot compute kappa over an empty alignment")
    props_a = prop_map(a)
    props_b = prop_map(b)
    labels_a = [_label(props_a[p.a_id].ptype, granularity) for p in alignment.pairs]
    labels_b = [_label(props_b[p.b_id].ptype, granularity) for p in alignment.pairs]

    n = len(labels_a)
    observed = sum(1 for la, lb in zip(labels_a, labels_b) if la == lb) / n
    p_expected = 0.0
    # sorted so float summation order is identical across processes
    for label in sorted(set(labels_a) | set(labels_b)):
        p_expected += (labels_a.count(label) / n) * (labels_b.count(label) / n)
    if p_expected == 1.0:
        raise DegenerateMarginals("both annotators used a single identical label throughout")
    if observed == 1.0:
        return 1.0
    return (observed - p_expected) / (1.0 - p_expected)


def _map_to_a_space(expr: RelationExpr, b_to_a: dict[int, int]) -> RelationExpr | None:
    """Rewrite b-side ids into a-side ids; None when any id is unmatched."""
    match expr:
        case PropRef(id=pid):
            mapped = b_to_a.get(pid)
            return None if mapped is None else PropRef(mapped)
        case Support(source=s, target=t) | Attack(source=s, target=t) | Match(particular=s, general=t):
            left = _map_to_a_space(s, b_to_a)
            right = _map_to_a_space(t, b_to_a)
            if left is None or right is None:
                return None
            return type(expr)(left, right)
        case Joint(members=ms) | Identity(members=ms):
            mapped_members = tuple(_map_to_a_space(m, b_to_a) for m in ms)
            if any(m is None for m in mapped_members):
                return None
            return type(expr)(mapped_members)
    raise TypeError(f"not a relation expression: {expr!r}")


def _relation_sets(
    a: AnnotationDocument, b: AnnotationDocument, alignment: Alignment
) -> tuple[set[str], set[str], set[str]]:
    """A's canonical set, b's relations mapped into a's id space, and b's raw
    canonical set. Relations touching unmatched b ids do not map and so can
    never intersect, but they still count toward b's size."""
    b_to_a = {p.b_id: p.a_id for p in alignment.pairs}
    set_a = {serialize_expr(rel) for rel in a.relations}
    set_b_raw: dict[str, RelationExpr] = {serialize_expr(rel): rel for rel in b.relations}
    mapped: set[str] = set()
    for expr in set_b_raw.values():
        translated = _map_to_a_space(expr, b_to_a)
        if translated is not None:
            mapped.add(serialize_expr(translated))
    return set_a, mapped, set(set_b_raw)


def relation_f1(
    a: AnnotationDocument, b: AnnotationDocument, alignment: Alignment
) -> tuple[float, float, float]:
    """Precision, recall, F1 of b's relations against a's.

    Relations compare as sets of canonical serializations after translating
    b's ids through the alignment; anything touching an unmatched proposition
    cannot match. Two empty sides count as perfect agreement.
    """
    set_a, mapped_b, set_b = _relation_sets(a, b, alignment)
    intersection = set_a & mapped_b
    if set_b:
        precision = len(intersection) / len(set_b)
    else:
        precision = 1.0 if not set_a else 0.0
    if set_a:
        recall = len(intersection) / len(set_a)
    else:
        recall = 1.0 if not set_b else 0.0
    if precision + recall == 0.0:
        f1 = 0.0
    elif precision == 1.0 and recall == 1.0:
        f1 = 1.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def classify_disagreements(
    a: AnnotationDocument, b: AnnotationDocument, alignment: Alignment
) -> list[Disagreement]:
    """Label, boundary, and relation conflicts, deterministically ordered."""
    props_a = prop_map(a)
    props_b = prop_map(b)
    out: list[Disagreement] = []

    for pair in alignment.pairs:
        type_a = props_a[pair.a_id].ptype
        type_b = props_b[pair.b_id].ptype
        if type_a != type_b:
            out.append(
                Disagreement(
                    DisagreementCategory.LABEL,
                    f"p{pair.a_id} labeled {type_a.label()} by a, "
                    f"p{pair.b_id} labeled {type_b.label()} by b",
                    a_id=pair.a_id,
                    b_id=pair.b_id,
                )
            )
    for pair in alignment.pairs:
        if pair.overlap < 1.0:
            out.append(
                Disagreement(
                    DisagreementCategory.BOUNDARY,
                    f"p{pair.a_id} and p{pair.b_id} overlap only {pair.overlap:.3f}",
                    a_id=pair.a_id,
                    b_id=pair.b_id,
                )
            )
    for a_id in alignment.unmatched_a:
        out.append(
            Disagreement(
                DisagreementCategory.BOUNDARY,
                f"p{a_id} of a has no counterpart in b",
                a_id=a_id,
                side="a",
            )
        )
    for b_id in alignment.unmatched_b:
        out.append(
            Disagreement(
                DisagreementCategory.BOUNDARY,
                f"p{b_id} of b has no counterpart in a",
                b_id=b_id,
                side="b",
            )
        )

    set_a, mapped_b, _ = _relation_sets(a, b, alignment)
    for canonical in sorted(set_a - mapped_b):
        out.append(
            Disagreement(
                DisagreementCategory.RELATION_DIRECTION_OR_TARGET,
                f"relation {canonical} annotated only by a",
                relation=canonical,
                side="a",
            )
        )
    for canonical in sorted(mapped_b - set_a):
        out.append(
            Disagreement(
                DisagreementCategory.RELATION_DIRECTION_OR_TARGET,
                f"relation {canonical} (in a's id space) annotated only by b",
                relation=canonical,
                side="b",
            )
        )
    return out


def compare_documents(
    a: AnnotationDocument, b: AnnotationDocument, threshold: float = 0.5
) -> AgreementReport:
    """Full agreement report for one document pair."""
    alignment = align_propositions(a, b, threshold)
    try:
        base_kappa: float | None = type_kappa(a, b, alignment, Granularity.BASE)
    except DegenerateMarginals:
        base_kappa = None
    try:
        full_kappa: float | None = type_kappa(a, b, alignment, Granularity.FULL)
    except DegenerateMarginals:
        full_kappa = None
    precision, recall, f1 = relation_f1(a, b, alignment)

    overlap_total = sum(p.overlap for p in alignment.pairs)
    denominator = len(alignment.pairs) + len(alignment.unmatched_a) + len(alignment.unmatched_b)
    boundary_mean = overlap_total / denominator if denominator else 0.0

    return AgreementReport(
        base_type_kappa=base_kappa,
        subtype_kappa=full_kappa,
        relation_precision=precision,
        relation_recall=recall,
        relation_f1=f1,
        boundary_mean_overlap=boundary_mean,
        disagreements=tuple(classify_disagreements(a, b, alignment)),
        alignment=alignment,
    )


def report_to_data(report: AgreementReport) -> dict:
    """JSON-ready rendering of the report."""
    return {
        "base_type_kappa": report.base_type_kappa,
        "subtype_kappa": report.subtype_kappa,
        "relation_precision": report.relation_precision,
        "relation_recall": report.relation_recall,
        "relation_f1": report.relation_f1,
        "boundary_mean_overlap": report.boundary_mean_overlap,
        "aligned_pairs": [
            {"a": p.a_id, "b": p.b_id, "overlap": p.overlap} for p in report.alignment.pairs
        ],
        "unmatched_a": list(report.alignment.unmatched_a),
        "unmatched_b": list(report.alignment.unmatched_b),
        "disagreements": [
            {
                "category": d.category.value,
                "detail": d.detail,
                "a_id": d.a_id,
                "b_id": d.b_id,
                "relation": d.relation,
                "side": d.side,
            }
            for d in report.disagreements
        ],
    }


def _fmt_metric(value: float | None) -> str:
    return "undefined" if value is None else f"{value:.4f}"


def format_agreement_report(report: AgreementReport) -> str:
    """Human-readable summary, deterministic for equal input."""
    lines = [
        f"aligned pairs: {len(report.alignment.pairs)}",
        f"unmatched: a={len(report.alignment.unmatched_a)} b={len(report.alignment.unmatched_b)}",
        f"boundary mean overlap: {report.boundary_mean_overlap:.4f}",
        f"base type kappa: {_fmt_metric(report.base_type_kappa)}",
        f"full label kappa: {_fmt_metric(report.subtype_kappa)}",
        f"relation precision: {report.relation_precision:.4f}",
        f"relation recall: {report.relation_recall:.4f}",
        f"relation f1: {report.relation_f1:.4f}",
    ]
    if report.disagreements:
        lines.append(f"disagreements ({len(report.disagreements)}):")
        for d in report.disagreements:
            lines.append(f"- {d.category.value}: {d.detail}")
    else:
        lines.append("disagreements: none")
    return "".join(line + "\n" for line in lines)
