"""Shared fixtures, document builders, and hypothesis strategies."""

from __future__ import annotations

import random
from datetime import date
from pathlib import Path

import pytest
from hypothesis import strategies as st

from argnota.model import (
    AnnotationDocument,
    Attack,
    BaseType,
    CaseCategory,
    CourtLevel,
    Identity,
    Joint,
    Match,
    OriginalJudgment,
    OutcomeType,
    PropRef,
    Proposition,
    PropositionType,
    RelationExpr,
    Support,
    TrialLevel,
)
from argnota.storage import load_document

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_PATH = DATA_DIR / "document_I.json"


@pytest.fixture(scope="session")
def golden_path() -> Path:
    return GOLDEN_PATH


@pytest.fixture()
def golden_doc() -> AnnotationDocument:
    return load_document(GOLDEN_PATH)


SOME_METADATA = OriginalJudgment(
    case_number="(2024) Test 001",
    court="Test People's Court",
    court_level=CourtLevel.BASIC,
    trial_level=TrialLevel.FIRST,
    judgment_date=date(2024, 1, 1),
    case_category=CaseCategory.CIVIL,
    cause_of_action="test dispute",
    outcome_type=OutcomeType.DISMISSED,
)


def make_doc(
    propositions,
    relations=(),
    scope_text: str | None = None,
    doc_id: str = "test",
    annotator_id: str = "T1",
) -> AnnotationDocument:
    """Document shell around explicit propositions and relation expressions."""
    if scope_text is None:
        length = max((p.span[1] for p in propositions if p.span), default=0)
        scope_text = "x" * max(length, 1)
    return AnnotationDocument(
        doc_id=doc_id,
        annotator_id=annotator_id,
        guideline_version="1.0",
        metadata=SOME_METADATA,
        scope_text=scope_text,
        propositions=tuple(propositions),
        relations=tuple(relations),
    )


def props_of_types(*labels: str, spans: bool = False) -> list[Proposition]:
    """Propositions p1..pn with the given type labels and optional chained spans."""
    out = []
    cursor = 0
    for i, label in enumerate(labels, start=1):
        span = (cursor, cursor + 10) if spans else None
        cursor += 10
        out.append(
            Proposition(id=i, text=f"proposition {i}", ptype=PropositionType.from_label(label), span=span)
        )
    return out


# --- hypothesis strategies ----------------------------------------------------


def expr_trees(max_depth: int = 6, max_width: int = 5) -> st.SearchStrategy[RelationExpr]:
    leaves = st.builds(PropRef, st.integers(min_value=1, max_value=99))

    def level(depth: int) -> st.SearchStrategy[RelationExpr]:
        if depth <= 1:
            return leaves
        child = level(depth - 1)
        return st.one_of(
            leaves,
            st.builds(Support, child, child),
            st.builds(Attack, child, child),
            st.builds(Match, child, child),
            st.builds(Joint, st.lists(child, min_size=2, max_size=max_width).map(tuple)),
            st.builds(Identity, st.lists(leaves, min_size=2, max_size=max_width).map(tuple)),
        )

    return level(max_depth)


_BASE_LABELS = ["SF", "GF", "SM", "GM-L", "GM-I", "GM-C", "GM-U", "GM-M", "GM-O"]


@st.composite
def conforming_documents(draw, with_spans: bool = False) -> AnnotationDocument:
    """Documents free of error diagnostics in strict mode (warnings allowed)."""
    n = draw(st.integers(min_value=3, max_value=9))
    labels = [draw(st.sampled_from(_BASE_LABELS)) for _ in range(n)]
    props = props_of_types(*labels, spans=with_spans)
    particulars = [p.id for p in props if p.ptype.base in (BaseType.SF, BaseType.SM)]
    generals = [p.id for p in props if p.ptype.base in (BaseType.GF, BaseType.GM)]
    ids = [p.id for p in props]

    relations: list[RelationExpr] = []
    seen: set[tuple[int, ...]] = set()

    def distinct(pool, k):
        return draw(st.lists(st.sampled_from(pool), min_size=k, max_size=k, unique=True))

    n_relations = draw(st.integers(min_value=0, max_value=4))
    for _ in range(n_relations):
        choice = draw(st.integers(min_value=0, max_value=6))
        expr: RelationExpr | None = None
        if choice == 0 and len(ids) >= 2:
            a, b = distinct(ids, 2)
            expr = Support(PropRef(a), PropRef(b))
        elif choice == 1 and len(ids) >= 2:
            a, b = distinct(ids, 2)
            expr = Attack(PropRef(a), PropRef(b))
        elif choice == 2 and len(ids) >= 3:
            a, b, c = distinct(ids, 3)
            expr = Support(Joint((PropRef(a), PropRef(b))), PropRef(c))
        elif choice == 3 and particulars and generals:
            ps = draw(st.sampled_from(particulars))
            pg = draw(st.sampled_from(generals))
            expr = Match(PropRef(ps), PropRef(pg))
        elif choice == 4 and len(particulars) >= 2 and generals and len(ids) >= 4:
            a, b = distinct(particulars, 2)
            pg = draw(st.sampled_from(generals))
            rest = [i for i in ids if i not in (a, b, pg)]
            if rest:
                target = draw(st.sampled_from(rest))
                expr = Support(Match(Joint((PropRef(a), PropRef(b))), PropRef(pg)), PropRef(target))
        elif choice == 5 and len(ids) >= 3:
            a, b, c = distinct(ids, 3)
            expr = Attack(PropRef(c), Support(PropRef(a), PropRef(b)))
        elif choice == 6 and len(ids) >= 2:
            a, b = distinct(ids, 2)
            expr = Identity((PropRef(a), PropRef(b)))
        if expr is None:
            continue
        key = tuple(sorted(set(i for i in _all_ids(expr))))
        # avoid piling relations onto the same ids; keeps generated docs tidy
        if key in seen:
            continue
        seen.add(key)
        relations.append(expr)

    return make_doc(props, relations, scope_text="y" * (10 * n + 1))


def _all_ids(expr: RelationExpr):
    from argnota.model import prop_ids_of

    return prop_ids_of(expr)


# --- seeded random trees (for the large acceptance rounds) --------------------


def random_tree(rng: random.Random, depth: int) -> RelationExpr:
    if depth <= 1 or rng.random() < 0.3:
        return PropRef(rng.randint(1, 99))
    kind = rng.choice("SAMJI")
    if kind == "S":
        return Support(random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    if kind == "A":
        return Attack(random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    if kind == "M":
        return Match(random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    if kind == "J":
        width = rng.randint(2, 5)
        return Joint(tuple(random_tree(rng, depth - 1) for _ in range(width)))
    width = rng.randint(2, 5)
    return Identity(tuple(PropRef(rng.randint(1, 99)) for _ in range(width)))
