"""Simulate a dual-annotation round and inspect the disagreements.

A second annotator's version of the bundled judgment is derived from the
first by relabeling one proposition and flipping one support's direction,
then the agreement report is printed: Cohen's kappa over labels, relation
precision/recall/F1, and the classified conflict list an adjudicator would
work through.

Run:  python3 demos/dual_annotation_compare.py
"""

import dataclasses
from pathlib import Path

from argnota import PropositionType, compare_documents, load_document, parse_expr, serialize_expr
from argnota.agreement import format_agreement_report

GOLDEN = Path(__file__).parent.parent / "tests" / "data" / "document_I.json"


def second_annotator(doc):
    relabeled = tuple(
        dataclasses.replace(p, ptype=PropositionType.from_label("SF")) if p.id == 4 else p
        for p in doc.propositions
    )
    flipped = tuple(
        parse_expr("S(p11,p10)") if serialize_expr(r) == "S(p10,p11)" else r
        for r in doc.relations
    )
    return dataclasses.replace(doc, annotator_id="A2", propositions=relabeled, relations=flipped)


def main() -> None:
    first = load_document(GOLDEN)
    second = second_annotator(first)
    print(f"comparing {first.annotator_id} with {second.annotator_id} on {first.doc_id!r}\n")
    report = compare_documents(first, second)
    print(format_agreement_report(report), end="")


if __name__ == "__main__":
    main()
