"""Walk one judgment through the whole pipeline.

Loads the bundled labor-dispute annotation, validates it against the strict
rule set, prints the inferred role of every proposition, and writes the
argument diagram next to this script as SVG and DOT.

Run:  python3 demos/annotate_and_render.py
"""

from pathlib import Path

from argnota import (
    document_graph,
    emit_dot,
    emit_svg,
    infer_roles,
    layout,
    load_document,
    validate_document,
)
from argnota.graph import components

HERE = Path(__file__).parent
GOLDEN = HERE.parent / "tests" / "data" / "document_I.json"


def main() -> None:
    doc = load_document(GOLDEN)
    print(f"loaded {doc.doc_id!r} by annotator {doc.annotator_id!r}: "
          f"{len(doc.propositions)} propositions, {len(doc.relations)} relations")

    diagnostics = validate_document(doc)
    print(f"strict validation: {'clean' if not diagnostics else diagnostics}")

    graph = document_graph(doc)
    arguments = [c for c in components(graph) if not c.isolated]
    print(f"the annotation contains {len(arguments)} separate arguments")
    for number, comp in enumerate(arguments, start=1):
        ids = ", ".join(f"p{i}" for i in comp.prop_ids)
        print(f"  argument {number}: {ids}")

    print("inferred roles:")
    assignment = infer_roles(graph)
    for pid in sorted(assignment.roles):
        print(f"  p{pid:<3} {assignment.roles[pid].value}")

    models = layout(graph)
    (HERE / "document_I.svg").write_text(emit_svg(models), encoding="utf-8")
    (HERE / "document_I.dot").write_text(emit_dot(models), encoding="utf-8")
    print(f"wrote {HERE / 'document_I.svg'} and {HERE / 'document_I.dot'}")


if __name__ == "__main__":
    main()
