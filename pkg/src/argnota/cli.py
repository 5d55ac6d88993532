"""Command-line interface.

Exit codes: 0 on success, 1 when error-severity diagnostics are found (or an
expression fails to parse), 2 on I/O or file-format failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from . import agreement, diagram, graph, notation, storage, validation
from .model import AnnotationDocument, BaseType, GmSubtype

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_IO = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argnota",
        description="Annotation toolkit for argumentation structures in judicial decisions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a document against the annotation rules")
    p_validate.add_argument("file", type=Path)
    mode = p_validate.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", help="full rule set (default)")
    mode.add_argument("--permissive", action="store_true", help="structural rules only")

    p_render = sub.add_parser("render", help="emit the argument diagram")
    p_render.add_argument("file", type=Path)
    p_render.add_argument("--format", choices=("svg", "dot"), default="svg")
    p_render.add_argument("--out", type=Path, default=None, help="output path (default stdout)")

    p_roles = sub.add_parser("roles", help="inferred role per proposition")
    p_roles.add_argument("file", type=Path)

    p_compare = sub.add_parser("compare", help="agreement report for two annotations")
    p_compare.add_argument("file_a", type=Path)
    p_compare.add_argument("file_b", type=Path)
    p_compare.add_argument("--threshold", type=float, default=0.5,
                           help="minimum span overlap for alignment (default 0.5)")

    p_stats = sub.add_parser("stats", help="type and relation distributions")
    p_stats.add_argument("path", type=Path, help="a document file or a directory of them")

    p_parse = sub.add_parser("parse-expr", help="echo the canonical form of an expression")
    p_parse.add_argument("expression")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--root", type=Path, required=True, help="document storage directory")
    p_serve.add_argument("--bind", default="127.0.0.1:8765")

    return parser


def _read_document(path: Path) -> AnnotationDocument:
    """Lenient read: schema enforced, model invariants left to the caller's
    validator or graph preconditions so problems surface as diagnostics."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise SystemExit(_io_failure(f"cannot read {path}: {err}"))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SystemExit(_io_failure(f"{path}: line {err.lineno}: {err.msg}"))
    try:
        return storage.parse_document_data(data)
    except storage.FormatError as err:
        raise SystemExit(_io_failure(f"{path}: {err}"))


def _io_failure(message: str) -> int:
    print(message, file=sys.stderr)
    return EXIT_IO


def _cmd_validate(args: argparse.Namespace) -> int:
    doc = _read_document(args.file)
    mode = (
        validation.ValidationMode.PERMISSIVE if args.permissive
        else validation.ValidationMode.STRICT
    )
    diags = validation.validate_document(doc, mode)
    sys.stdout.write(validation.format_diagnostics(diags))
    return EXIT_DIAGNOSTICS if validation.has_errors(diags) else EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    doc = _read_document(args.file)
    try:
        models = diagram.layout(graph.document_graph(doc))
    except graph.InvalidDocument as err:
        sys.stderr.write(validation.format_diagnostics(err.diagnostics))
        return EXIT_DIAGNOSTICS
    text = diagram.emit_svg(models) if args.format == "svg" else diagram.emit_dot(models)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    return EXIT_OK


def _cmd_roles(args: argparse.Namespace) -> int:
    doc = _read_document(args.file)
    try:
        assignment = graph.infer_roles(graph.document_graph(doc))
    except graph.InvalidDocument as err:
        sys.stderr.write(validation.format_diagnostics(err.diagnostics))
        return EXIT_DIAGNOSTICS
    sys.stdout.write(graph.format_roles(assignment))
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    if args.file_a.is_dir() != args.file_b.is_dir():
        return _io_failure("compare needs either two files or two directories")
    if args.file_a.is_dir():
        return _compare_dirs(args.file_a, args.file_b, args.threshold)
    doc_a = _read_document(args.file_a)
    doc_b = _read_document(args.file_b)
    try:
        report = agreement.compare_documents(doc_a, doc_b, args.threshold)
    except agreement.AgreementError as err:
        return _io_failure(f"cannot compare: {err}")
    sys.stdout.write(agreement.format_agreement_report(report))
    return EXIT_OK


def _compare_dirs(dir_a: Path, dir_b: Path, threshold: float) -> int:
    docs_a = _docs_by_id(dir_a)
    docs_b = _docs_by_id(dir_b)
    shared = sorted(set(docs_a) & set(docs_b))
    if not shared:
        return _io_failure("no shared doc_ids between the two directories")
    for doc_id in shared:
        print(f"== {doc_id}")
        try:
            report = agreement.compare_documents(docs_a[doc_id], docs_b[doc_id], threshold)
        except agreement.AgreementError as err:
            print(f"cannot compare: {err}", file=sys.stderr)
            continue
        sys.stdout.write(agreement.format_agreement_report(report))
    print(f"pairs compared: {len(shared)}")
    return EXIT_OK


def _docs_by_id(directory: Path) -> dict[str, AnnotationDocument]:
    out: dict[str, AnnotationDocument] = {}
    for path in sorted(directory.glob("*.json")):
        doc = _read_document(path)
        out.setdefault(doc.doc_id, doc)
    return out


def collect_stats(docs: list[AnnotationDocument]) -> dict:
    """Aggregated distributions; relation kinds count graph nodes, so joint
    functions absorbed into a match node count once as Match."""
    base_counts: Counter[str] = Counter()
    subtype_counts: Counter[str] = Counter()
    relation_counts: Counter[str] = Counter()
    identity_classes = 0
    proposition_total = 0
    for doc in docs:
        for prop in doc.propositions:
            proposition_total += 1
            base_counts[prop.ptype.base.value] += 1
            if prop.ptype.gm_subtype is not None:
                subtype_counts[prop.ptype.label()] += 1
        g = graph.document_graph(doc)
        for node in g.relation_nodes:
            relation_counts[node.kind.value] += 1
        identity_classes += len(g.identity_classes)
    return {
        "documents": len(docs),
        "propositions": proposition_total,
        "base_types": {b.value: base_counts.get(b.value, 0) for b in BaseType},
        "gm_subtypes": {f"GM-{s.value}": subtype_counts.get(f"GM-{s.value}", 0) for s in GmSubtype},
        "relation_nodes": {k.value: relation_counts.get(k.value, 0) for k in graph.RelationKind},
        "identity_classes": identity_classes,
    }


def format_stats(stats: dict) -> str:
    lines = [
        f"documents: {stats['documents']}",
        f"propositions: {stats['propositions']}",
    ]
    for label, count in stats["base_types"].items():
        lines.append(f"  {label}: {count}")
    lines.append("gm subtypes:")
    for label, count in stats["gm_subtypes"].items():
        lines.append(f"  {label}: {count}")
    total_nodes = sum(stats["relation_nodes"].values())
    lines.append(f"relation nodes: {total_nodes}")
    for label, count in stats["relation_nodes"].items():
        lines.append(f"  {label}: {count}")
    lines.append(f"identity classes: {stats['identity_classes']}")
    return "".join(line + "\n" for line in lines)


def _cmd_stats(args: argparse.Namespace) -> int:
    if args.path.is_dir():
        paths = sorted(args.path.glob("*.json"))
        if not paths:
            return _io_failure(f"no .json documents under {args.path}")
    else:
        paths = [args.path]
    docs = []
    for path in paths:
        doc = _read_document(path)
        try:
            graph.build_graph(doc)
        except graph.InvalidDocument as err:
            sys.stderr.write(f"{path}:\n" + validation.format_diagnostics(err.diagnostics))
            return EXIT_DIAGNOSTICS
        docs.append(doc)
    sys.stdout.write(format_stats(collect_stats(docs)))
    return EXIT_OK


def _cmd_parse_expr(args: argparse.Namespace) -> int:
    try:
        expr = notation.parse_expr(args.expression)
    except notation.NotationError as err:
        print(notation.format_parse_diagnostic(err.diagnostic))
        return EXIT_DIAGNOSTICS
    print(notation.serialize_expr(expr))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from . import service

    if not args.root.is_dir():
        return _io_failure(f"storage root {args.root} is not a directory")
    service.serve(args.root, args.bind)
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "render": _cmd_render,
    "roles": _cmd_roles,
    "compare": _cmd_compare,
    "stats": _cmd_stats,
    "parse-expr": _cmd_parse_expr,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SystemExit as err:
        # _read_document signals I/O and format failures through SystemExit
        return err.code if isinstance(err.code, int) else EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
