"""HTTP facade over the toolkit for the annotation workspace and scripts.

Document storage lives under a root directory, one JSON file per storage key
"<doc_id>__<annotator_id>", so dual annotations of one judgment coexist.
Writes use optimistic concurrency: GET returns a content-addressed token in
the ETag header and PUT on an existing document must echo it via If-Match,
otherwise 409. Stored bytes are returned by GET exactly as uploaded.

Computation endpoints (/validate, /render, /roles, /compare, /parse-expr) are
pure: they never touch storage and agree exactly with the corresponding CLI
subcommands. Every JSON response is an envelope {ok, result, diagnostics};
ok is true only when no error-severity diagnostics are present.
"""

from __future__ import annotations

import hashlib
import re
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import agreement, diagram, graph, notation, storage, validation

_KEY_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.@-]*$")


def document_version_token(data: bytes) -> str:
    """Content-addressed version token; equal bytes give equal tokens."""
    return hashlib.sha256(data).hexdigest()


def _envelope(ok: bool, result: Any = None, diagnostics: list[dict] | None = None) -> dict:
    return {"ok": ok, "result": result, "diagnostics": diagnostics or []}


def _diag_data(diag: validation.Diagnostic) -> dict:
    return {
        "severity": diag.severity.value,
        "code": diag.code.value,
        "locus": diag.locus(),
        "message": diag.message,
    }


def _parse_diag_data(diag: notation.ParseDiagnostic) -> dict:
    return {
        "severity": "error",
        "code": diag.kind.value,
        "position": diag.position,
        "item_index": diag.item_index,
        "message": diag.message,
    }


def _format_error_data(err: storage.FormatError) -> dict:
    return {"severity": "error", "code": "FormatError", "locus": err.locus, "message": str(err)}


class ValidateRequest(BaseModel):
    document: dict
    mode: str = "strict"


class RenderRequest(BaseModel):
    document: dict
    format: str = "svg"


class RolesRequest(BaseModel):
    document: dict


class CompareRequest(BaseModel):
    doc_a: dict
    doc_b: dict
    threshold: float = 0.5


class ParseExprRequest(BaseModel):
    text: str


def create_app(root_dir: str | Path) -> FastAPI:
    root = Path(root_dir)
    if not root.is_dir():
        raise NotADirectoryError(f"storage root {root} does not exist")
    write_lock = threading.Lock()
    app = FastAPI(title="argnota service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )

    def path_for(key: str) -> Path:
        return root / f"{key}.json"

    @app.get("/documents")
    def list_documents() -> JSONResponse:
        ids = sorted(p.stem for p in root.glob("*.json"))
        return JSONResponse(_envelope(True, {"documents": ids}))

    @app.get("/documents/{key}")
    def get_document(key: str) -> Response:
        if not _KEY_RE.match(key):
            return JSONResponse(_envelope(False, diagnostics=[_bad_key(key)]), status_code=400)
        path = path_for(key)
        if not path.exists():
            return JSONResponse(
                _envelope(False, diagnostics=[_not_found(key)]), status_code=404
            )
        data = path.read_bytes()
        # raw stored bytes, never re-serialized, so GET is byte-faithful to PUT
        return Response(
            content=data,
            media_type="application/json",
            headers={"ETag": document_version_token(data)},
        )

    @app.put("/documents/{key}")
    async def put_document(key: str, request: Request) -> JSONResponse:
        if not _KEY_RE.match(key):
            return JSONResponse(_envelope(False, diagnostics=[_bad_key(key)]), status_code=400)
        body = await request.body()
        try:
            doc = storage.loads_document(body.decode("utf-8"))
        except UnicodeDecodeError:
            return JSONResponse(
                _envelope(False, diagnostics=[{
                    "severity": "error", "code": "FormatError", "message": "body is not UTF-8",
                }]),
                status_code=400,
            )
        except storage.FormatError as err:
            return JSONResponse(
                _envelope(False, diagnostics=[_format_error_data(err)]), status_code=400
            )
        except Exception as err:  # InvariantError and friends
            return JSONResponse(
                _envelope(False, diagnostics=[{
                    "severity": "error",
                    "code": getattr(err, "code", type(err).__name__),
                    "message": str(err),
                }]),
                status_code=400,
            )
        expected_key = f"{doc.doc_id}__{doc.annotator_id}"
        if key != expected_key:
            return JSONResponse(
                _envelope(False, diagnostics=[{
                    "severity": "error",
                    "code": "KeyMismatch",
                    "message": f"documents are keyed by doc_id and annotator_id; "
                               f"expected {expected_key!r}",
                }]),
                status_code=400,
            )
        path = path_for(key)
        client_token = request.headers.get("If-Match")
        with write_lock:
            if path.exists():
                current = document_version_token(path.read_bytes())
                if client_token != current:
                    return JSONResponse(
                        _envelope(False, diagnostics=[{
                            "severity": "error",
                            "code": "StaleVersion",
                            "message": "document changed since it was read; "
                                       "re-read and retry with the current token",
                        }]),
                        status_code=409,
                    )
            path.write_bytes(body)
        return JSONResponse(
            _envelope(True, {"id": key, "token": document_version_token(body)})
        )

    @app.post("/validate")
    def validate_endpoint(req: ValidateRequest) -> JSONResponse:
        try:
            doc = storage.parse_document_data(req.document)
        except storage.FormatError as err:
            return JSONResponse(
                _envelope(False, diagnostics=[_format_error_data(err)]), status_code=400
            )
        try:
            mode = validation.ValidationMode(req.mode)
        except ValueError:
            return JSONResponse(
                _envelope(False, diagnostics=[{
                    "severity": "error", "code": "BadMode",
                    "message": f"mode must be strict or permissive, got {req.mode!r}",
                }]),
                status_code=400,
            )
        diags = validation.validate_document(doc, mode)
        return JSONResponse(
            _envelope(
                not validation.has_errors(diags),
                {
                    "rendered": validation.format_diagnostics(diags),
                    "error_count": sum(
                        1 for d in diags if d.severity is validation.Severity.ERROR
                    ),
                    "warning_count": sum(
                        1 for d in diags if d.severity is validation.Severity.WARNING
                    ),
                },
                [_diag_data(d) for d in diags],
            )
        )

    def _document_or_error(data: dict) -> tuple[Any, JSONResponse | None]:
        try:
            return storage.parse_document_data(data), None
        except storage.FormatError as err:
            return None, JSONResponse(
                _envelope(False, diagnostics=[_format_error_data(err)]), status_code=400
            )

    @app.post("/render")
    def render_endpoint(req: RenderRequest) -> JSONResponse:
        doc, error = _document_or_error(req.document)
        if error is not None:
            return error
        if req.format not in ("svg", "dot"):
            return JSONResponse(
                _envelope(False, diagnostics=[{
                    "severity": "error", "code": "BadFormat",
                    "message": f"format must be svg or dot, got {req.format!r}",
                }]),
                status_code=400,
            )
        try:
            models = diagram.layout(graph.document_graph(doc))
        except graph.InvalidDocument as err:
            return JSONResponse(
                _envelope(False, diagnostics=[_diag_data(d) for d in err.diagnostics])
            )
        text = diagram.emit_svg(models) if req.format == "svg" else diagram.emit_dot(models)
        return JSONResponse(_envelope(True, {"format": req.format, "text": text}))

    @app.post("/roles")
    def roles_endpoint(req: RolesRequest) -> JSONResponse:
        doc, error = _document_or_error(req.document)
        if error is not None:
            return error
        try:
            assignment = graph.infer_roles(graph.document_graph(doc))
        except graph.InvalidDocument as err:
            return JSONResponse(
                _envelope(False, diagnostics=[_diag_data(d) for d in err.diagnostics])
            )
        roles = {f"p{pid}": assignment.roles[pid].value for pid in sorted(assignment.roles)}
        return JSONResponse(
            _envelope(True, {"roles": roles, "rendered": graph.format_roles(assignment)})
        )

    @app.post("/compare")
    def compare_endpoint(req: CompareRequest) -> JSONResponse:
        doc_a, error = _document_or_error(req.doc_a)
        if error is not None:
            return error
        doc_b, error = _document_or_error(req.doc_b)
        if error is not None:
            return error
        try:
            report = agreement.compare_documents(doc_a, doc_b, req.threshold)
        except agreement.AgreementError as err:
            return JSONResponse(
                _envelope(False, diagnostics=[{
                    "severity": "error",
                    "code": type(err).__name__,
                    "message": str(err),
                }])
            )
        return JSONResponse(
            _envelope(
                True,
                {
                    "report": agreement.report_to_data(report),
                    "rendered": agreement.format_agreement_report(report),
                },
            )
        )

    @app.post("/parse-expr")
    def parse_expr_endpoint(req: ParseExprRequest) -> JSONResponse:
        try:
            expr = notation.parse_expr(req.text)
        except notation.NotationError as err:
            return JSONResponse(_envelope(False, diagnostics=[_parse_diag_data(err.diagnostic)]))
        return JSONResponse(_envelope(True, {"canonical": notation.serialize_expr(expr)}))

    return app


def _bad_key(key: str) -> dict:
    return {
        "severity": "error",
        "code": "BadKey",
        "message": f"invalid document key {key!r}",
    }


def _not_found(key: str) -> dict:
    return {"severity": "error", "code": "NotFound", "message": f"no document {key!r}"}


def serve(root_dir: str | Path, bind_addr: str = "127.0.0.1:8765") -> None:
    """Run the service until interrupted."""
    import uvicorn

    host, _, port_text = bind_addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"bind address must look like host:port, got {bind_addr!r}")
    uvicorn.run(create_app(root_dir), host=host, port=int(port_text), log_level="warning")
