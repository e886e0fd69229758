"""HTTP facade binding the platform modules into one JSON API.

Every module error surfaces as a JSON body {"error": {"code", "message"}}
with exactly one machine code (validation, not_found, conflict, upstream,
internal); stack traces never reach the wire. Writes are serialized by
the platform's single-writer lock; the KB and fixture stores are
read-only and shared.
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from semaps.config import Config
from semaps.errors import SemapsError, ValidationError
from semaps.geo import WHOLE_WORLD, Viewport
from semaps.kb import LANGUAGES, KnowledgeGraph, load_kb
from semaps.lod import LodClient
from semaps.ontology import Platform, SourceType, TopClass
from semaps.sparql import evaluate, parse_query, results_to_json

log = logging.getLogger(__name__)

_STATUS = {"validation": 400, "not_found": 404, "conflict": 409, "upstream": 502, "internal": 500}


def _error_response(code: str, message: str, field: str | None = None) -> JSONResponse:
    body = {"error": {"code": code, "message": message}}
    if field:
        body["error"]["field"] = field
    return JSONResponse(status_code=_STATUS[code], content=body)


class Runtime:
    """Everything one server process holds: KB, platform state, LOD client."""

    def __init__(self, config: Config, clock=None):
        self.config = config
        if config.kb_concepts and config.kb_relations:
            self.kb = load_kb(config.kb_concepts, config.kb_relations)
        else:
            self.kb = KnowledgeGraph()
        self.platform = Platform(
            kb=self.kb,
            data_dir=config.data_dir,
            base_namespace=config.base_namespace,
            reliability=config.reliability,
            clock=clock,
        )
        self.lod = LodClient(
            self.kb,
            config.sources,
            base_namespace=config.base_namespace,
            timeout=config.fetch_timeout,
        )


async def _json_body(request: Request) -> dict:
    try:
        data = await request.json()
    except Exception:
        raise ValidationError("request body must be a JSON object")
    if not isinstance(data, dict):
        raise ValidationError("request body must be a JSON object")
    return data


def _require(data: dict, name: str, kind: type, required: bool = True, default=None):
    if name not in data or data[name] is None:
        if required:
            raise ValidationError(f"missing field {name!r}", field=name)
        return default
    value = data[name]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise ValidationError(f"field {name!r} must be of type {kind.__name__}", field=name)
    return value


def _acting_account(request: Request) -> int:
    raw = request.headers.get("X-Account")
    if raw is None:
        raise ValidationError("missing X-Account header identifying the acting account")
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"X-Account header must be an account id, got {raw!r}")


def _parse_bbox(raw: str | None) -> Viewport | None:
    return Viewport.parse_bbox(raw) if raw is not None else None


def create_app(config: Config | None = None, runtime: Runtime | None = None) -> FastAPI:
    if runtime is None:
        runtime = Runtime(config or Config())
    app = FastAPI(title="semaps", docs_url=None, redoc_url=None)
    app.state.runtime = runtime
    platform = runtime.platform

    @app.exception_handler(SemapsError)
    async def semaps_error_handler(_request: Request, exc: SemapsError):
        field = getattr(exc, "field", None)
        return _error_response(exc.code, str(exc), field)

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = first.get("msg", "invalid request")
        return _error_response("validation", f"{where}: {message}" if where else message)

    @app.exception_handler(Exception)
    async def internal_error_handler(_request: Request, exc: Exception):
        log.exception("unhandled error: %s", exc)
        return _error_response("internal", "internal server error")

    # ----- semantic characterization ------------------------------------

    @app.post("/api/characterize")
    async def characterize(request: Request):
        data = await _json_body(request)
        expression = _require(data, "expression", str)
        language = _require(data, "language", str, required=False, default="en")
        body = {}
        if language not in LANGUAGES:
            body["warning"] = f"unknown language {language!r}, using 'en'"
            language = "en"
        candidates = runtime.kb.characterize(expression, language)
        body["candidates"] = [
            {
                "concept_id": c.concept_id,
                "lemma": runtime.kb.concepts[c.concept_id].lemma,
                "score": c.score,
                "match_kind": c.match_kind,
                "external_links": list(runtime.kb.concepts[c.concept_id].external_links),
            }
            for c in candidates
        ]
        return body

    @app.get("/api/concepts/{concept_id}/relations")
    async def concept_relations(concept_id: int):
        rels = runtime.kb.relations_of(concept_id)
        return {
            "relations": [
                {
                    "name": r.name,
                    "target_id": r.target,
                    "target_lemma": runtime.kb.concepts[r.target].lemma,
                    "polarity": r.polarity,
                }
                for r in rels
            ]
        }

    # ----- accounts -------------------------------------------------------

    @app.post("/api/users", status_code=201)
    async def register_user(request: Request):
        data = await _json_body(request)
        login = _require(data, "login", str)
        name = _require(data, "name", str, required=False, default="")
        return platform.register_user(login, name).to_json()

    # ----- maps -----------------------------------------------------------

    @app.post("/api/maps", status_code=201)
    async def create_map(request: Request):
        data = await _json_body(request)
        title = _require(data, "title", str)
        owner = _require(data, "owner", int)
        return platform.create_map(title, owner).to_json()

    @app.get("/api/maps/{map_id}")
    async def get_map(map_id: int):
        return platform.get_map(map_id).to_json()

    @app.post("/api/maps/{map_id}/concepts", status_code=201)
    async def create_concept(map_id: int, request: Request):
        data = await _json_body(request)
        label = _require(data, "label", str)
        top_class = TopClass.parse(_require(data, "top_class", str))
        if "kb_concept_id" not in data:
            raise ValidationError("missing field 'kb_concept_id'", field="kb_concept_id")
        # explicit null = the wizard's unlinked fallback
        kb_concept_id = data["kb_concept_id"]
        if kb_concept_id is not None and not isinstance(kb_concept_id, int):
            raise ValidationError("field 'kb_concept_id' must be an integer or null")
        record = platform.create_concept(map_id, label, top_class, kb_concept_id)
        return record.to_json()

    @app.get("/api/maps/{map_id}/concepts")
    async def list_concepts(map_id: int):
        return {"concepts": [c.to_json() for c in platform.classes_of(map_id)]}

    # ----- markers ----------------------------------------------------------

    @app.post("/api/maps/{map_id}/markers", status_code=201)
    async def create_marker(map_id: int, request: Request):
        data = await _json_body(request)
        creator = _acting_account(request)
        record = platform.create_marker(
            map_id=map_id,
            class_id=_require(data, "class_id", int),
            creator_account=creator,
            latitude=_require(data, "latitude", float),
            longitude=_require(data, "longitude", float),
            description=_require(data, "description", str, required=False, default=""),
            source_type=SourceType.parse(
                _require(data, "source_type", str, required=False, default="Anonymous")
            ),
        )
        return record.to_json()

    @app.get("/api/maps/{map_id}/markers")
    async def list_markers(map_id: int, bbox: str | None = None):
        viewport = _parse_bbox(bbox) or WHOLE_WORLD
        return {"markers": [m.to_json() for m in platform.markers_in(map_id, viewport)]}

    @app.post("/api/markers/{marker_id}/votes")
    async def vote_marker(marker_id: int, request: Request):
        data = await _json_body(request)
        account = _acting_account(request)
        vote = _require(data, "vote", str)
        provenance, reputation = platform.confirm_marker(marker_id, account, vote)
        return {"provenance": provenance.to_json(), "creator_reputation": reputation}

    # ----- LOD search ----------------------------------------------------------

    @app.get("/api/lod/search")
    async def lod_search(concept: int, bbox: str | None = None, depth: int | None = None):
        viewport = _parse_bbox(bbox)
        if depth is None:
            depth = runtime.config.expansion_depth
        result = runtime.lod.search_for_concept(concept, viewport, depth)
        return result.to_json()

    # ----- SPARQL endpoint -------------------------------------------------------

    @app.get("/sparql")
    async def sparql(query: str | None = None):
        if query is None:
            raise ValidationError("missing 'query' parameter")
        parsed = parse_query(query)
        rows = evaluate(platform.store, parsed)
        return JSONResponse(
            content=results_to_json(parsed, rows),
            media_type="application/sparql-results+json",
        )

    @app.get("/api/export")
    async def export_turtle():
        return Response(content=platform.export_turtle(), media_type="text/turtle")

    return app
