"""HTTP service exposing the collection to the web client.

Stateless above the store and index: no sessions, no auth; user identity is
a caller-supplied string. Every error is {code, message} JSON; unknown body
fields are rejected rather than ignored. The index is built from the store
at startup and swapped atomically whenever the corpus changes.
"""

from __future__ import annotations

from contextlib import asynccontextmanager

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from . import explore, narrative
from .providers import ProviderRefusal, ProviderTimeout, get_provider
from .records import CostumeRecord, to_document
from .store import CollectionStore, UnknownCostumeError
from .vocab import (
    GeneTag,
    TagCategory,
    UnknownNameError,
    inner_concept,
    taxonomy,
    taxonomy_document,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class FavoriteBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    user_id: str
    costume_id: str


class GenerateBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    costume_id: str
    theme: str
    inner_concept: str
    user_note: str = ""
    seed: int = 0
    user_id: str | None = None


def _summary(record: CostumeRecord) -> dict:
    profile = record.surface.color_profile
    return {
        "id": record.id,
        "title": record.title,
        "ethnic_group": record.ethnic_group,
        "region": record.region,
        "tags": [str(tag) for tag in explore.record_tags(record)],
        "dominant_hex": profile.dominant_hex if profile else None,
        "perceptual_class": profile.perceptual_class.value if profile else None,
    }


def _parse_theme(value: str) -> narrative.Theme:
    try:
        return narrative.Theme(value[:1].upper() + value[1:].lower())
    except ValueError:
        raise ApiError(422, "unknown_theme", f"unknown theme: {value!r}") from None


def _page_request(page: int, page_size: int) -> explore.PageRequest:
    try:
        return explore.PageRequest(page=page, page_size=page_size)
    except ValueError as exc:
        raise ApiError(422, "invalid_page", str(exc)) from None


def create_app(
    data_dir: str,
    provider: str = "mock",
    provider_endpoint: str | None = None,
) -> FastAPI:
    store = CollectionStore(data_dir)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        try:
            yield
        finally:
            store.close()

    app = FastAPI(title="gene-atlas", lifespan=lifespan)
    app.state.store = store
    app.state.index = explore.build_index(list(store.records.values()))
    app.state.provider = get_provider(provider, provider_endpoint)

    def rebuild_index() -> None:
        # Fresh index swapped in atomically; readers see old or new, never a mix.
        app.state.index = explore.build_index(list(store.records.values()))

    app.state.rebuild_index = rebuild_index

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        malformed = any(
            str(err.get("type", "")).startswith("json") for err in exc.errors()
        )
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err.get('loc', ()))}: {err.get('msg', '')}"
            for err in exc.errors()
        )
        if malformed:
            return JSONResponse(
                status_code=400,
                content={"code": "malformed_body", "message": detail},
            )
        return JSONResponse(
            status_code=422,
            content={"code": "validation_error", "message": detail},
        )

    @app.get("/api/taxonomies")
    def get_taxonomies():
        return taxonomy_document()

    @app.get("/api/tags/{category}")
    def get_tags(category: str):
        try:
            cat = TagCategory(category[:1].upper() + category[1:].lower())
        except ValueError:
            raise ApiError(404, "unknown_category", f"unknown tag category: {category!r}")
        tags = []
        for value in taxonomy(cat.value):
            posting = app.state.index.tag_postings.get(GeneTag(cat, value), ())
            tags.append({"value": value, "count": len(posting)})
        return {"category": cat.value, "tags": tags}

    @app.get("/api/costumes")
    def list_costumes(
        tag: str | None = None,
        page: int = Query(1, ge=1),
        page_size: int = Query(20, ge=1),
    ):
        request = _page_request(page, page_size)
        index = app.state.index
        if tag is None:
            ids = list(index.id_order)
            total = len(ids)
            page_ids = request.slice(ids)
        else:
            try:
                parsed = GeneTag.parse(tag)
            except UnknownNameError as exc:
                raise ApiError(404, "unknown_tag", str(exc)) from None
            result = explore.browse_by_tag(index, parsed, request)
            total, page_ids = result.total, list(result.ids)
        records = app.state.store.records
        return {
            "total": total,
            "items": [_summary(records[cid]) for cid in page_ids],
        }

    @app.get("/api/search")
    def search(
        q: str,
        page: int = Query(1, ge=1),
        page_size: int = Query(20, ge=1),
    ):
        request = _page_request(page, page_size)
        try:
            result = explore.search_keyword(app.state.index, q, request)
        except explore.EmptyQueryError as exc:
            raise ApiError(422, "empty_query", str(exc)) from None
        records = app.state.store.records
        hits = [
            {
                "costume_id": hit.costume_id,
                "score": hit.score,
                **{
                    k: v
                    for k, v in _summary(records[hit.costume_id]).items()
                    if k != "id"
                },
            }
            for hit in result.hits
        ]
        return {"total": result.total, "hits": hits}

    @app.get("/api/costumes/{costume_id}")
    def costume_detail(costume_id: str):
        record = app.state.store.records.get(costume_id)
        if record is None:
            raise ApiError(404, "unknown_costume", f"unknown costume id: {costume_id!r}")
        related = {}
        for cat in TagCategory:
            groups = explore.related_costumes(app.state.index, costume_id, cat)
            related[cat.value] = [
                {"tag": str(g.tag), "value": g.tag.value, "ids": list(g.ids)}
                for g in groups
            ]
        available = [
            theme.value
            for theme in narrative.Theme
            if record.middle_for(narrative.THEME_DIMENSIONS[theme]) is not None
        ]
        inner_details = []
        for name in sorted(record.inner, key=taxonomy("inner").index):
            concept = inner_concept(name)
            inner_details.append(
                {
                    "name": concept.name,
                    "display": concept.display_name,
                    "level": concept.level.value,
                    "expression": concept.expression,
                    "connotation": concept.connotation,
                }
            )
        return {
            "record": to_document(record),
            "related": related,
            "available_themes": available,
            "inner_details": inner_details,
        }

    @app.get("/api/favorites")
    def get_favorites(user_id: str):
        return {"user_id": user_id, "favorites": app.state.store.list_favorites(user_id)}

    @app.post("/api/favorites")
    def add_favorite(body: FavoriteBody):
        try:
            favorites = app.state.store.add_favorite(body.user_id, body.costume_id)
        except UnknownCostumeError as exc:
            raise ApiError(404, "unknown_costume", str(exc.args[0])) from None
        except ValueError as exc:
            raise ApiError(422, "validation_error", str(exc)) from None
        return {"user_id": body.user_id, "favorites": favorites}

    @app.delete("/api/favorites")
    def remove_favorite(body: FavoriteBody):
        favorites = app.state.store.remove_favorite(body.user_id, body.costume_id)
        return {"user_id": body.user_id, "favorites": favorites}

    @app.post("/api/generate")
    def generate(body: GenerateBody):
        record = app.state.store.records.get(body.costume_id)
        if record is None:
            raise ApiError(404, "unknown_costume", f"unknown costume id: {body.costume_id!r}")
        theme = _parse_theme(body.theme)
        try:
            request = narrative.CoCreationRequest(
                costume_id=body.costume_id,
                theme=theme,
                inner_concept=body.inner_concept,
                user_note=body.user_note,
                seed=body.seed,
            )
        except (UnknownNameError, ValueError) as exc:
            raise ApiError(422, "validation_error", str(exc)) from None
        try:
            prompt = narrative.assemble_prompt(record, request)
        except narrative.ThemeUnavailableError as exc:
            raise ApiError(422, "theme_unavailable", str(exc)) from None
        try:
            artifact = narrative.generate(app.state.provider, prompt, request)
        except ProviderTimeout as exc:
            raise ApiError(504, "provider_timeout", str(exc)) from None
        except ProviderRefusal as exc:
            raise ApiError(502, "provider_refusal", str(exc)) from None
        report = narrative.validate_scaffold(artifact, prompt)
        artifact_id = app.state.store.append_artifact(artifact, user_id=body.user_id)
        return {
            "artifact_id": artifact_id,
            "artifact": artifact.to_document(),
            "scaffold_report": report.to_document(),
        }

    @app.get("/api/artifacts")
    def list_artifacts(costume_id: str | None = None, user_id: str | None = None):
        return {
            "artifacts": app.state.store.list_artifacts(
                costume_id=costume_id, user_id=user_id
            )
        }

    return app


def serve(
    data_dir: str,
    host: str = "127.0.0.1",
    port: int = 8080,
    provider: str = "mock",
    provider_endpoint: str | None = None,
) -> None:
    """Run the service until interrupted; lock errors and bind errors raise."""
    import uvicorn

    app = create_app(data_dir, provider=provider, provider_endpoint=provider_endpoint)
    uvicorn.run(app, host=host, port=port, log_level="info")
