"""HTTP/JSON service over a database.

Every mutation goes through the store's transaction pipeline, and the
response always carries the transaction's full violation set.  Critical
rollbacks map to 409, unknown ids to 404, malformed requests to 400, a
busy writer to 503.  The actor name for log attribution is read from the
X-Actor header.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import wire
from .interchange import FormatError, canonical_bytes, export_db
from .lexbase.model import Strength, Transaction, UnknownId, UnknownLemma
from .lexbase.store import Database, UnknownLanguage
from .rules import RuleError

WRITE_TIMEOUT = 10.0


def build_app(db: Database, static_dir: Optional[str | Path] = None) -> FastAPI:
    app = FastAPI(title="nadia", version="0.1.0")

    @app.exception_handler(UnknownId)
    @app.exception_handler(UnknownLemma)
    def _not_found(_req: Request, exc: Exception):
        return JSONResponse({"error": str(exc)}, status_code=404)

    @app.exception_handler(UnknownLanguage)
    @app.exception_handler(wire.WireError)
    @app.exception_handler(FormatError)
    @app.exception_handler(RuleError)
    @app.exception_handler(ValueError)
    def _bad_request(_req: Request, exc: Exception):
        return JSONResponse({"error": str(exc)}, status_code=400)

    @app.exception_handler(TimeoutError)
    def _busy(_req: Request, exc: Exception):
        return JSONResponse({"error": str(exc)}, status_code=503)

    def mutate(mutations, actor: str) -> tuple[Transaction, JSONResponse]:
        txn = db.apply_transaction(mutations, actor=actor or "",
                                   timeout=WRITE_TIMEOUT)
        payload = wire.transaction_to_json(txn)
        status = 200 if txn.committed else 409
        return txn, JSONResponse(payload, status_code=status)

    @app.get("/dictionaries")
    def dictionaries():
        return wire.schema_to_json(db.schema)

    @app.get("/entries")
    def entries(lang: str = Query(""), prefix: str = Query("")):
        found = db.lookup_entry(lang, prefix)
        return {"entries": [wire.entry_to_json(e, db) for e in found]}

    @app.get("/entries/{entry_id}")
    def entry(entry_id: str):
        e = db.state.entries.get(entry_id)
        if e is None:
            raise UnknownId(entry_id)
        return wire.entry_to_json(e, db)

    @app.get("/axies/{axie_id}")
    def axie(axie_id: str, depth: int = Query(1)):
        return db.browse_axie(axie_id, depth=depth)

    @app.post("/translate")
    def translate(payload: dict = Body(...)):
        result = db.translate(payload.get("lemma", ""),
                              payload.get("from", ""), payload.get("to", ""))
        return wire.translation_to_json(result)

    @app.post("/entries")
    def create_entry(payload: dict = Body(...),
                     x_actor: Optional[str] = Header(default=None)):
        mutation = wire.mutation_from_json({
            "op": "createEntry",
            "language": payload.get("language", ""),
            "lemma": payload.get("lemma", ""),
            "features": payload.get("features"),
        })
        _txn, response = mutate([mutation], x_actor)
        return response

    @app.post("/acceptions")
    def add_acception(payload: dict = Body(...),
                      x_actor: Optional[str] = Header(default=None)):
        mutation = wire.mutation_from_json({**payload, "op": "addAcception"})
        _txn, response = mutate([mutation], x_actor)
        return response

    @app.post("/link")
    def link(payload: dict = Body(...),
             x_actor: Optional[str] = Header(default=None)):
        if "axie" in payload:
            mutation = wire.mutation_from_json({**payload, "op": "linkToAxie"})
        else:
            mutation = wire.mutation_from_json({**payload, "op": "linkTranslation"})
        _txn, response = mutate([mutation], x_actor)
        return response

    @app.post("/sub-acceptions")
    def sub_acception(payload: dict = Body(...),
                      x_actor: Optional[str] = Header(default=None)):
        mutation = wire.mutation_from_json({**payload, "op": "makeSubAcception"})
        _txn, response = mutate([mutation], x_actor)
        return response

    @app.post("/quasi")
    def quasi(payload: dict = Body(...),
              x_actor: Optional[str] = Header(default=None)):
        mutation = wire.mutation_from_json({**payload, "op": "addQuasiSynonym"})
        _txn, response = mutate([mutation], x_actor)
        return response

    @app.post("/entries/{entry_id}/validate")
    def validate(entry_id: str, x_actor: Optional[str] = Header(default=None)):
        mutation = wire.mutation_from_json({"op": "validateEntry", "entry": entry_id})
        _txn, response = mutate([mutation], x_actor)
        return response

    @app.post("/transactions")
    def transactions(payload: dict = Body(...),
                     x_actor: Optional[str] = Header(default=None)):
        mutations = [wire.mutation_from_json(m)
                     for m in payload.get("mutations", [])]
        if not mutations:
            raise wire.WireError("transaction carries no mutations")
        _txn, response = mutate(mutations, x_actor)
        return response

    @app.get("/violations")
    def violations(strength: Optional[str] = Query(default=None)):
        wanted = Strength.parse(strength) if strength else None
        out = db.violations_logged(wanted)
        return {"violations": [wire.violation_to_json(v) for v in out]}

    @app.post("/defaults/preview")
    def defaults_preview(payload: dict = Body(...)):
        proposals = db.preview_defaults(payload.get("articleId", ""))
        return {"proposals": [
            {"path": path, "value": wire.value_to_json(value)}
            for path, value in proposals]}

    @app.get("/stats")
    def stats():
        return db.stats()

    @app.get("/export")
    def export(includeDelayed: bool = Query(default=False)):
        doc = export_db(db, include_delayed=includeDelayed)
        return Response(content=canonical_bytes(doc), media_type="application/xml")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="workbench")

    return app
