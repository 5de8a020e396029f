"""Read-only HTTP API over a built competition graph.

The service answers every request from an immutable in-memory snapshot
loaded at startup; nothing mutates while serving. Errors always carry a
structured body ``{"code", "message"}`` whose code fixes the HTTP status.
"""
from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import HTTPException, RequestValidationError
from fastapi.responses import JSONResponse

from .errors import UnknownNode
from .graph_store import CompetitionGraph, ego_network, graph_to_dict, load_graph
from .linker import KnowledgeBase, load_kb

logger = logging.getLogger(__name__)

MAX_SEARCH_RESULTS = 25
MAX_HUBS = 10

_STATUS_CODES = {"not_found": 404, "bad_request": 400, "internal": 500}


class ApiFault(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def _fault_response(code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=_STATUS_CODES[code],
                        content={"code": code, "message": message})


def create_app(graph: CompetitionGraph, kb: KnowledgeBase | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="compgraph", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiFault)
    async def handle_fault(_request: Request, exc: ApiFault):
        return _fault_response(exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def handle_validation(_request: Request, exc: RequestValidationError):
        return _fault_response("bad_request", str(exc.errors()))

    @app.exception_handler(HTTPException)
    async def handle_http(_request: Request, exc: HTTPException):
        code = "not_found" if exc.status_code == 404 else "internal"
        return _fault_response(code, str(exc.detail))

    @app.exception_handler(Exception)
    async def handle_internal(_request: Request, exc: Exception):
        logger.exception("internal error")
        return _fault_response("internal", str(exc))

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get("/graph/overview")
    async def overview():
        hubs = sorted(graph.nodes.items(),
                      key=lambda item: (-(item[1].in_degree + item[1].out_degree), item[0]))
        return {
            "corpus_tag": graph.corpus_tag,
            "n_nodes": len(graph.nodes),
            "n_edges": len(graph.edges),
            "top_hubs": [{"id": node_id, "name": info.name,
                          "degree": info.in_degree + info.out_degree}
                         for node_id, info in hubs[:MAX_HUBS]],
        }

    @app.get("/graph/full")
    async def full_graph():
        return graph_to_dict(graph)

    @app.get("/company/{company_id}")
    async def company(company_id: str):
        info = graph.nodes.get(company_id)
        if info is None:
            raise ApiFault("not_found", f"no company {company_id} in the graph")
        return {"id": company_id, "name": info.name, "ticker": info.ticker,
                "in_degree": info.in_degree, "out_degree": info.out_degree,
                "degree": info.in_degree + info.out_degree}

    @app.get("/company/{company_id}/ego")
    async def ego(company_id: str, radius: int = 1):
        if not 1 <= radius <= 3:
            raise ApiFault("bad_request", "radius must be between 1 and 3")
        try:
            sub = ego_network(graph, company_id, radius)
        except UnknownNode:
            raise ApiFault("not_found", f"no company {company_id} in the graph")
        return graph_to_dict(sub)

    @app.get("/search")
    async def search(q: str = ""):
        if not q.strip():
            raise ApiFault("bad_request", "query parameter q must not be empty")
        query = q.strip().lower()
        if kb is not None:
            entries = kb.search(query, limit=MAX_SEARCH_RESULTS)
            return [{"id": e.company_id, "name": e.canonical_name, "ticker": e.ticker}
                    for e in entries]
        scored = []
        for node_id, info in graph.nodes.items():
            names = [info.name] + ([info.ticker] if info.ticker else [])
            if not any(query in n.lower() for n in names):
                continue
            prefix = any(n.lower().startswith(query) for n in names)
            scored.append((0 if prefix else 1, info.name, node_id, info))
        scored.sort(key=lambda item: item[:2])
        return [{"id": node_id, "name": info.name, "ticker": info.ticker}
                for _, _, node_id, info in scored[:MAX_SEARCH_RESULTS]]

    @app.get("/edge/{source}/{target}/{year}")
    async def edge(source: str, target: str, year: int):
        found = graph.find_edge(source, target, year)
        if found is None:
            raise ApiFault("not_found", f"no edge {source}->{target} in {year}")
        return {"source": source, "target": target, "year": year,
                "accession": found.provenance.accession_number,
                "snippet": found.provenance.snippet,
                "char_start": found.provenance.char_start,
                "char_end": found.provenance.char_end}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(graph_path: str | Path, port: int, host: str = "127.0.0.1",
          static_dir: str | Path | None = None, kb_path: str | Path | None = None):
    """Load the graph snapshot and serve it until interrupted."""
    import uvicorn

    graph = load_graph(graph_path)
    kb = load_kb(kb_path) if kb_path else None
    app = create_app(graph, kb=kb, static_dir=static_dir)
    logger.info("serving %d nodes / %d edges on %s:%d",
                len(graph.nodes), len(graph.edges), host, port)
    uvicorn.run(app, host=host, port=port, log_level="warning")
