"""FastAPI routes."""

from __future__ import annotations

import time

from fastapi import APIRouter, HTTPException

from gnnlab import __version__
from gnnlab.config import settings
from gnnlab.errors import CapacityError, InputError
from gnnlab.graph.tensor import from_document
from gnnlab.logging_.schemas import RunLogEvent
from gnnlab.logging_.structured_logger import log_event
from gnnlab.models import (
    AssignRequest,
    AssignResponse,
    DistinguishRequest,
    DistinguishResponse,
    HealthResponse,
    StatsResponse,
    TestName,
)
from gnnlab.qap.matching import assignment_objective, hungarian_lap
from gnnlab.storage.sqlite_store import RunStore
from gnnlab.wl.compare import compare, get_test

router = APIRouter()
store = RunStore(settings.db_path)


@router.post("/wl/distinguish", response_model=DistinguishResponse)
async def wl_distinguish(request: DistinguishRequest) -> DistinguishResponse:
    start = time.perf_counter()
    try:
        a, b = from_document(request.a), from_document(request.b)
        result = compare(get_test(request.test, settings.wl_max_entries), a, b)
    except (InputError, CapacityError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc

    latency_ms = (time.perf_counter() - start) * 1000
    store.save_run(
        command="api.wl",
        seed=None,
        out_dir="",
        exit_code=0,
        summary={"test": request.test.value, "separated": result.separated},
        latency_ms=latency_ms,
    )
    log_event(RunLogEvent.from_run("api.wl", 0, "", latency_ms), "gnnlab.api", "distinguish")
    return DistinguishResponse(
        test=request.test,
        separated=result.separated,
        rounds_a=result.rounds_a,
        rounds_b=result.rounds_b,
        signature_a=result.signature_a,
        signature_b=result.signature_b,
    )


@router.post("/qap/assign", response_model=AssignResponse)
async def qap_assign(request: AssignRequest) -> AssignResponse:
    try:
        pi = hungarian_lap(request.scores)
        objective = assignment_objective(request.scores, pi)
    except InputError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return AssignResponse(assignment=pi.tolist(), objective=objective)


@router.get("/health", response_model=HealthResponse)
async def health() -> HealthResponse:
    return HealthResponse(
        status="healthy",
        version=__version__,
        tests_available=[t.value for t in TestName],
    )


@router.get("/stats", response_model=StatsResponse)
async def stats() -> StatsResponse:
    data = store.get_stats()
    return StatsResponse(**data)
