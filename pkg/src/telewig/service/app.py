"""HTTP front end: one POST endpoint per command, sharing the report engine."""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import reports
from .models import RunConfig, TableResponse, VerifyResponse

app = FastAPI(title="telewig", version="0.1.0")


@app.exception_handler(reports.UsageError)
async def usage_error_handler(request: Request, exc: reports.UsageError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health")
async def health():
    return {"status": "ok"}


def _table_endpoint(command: str):
    async def endpoint(config: RunConfig) -> TableResponse:
        return reports.run_table(config.model_copy(update={"command": command}))

    endpoint.__name__ = command
    return endpoint


for _cmd in ("sweep", "threshold", "conditional", "noisy"):
    app.post(f"/{_cmd}", response_model=TableResponse)(_table_endpoint(_cmd))


@app.post("/verify", response_model=VerifyResponse)
async def verify(config: RunConfig) -> VerifyResponse:
    return reports.run_verify(config.model_copy(update={"command": "verify"}))
