"""Stateless JSON-over-HTTP service backing the tuner UI.

Every endpoint is a pure function of its request body: no sessions, no jobs.
Malformed bodies return 400 with the offending field path; computation errors
return 422 with the underlying message.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import report, sim, synth
from .errors import ToolkitError
from .plant import BUILTIN_MODELS, StateSpaceModel, TransferMatrix, load_model, transfer_matrix
from .polyalg import Polynomial

MAX_SERIES_POINTS = 2000


class AnalyzeRequest(BaseModel):
    polynomial: list[float] = Field(min_length=1)


class ClosedLoopRequest(BaseModel):
    model_ref: str | None = None
    model_document: dict[str, Any] | None = None
    controller: dict[str, Any]
    gains: dict[str, float] = Field(default_factory=dict)


class SignalModel(BaseModel):
    kind: str = "zero"
    amplitude: float = 1.0
    t0: float = 0.0
    half_width: float = 5.0
    area: float = 1.0


class SimulateRequest(ClosedLoopRequest):
    reference: SignalModel = Field(default_factory=lambda: SignalModel(kind="doublet", t0=1.0))
    disturbance: SignalModel = Field(default_factory=lambda: SignalModel(kind="impulse", t0=35.0))
    horizon: float = 50.0
    step: float = 1e-3
    max_points: int = MAX_SERIES_POINTS


class SolveRequest(BaseModel):
    model_ref: str | None = None
    model_document: dict[str, Any] | None = None
    controller: dict[str, Any]
    target: list[float] | None = None
    tau: float | None = None
    gammas: list[float] | None = None
    a0: float = 1.0


def _resolve_plant(req: ClosedLoopRequest) -> TransferMatrix:
    if req.model_ref is not None:
        if req.model_ref not in BUILTIN_MODELS:
            raise ToolkitError(
                f"unknown model_ref {req.model_ref!r}; available: {', '.join(sorted(BUILTIN_MODELS))}"
            )
        return BUILTIN_MODELS[req.model_ref]()
    if req.model_document is not None:
        model = load_model(req.model_document)
        return transfer_matrix(model) if isinstance(model, StateSpaceModel) else model
    raise ToolkitError("request needs model_ref or model_document")


def _signal(model: SignalModel) -> sim.SignalSpec:
    try:
        return sim.SignalSpec(
            kind=model.kind,
            amplitude=model.amplitude,
            t0=model.t0,
            half_width=model.half_width,
            area=model.area,
        )
    except ValueError as exc:
        raise ToolkitError(str(exc)) from None


def _downsample(values, stride: int) -> list[float]:
    return [float(v) for v in values[::stride]]


def create_app(ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="cdmkit", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_: Request, exc: RequestValidationError) -> JSONResponse:
        details = [
            {"field": ".".join(str(part) for part in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": details})

    @app.exception_handler(ToolkitError)
    async def computation_error(_: Request, exc: ToolkitError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/api/fixtures")
    def fixtures() -> dict:
        entries = []
        for name in sorted(BUILTIN_MODELS):
            model = BUILTIN_MODELS[name]()
            entries.append(
                {
                    "name": name,
                    "form": "transfer-matrix",
                    "input_names": list(model.input_names),
                    "output_names": list(model.output_names),
                    "delta": model.delta.to_list(),
                }
            )
        return {"fixtures": entries}

    @app.post("/api/analyze")
    def analyze(req: AnalyzeRequest) -> dict:
        try:
            poly = Polynomial(tuple(req.polynomial))
        except ValueError as exc:
            raise ToolkitError(str(exc)) from None
        return report.analysis_report(poly)

    def _controller(req: ClosedLoopRequest):
        spec, bundled = synth.load_controller(req.controller)
        gains = {**bundled, **req.gains}
        return spec, gains

    @app.post("/api/closed-loop")
    def closed_loop(req: ClosedLoopRequest) -> dict:
        plant_model = _resolve_plant(req)
        spec, gains = _controller(req)
        doc = report.closed_loop_report(plant_model, spec, gains)
        doc["gains"] = gains
        return doc

    @app.post("/api/solve")
    def solve(req: SolveRequest) -> dict:
        plant_model = _resolve_plant(ClosedLoopRequest(
            model_ref=req.model_ref,
            model_document=req.model_document,
            controller=req.controller,
        ))
        spec, _ = synth.load_controller(req.controller)
        if req.target is not None:
            try:
                target = Polynomial(tuple(req.target))
            except ValueError as exc:
                raise ToolkitError(str(exc)) from None
        elif req.tau is not None:
            from . import cdmcore

            degree = spec.denominator.degree + plant_model.delta.degree
            gammas = req.gammas if req.gammas else cdmcore.standard_gammas(degree - 1)
            target = cdmcore.target_polynomial(req.a0, req.tau, gammas)
        else:
            raise ToolkitError("request needs target or tau (with optional gammas)")
        assignment = synth.solve_gains(plant_model, spec, target)
        return {
            "gains": assignment.values,
            "residuals": list(assignment.residuals),
            "achieved": assignment.achieved.to_list(),
            "target": assignment.target.to_list(),
        }

    @app.post("/api/simulate")
    def simulate_endpoint(req: SimulateRequest) -> dict:
        plant_model = _resolve_plant(req)
        spec, gains = _controller(req)
        system = synth.closed_loop_tf(plant_model, spec, gains)
        result = sim.simulate(
            system,
            _signal(req.reference),
            _signal(req.disturbance),
            horizon=req.horizon,
            step=req.step,
        )
        max_points = max(2, min(req.max_points, MAX_SERIES_POINTS))
        stride = max(1, -(-len(result.t) // max_points))
        return {
            "t": _downsample(result.t, stride),
            "channels": {
                name: _downsample(series, stride) for name, series in result.channels.items()
            },
            "step": result.step,
            "stride": stride,
            "diverged": result.diverged,
            "tracked_channel": result.tracked_channel,
            "metrics": result.metrics.to_jsonable(),
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
