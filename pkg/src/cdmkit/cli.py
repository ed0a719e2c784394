"""Command-line front door: analyze, tf, synth, simulate, sweep, serve.

Exit statuses: 0 success, 1 computation error, 2 usage/validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cdmcore, report, robust, sim, synth
from .errors import ModelFormatError, ToolkitError
from .plant import (
    BUILTIN_MODELS,
    StateSpaceModel,
    TransferMatrix,
    load_model,
    to_document,
    transfer_matrix,
)
from .polyalg import Polynomial


def _read_json(path: str, what: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ModelFormatError(f"{what} file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON: {exc}") from None


def _resolve_model(args) -> StateSpaceModel | TransferMatrix:
    if getattr(args, "fixture", None):
        if args.fixture not in BUILTIN_MODELS:
            raise ModelFormatError(
                f"unknown fixture {args.fixture!r}; available: {', '.join(sorted(BUILTIN_MODELS))}"
            )
        return BUILTIN_MODELS[args.fixture]()
    if getattr(args, "model", None):
        return load_model(_read_json(args.model, "model"))
    raise ModelFormatError("no model given: use --fixture or --model")


def _resolve_transfer_matrix(args) -> TransferMatrix:
    model = _resolve_model(args)
    return transfer_matrix(model) if isinstance(model, StateSpaceModel) else model


def _resolve_controller(args) -> tuple[synth.ControllerSpec, dict[str, float]]:
    ref = args.controller
    if ref in synth.BUILTIN_CONTROLLERS:
        return synth.BUILTIN_CONTROLLERS[ref]()
    return synth.load_controller(_read_json(ref, "controller"))


def _parse_poly(text: str, what: str) -> Polynomial:
    try:
        values = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{what}: not valid JSON: {exc}") from None
    if not isinstance(values, list) or not all(isinstance(v, (int, float)) for v in values):
        raise ModelFormatError(f"{what}: expected a JSON array of numbers (ascending powers)")
    return Polynomial(tuple(float(v) for v in values))


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _scenario_from_args(args) -> sim.Scenario:
    reference = sim.SignalSpec(
        kind=args.ref_kind,
        amplitude=args.ref_amplitude,
        t0=args.ref_t0,
        half_width=args.ref_half_width,
    )
    if args.dist_kind == "zero":
        disturbance = sim.zero_signal()
    else:
        disturbance = sim.SignalSpec(
            kind=args.dist_kind,
            amplitude=args.dist_amplitude,
            t0=args.dist_t0,
            half_width=args.ref_half_width,
            area=args.dist_area,
        )
    return sim.Scenario(
        reference=reference,
        disturbance=disturbance,
        horizon=args.horizon,
        step=args.step,
        tracked_output=args.tracked,
    )


def _add_model_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fixture", help="builtin model name (see 'cdmkit analyze --list-fixtures')")
    parser.add_argument("--model", help="path to a model JSON document")


def _add_scenario_args(parser: argparse.ArgumentParser, step_default: float) -> None:
    parser.add_argument("--ref-kind", default="doublet", choices=sim.SIGNAL_KINDS)
    parser.add_argument("--ref-amplitude", type=float, default=1.0)
    parser.add_argument("--ref-t0", type=float, default=1.0)
    parser.add_argument("--ref-half-width", type=float, default=5.0)
    parser.add_argument("--dist-kind", default="impulse", choices=sim.SIGNAL_KINDS)
    parser.add_argument("--dist-amplitude", type=float, default=1.0)
    parser.add_argument("--dist-t0", type=float, default=35.0)
    parser.add_argument("--dist-area", type=float, default=1.0)
    parser.add_argument("--horizon", type=float, default=50.0)
    parser.add_argument("--step", type=float, default=step_default)
    parser.add_argument("--tracked", default=None, help="channel used for metrics (default: first output)")


def cmd_analyze(args) -> int:
    if args.list_fixtures:
        _write_text(args.out, _dump({"fixtures": sorted(BUILTIN_MODELS)}))
        return 0
    if args.fixture or args.model:
        model = _resolve_transfer_matrix(args)
        curves = report.model_curves(model)
        curve_name = args.poly or "delta"
        if curve_name not in curves:
            raise ModelFormatError(
                f"no curve {curve_name!r} in model; available: {', '.join(curves)}"
            )
        doc = report.analysis_report(curves[curve_name], curve_name, extra_curves=curves)
    else:
        if not args.poly:
            raise ModelFormatError("no input: give --poly '[a0,a1,...]' or --fixture/--model")
        poly = _parse_poly(args.poly, "--poly")
        curves = {"polynomial": poly}
        doc = report.analysis_report(poly)
    _write_text(args.out, _dump(doc))
    if args.csv:
        _write_text(args.csv, cdmcore.coefficient_diagram(curves).to_csv())
    return 0


def cmd_tf(args) -> int:
    model = _resolve_model(args)
    tm = transfer_matrix(model) if isinstance(model, StateSpaceModel) else model
    _write_text(args.out, _dump(to_document(tm)))
    return 0


def cmd_synth(args) -> int:
    plant_model = _resolve_transfer_matrix(args)
    ctrl, _ = _resolve_controller(args)
    degree = ctrl.denominator.degree + plant_model.delta.degree
    if args.target:
        target = _parse_poly(args.target, "--target")
    elif args.tau is not None:
        if args.gammas:
            gammas = json.loads(args.gammas)
            if not isinstance(gammas, list):
                raise ModelFormatError("--gammas: expected a JSON array")
        else:
            gammas = cdmcore.standard_gammas(degree - 1)
        target = cdmcore.target_polynomial(args.a0, args.tau, gammas)
    else:
        raise ModelFormatError("no target: give --target '[...]' or --tau (with optional --gammas)")

    assignment = synth.solve_gains(plant_model, ctrl, target)
    table = ["coefficient residuals (achieved - target):"]
    for i, r in enumerate(assignment.residuals):
        table.append(f"  s^{i}: {r: .6e}")
    print("\n".join(table), file=sys.stderr)
    _write_text(
        args.out,
        _dump(
            {
                "gains": assignment.values,
                "residuals": list(assignment.residuals),
                "achieved": assignment.achieved.to_list(),
                "target": assignment.target.to_list(),
            }
        ),
    )
    return 0


def cmd_simulate(args) -> int:
    plant_model = _resolve_transfer_matrix(args)
    scenario = _scenario_from_args(args)
    if args.controller:
        ctrl, gains = _resolve_controller(args)
        if args.gains:
            gains = {**gains, **json.loads(args.gains)}
        system = synth.closed_loop_tf(plant_model, ctrl, gains)
    else:
        pair = args.open_loop_pair or f"{plant_model.output_names[0]}/{plant_model.input_names[0]}"
        parts = pair.split("/")
        if len(parts) != 2:
            raise ModelFormatError("--open-loop-pair must look like 'u/delta_lon'")
        system = synth.TransferFunction(
            plant_model.numerator(parts[0], parts[1]), plant_model.delta
        )
    result = sim.run_scenario(system, scenario)
    _write_text(args.out_csv, result.to_csv())
    metrics_doc = {
        "channel": result.tracked_channel,
        "diverged": result.diverged,
        "metrics": result.metrics.to_jsonable(),
        "reference_final": result.reference_final,
    }
    if args.out_metrics:
        _write_text(args.out_metrics, _dump(metrics_doc))
    else:
        print(_dump(metrics_doc), file=sys.stderr, end="")
    return 0


def cmd_sweep(args) -> int:
    model = _resolve_model(args)
    ctrl, gains = _resolve_controller(args)
    if args.gains:
        gains = {**gains, **json.loads(args.gains)}
    if args.plan:
        plan_doc = _read_json(args.plan, "plan")
        try:
            plan = robust.SweepPlan(
                parameters=tuple(plan_doc["parameters"]),
                fraction=plan_doc.get("fraction", 0.30),
                samples=plan_doc.get("samples", 100),
                seed=plan_doc.get("seed", 42),
                include_corners=plan_doc.get("include_corners", True),
            )
        except (KeyError, ValueError) as exc:
            raise ModelFormatError(f"plan: {exc}") from None
    else:
        if not args.parameters:
            raise ModelFormatError("no plan: give --parameters 'name,name,...' or --plan FILE")
        try:
            plan = robust.SweepPlan(
                parameters=tuple(p.strip() for p in args.parameters.split(",") if p.strip()),
                fraction=args.fraction,
                samples=args.samples,
                seed=args.seed,
                include_corners=not args.no_corners,
            )
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None
    scenario = _scenario_from_args(args)
    rep = robust.sweep(model, ctrl, gains, plan, scenario, workers=args.workers)
    _write_text(args.out_csv, rep.to_csv())
    _write_text(args.out_json, _dump({"plan": plan.to_jsonable(), "aggregate": rep.aggregate()}))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdmkit",
        description="Coefficient-diagram-method controller synthesis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="stability indices, condition checks, roots, diagram")
    _add_model_args(p)
    p.add_argument("--poly", help="JSON coefficient array, or a curve name when a model is given")
    p.add_argument("--out", default=None, help="write the JSON report here (default stdout)")
    p.add_argument("--csv", default=None, help="also write the diagram as CSV here")
    p.add_argument("--list-fixtures", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("tf", help="extract a transfer-matrix document from a model")
    _add_model_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tf)

    p = sub.add_parser("synth", help="solve controller gains against a target polynomial")
    _add_model_args(p)
    p.add_argument("--controller", required=True, help="controller JSON path or builtin name")
    p.add_argument("--target", help="target polynomial as a JSON array")
    p.add_argument("--tau", type=float, help="equivalent time constant of the target")
    p.add_argument("--gammas", help="stability indices as a JSON array (default standard form)")
    p.add_argument("--a0", type=float, default=1.0, help="target constant coefficient (scale only)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="closed-loop (or open-loop) time response")
    _add_model_args(p)
    p.add_argument("--controller", help="controller JSON path or builtin name (omit for open loop)")
    p.add_argument("--gains", help="JSON object overriding controller gains")
    p.add_argument("--open-loop-pair", help="output/input pair for open-loop runs")
    _add_scenario_args(p, step_default=1e-3)
    p.add_argument("--out-csv", default=None, help="time series CSV (default stdout)")
    p.add_argument("--out-metrics", default=None, help="metrics JSON sidecar (default stderr)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="parametric robustness sweep")
    _add_model_args(p)
    p.add_argument("--controller", required=True)
    p.add_argument("--gains", help="JSON object overriding controller gains")
    p.add_argument("--plan", help="sweep plan JSON file")
    p.add_argument("--parameters", help="comma-separated parameter names/addresses")
    p.add_argument("--fraction", type=float, default=0.30)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--no-corners", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    _add_scenario_args(p, step_default=1e-2)
    p.add_argument("--out-csv", default=None)
    p.add_argument("--out-json", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="stateless JSON service (backs the tuner UI)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", default=None, help="static frontend directory to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
