"""Parametric robustness sweeps: corner and randomized multiplicative perturbation.

Each run perturbs the plant, rebuilds the closed-loop polynomial, classifies
stability with the Routh test, simulates the scenario, and records metrics.
Factors come from a seeded generator, so identical plans reproduce
byte-identical reports.  Runs that fail outright (for example a perturbation
collapsing the plant order) are recorded as unstable/diverged rows rather than
aborting the sweep.
"""

from __future__ import annotations

import itertools
import json
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ToolkitError
from .plant import StateSpaceModel, TransferMatrix, perturb, resolve_parameters, transfer_matrix
from .polyalg import routh_stable
from .sim import Scenario, metrics, run_scenario
from .synth import ControllerSpec, closed_loop_poly, closed_loop_tf


def worker_count() -> int:
    env = os.environ.get("CDM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ToolkitError(f"CDM_WORKERS must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class SweepPlan:
    parameters: tuple[str, ...]
    fraction: float = 0.30
    samples: int = 100
    seed: int = 42
    include_corners: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if not self.parameters:
            raise ValueError("plan needs at least one parameter")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError("fraction must be in [0, 1]")
        if self.samples < 0:
            raise ValueError("samples must be >= 0")

    @property
    def total_runs(self) -> int:
        return self.samples + (2 ** len(self.parameters) if self.include_corners else 0)

    def to_jsonable(self) -> dict:
        return {
            "parameters": list(self.parameters),
            "fraction": self.fraction,
            "samples": self.samples,
            "seed": self.seed,
            "include_corners": self.include_corners,
        }


def plan_factors(plan: SweepPlan) -> list[dict[str, float]]:
    """Deterministic factor assignments: corner combinations first, then samples."""
    rows: list[tuple[float, ...]] = []
    lo, hi = 1.0 - plan.fraction, 1.0 + plan.fraction
    if plan.include_corners:
        rows.extend(itertools.product((lo, hi), repeat=len(plan.parameters)))
    if plan.samples:
        rng = np.random.default_rng(plan.seed)
        draws = rng.uniform(lo, hi, size=(plan.samples, len(plan.parameters)))
        rows.extend(tuple(row) for row in draws)
    return [dict(zip(plan.parameters, row)) for row in rows]


@dataclass(frozen=True)
class SweepRun:
    factors: dict[str, float]
    stable: bool
    diverged: bool
    settling_time_s: float | None
    steady_state_error: float | None
    error: str = ""


@dataclass(frozen=True)
class SweepReport:
    plan: SweepPlan
    runs: tuple[SweepRun, ...]

    def aggregate(self) -> dict:
        stable = sum(1 for r in self.runs if r.stable)
        settling = [r.settling_time_s for r in self.runs if r.settling_time_s is not None]
        return {
            "runs": len(self.runs),
            "fraction_stable": stable / len(self.runs) if self.runs else None,
            "settling_time_s": {
                "min": min(settling) if settling else None,
                "median": statistics.median(settling) if settling else None,
                "max": max(settling) if settling else None,
            },
        }

    def to_csv(self) -> str:
        lines = ["# plan " + json.dumps(self.plan.to_jsonable(), sort_keys=True)]
        header = [f"factor:{p}" for p in self.plan.parameters]
        header += ["stable", "settling_time_s", "steady_state_error", "diverged"]
        lines.append(",".join(header))
        for run in self.runs:
            cells = [repr(run.factors[p]) for p in self.plan.parameters]
            cells.append("true" if run.stable else "false")
            cells.append("" if run.settling_time_s is None else repr(run.settling_time_s))
            cells.append("" if run.steady_state_error is None else repr(run.steady_state_error))
            cells.append("true" if run.diverged else "false")
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_jsonable(self) -> dict:
        return {
            "plan": self.plan.to_jsonable(),
            "aggregate": self.aggregate(),
            "runs": [
                {
                    "factors": run.factors,
                    "stable": run.stable,
                    "diverged": run.diverged,
                    "settling_time_s": run.settling_time_s,
                    "steady_state_error": run.steady_state_error,
                    "error": run.error,
                }
                for run in self.runs
            ],
        }


def _classify_and_simulate(
    model: StateSpaceModel | TransferMatrix,
    ctrl: ControllerSpec,
    gains: Mapping[str, float],
    scenario: Scenario,
    factors: dict[str, float],
) -> SweepRun:
    try:
        perturbed = perturb(model, factors)
        tm = transfer_matrix(perturbed) if isinstance(perturbed, StateSpaceModel) else perturbed
        p = closed_loop_poly(tm, ctrl, gains)
        if p.coeffs[-1] < 0:
            p = -p
        verdict = routh_stable(p)
        result = run_scenario(closed_loop_tf(tm, ctrl, gains), scenario)
        run_metrics = metrics(result, result.tracked_channel, result.reference_final)
        return SweepRun(
            factors=factors,
            stable=verdict.stable,
            diverged=result.diverged,
            settling_time_s=run_metrics.settling_time_s,
            steady_state_error=run_metrics.steady_state_error,
        )
    except ToolkitError as exc:
        return SweepRun(
            factors=factors,
            stable=False,
            diverged=True,
            settling_time_s=None,
            steady_state_error=None,
            error=str(exc),
        )


def sweep(
    model: StateSpaceModel | TransferMatrix,
    ctrl: ControllerSpec,
    gains: Mapping[str, float],
    plan: SweepPlan,
    scenario: Scenario,
    workers: int | None = None,
) -> SweepReport:
    """Run the full plan; rows are assembled in plan order regardless of completion order."""
    resolve_parameters(model, plan.parameters)
    assignments = plan_factors(plan)
    if not assignments:
        return SweepReport(plan=plan, runs=())
    max_workers = workers if workers is not None else worker_count()
    if max_workers <= 1 or len(assignments) == 1:
        runs = [_classify_and_simulate(model, ctrl, gains, scenario, f) for f in assignments]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            runs = list(
                pool.map(
                    lambda f: _classify_and_simulate(model, ctrl, gains, scenario, f),
                    assignments,
                )
            )
    return SweepReport(plan=plan, runs=tuple(runs))
