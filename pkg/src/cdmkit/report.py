"""JSON report builders shared by the CLI and the HTTP service.

Both front ends call these, so identical inputs produce identical analysis
documents.  NaN sentinels become JSON nulls.
"""

from __future__ import annotations

import math
from typing import Mapping

from . import cdmcore, polyalg, synth
from .errors import ToolkitError
from .plant import TransferMatrix
from .polyalg import Polynomial


def _num(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def profile_jsonable(prof: cdmcore.StabilityProfile) -> dict:
    return {
        "coeffs": list(prof.coeffs),
        "gammas": [_num(g) for g in prof.gammas],
        "gamma_stars": [_num(g) for g in prof.gamma_stars],
        "tau": _num(prof.tau),
        "taus": [_num(t) for t in prof.taus],
        "sign_uniform": prof.sign_uniform,
    }


def condition_jsonable(report: cdmcore.ConditionReport) -> dict:
    return {
        "kind": report.kind,
        "entries": [
            {
                "i": e.index,
                "lhs": _num(e.lhs),
                "rhs": _num(e.rhs),
                "satisfied": e.satisfied,
                "gamma_lhs": _num(e.gamma_lhs),
                "gamma_rhs": _num(e.gamma_rhs),
            }
            for e in report.entries
        ],
        "sufficiently_stable": report.sufficiently_stable,
        "sufficiently_unstable": report.sufficiently_unstable,
        "inconclusive": report.inconclusive,
        "note": report.note,
    }


def roots_jsonable(root_list: list[complex]) -> list[dict]:
    return [{"re": z.real, "im": z.imag} for z in root_list]


def analysis_report(
    p: Polynomial,
    curve_name: str = "polynomial",
    extra_curves: Mapping[str, Polynomial] | None = None,
) -> dict:
    """Profile, both condition checks, roots, and diagram data for one polynomial."""
    curves: dict[str, Polynomial] = {curve_name: p}
    if extra_curves:
        for name, poly in extra_curves.items():
            if name != curve_name:
                curves[name] = poly
    return {
        "curve": curve_name,
        "polynomial": p.to_list(),
        "profile": profile_jsonable(cdmcore.profile(p)),
        "stability_condition": condition_jsonable(cdmcore.check_stability_condition(p)),
        "instability_condition": condition_jsonable(cdmcore.check_instability_condition(p)),
        "roots": roots_jsonable(polyalg.roots(p)),
        "diagram": cdmcore.coefficient_diagram(curves).to_jsonable(),
    }


def model_curves(model: TransferMatrix) -> dict[str, Polynomial]:
    """Delta plus every nonzero numerator, keyed the way documents key them."""
    curves = {"delta": model.delta}
    for out in model.output_names:
        for inp in model.input_names:
            num = model.numerators[(out, inp)]
            if not num.is_zero:
                curves[f"{out}/{inp}"] = num
    return curves


def stability_verdict(p: Polynomial) -> dict:
    """Routh verdict on the sign-normalized polynomial, as a badge-friendly record."""
    normalized = -p if p.coeffs[-1] < 0 else p
    verdict = polyalg.routh_stable(normalized)
    if verdict.degenerate:
        label = "inconclusive"
    else:
        label = "stable" if verdict.stable else "unstable"
    return {
        "stable": verdict.stable,
        "degenerate": verdict.degenerate,
        "first_column": list(verdict.first_column),
        "label": label,
    }


def closed_loop_report(
    plant_model: TransferMatrix, ctrl: synth.ControllerSpec, gains: Mapping[str, float]
) -> dict:
    """Closed-loop polynomial with profile, roots, verdict, and DC gains per output."""
    cls = synth.closed_loop_tf(plant_model, ctrl, gains)
    p = cls.P

    def dc_map(paths: Mapping[str, synth.TransferFunction]) -> dict:
        out = {}
        for name, tf in paths.items():
            try:
                out[name] = _num(synth.dc_gain(tf))
            except ToolkitError:
                out[name] = None
        return out

    report = {
        "p": p.to_list(),
        "verdict": stability_verdict(p),
        "roots": roots_jsonable(polyalg.roots(p)),
        "dc_gains": {
            "tracking": dc_map(cls.tracking),
            "disturbance": dc_map(cls.disturbance),
        },
        "diagram": cdmcore.coefficient_diagram({"closed-loop": p}).to_jsonable(),
    }
    try:
        report["profile"] = profile_jsonable(cdmcore.profile(p))
    except ToolkitError:
        report["profile"] = None
    return report
