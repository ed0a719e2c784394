"""Controller synthesis on the coefficient level.

A controller here drives one plant input from several measured outputs:

    A(s) u_act = F(s) r - sum_j B_j(s) y_j

Closing the loop over a transfer-matrix plant gives the characteristic
polynomial P(s) = A(s) delta(s) + sum_j B_j(s) N_j(s), where N_j is the
numerator from the actuated input to output j.  P is affine in the controller
gains, so matching a target polynomial is a linear (generally overdetermined)
solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ModelFormatError, ToolkitError
from .plant import TransferMatrix
from .polyalg import Polynomial

# A coefficient slot in a controller polynomial: a number fixes it, a string
# names an unknown gain.
GainEntry = float | int | str


@dataclass(frozen=True)
class TransferFunction:
    num: Polynomial
    den: Polynomial


def dc_gain(tf: TransferFunction) -> float:
    """num(0)/den(0), the final-value gain for step inputs."""
    d0 = tf.den(0.0)
    if d0 == 0.0:
        raise ToolkitError("pole at origin: DC gain undefined")
    return tf.num(0.0) / d0


def _entry_names(entries) -> list[str]:
    return [e for e in entries if isinstance(e, str)]


@dataclass(frozen=True)
class ControllerSpec:
    """Controller structure with fixed and named-unknown coefficient slots."""

    denominator: Polynomial
    reference_numerator: tuple[GainEntry, ...]
    feedback: dict[str, tuple[GainEntry, ...]]
    actuated_input: str

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "reference_numerator", tuple(self.reference_numerator)
        )
        object.__setattr__(
            self, "feedback", {k: tuple(v) for k, v in self.feedback.items()}
        )

    @property
    def gain_names(self) -> tuple[str, ...]:
        """Unknown gains in order of first appearance (reference, then feedback)."""
        seen: dict[str, None] = {}
        for name in _entry_names(self.reference_numerator):
            seen.setdefault(name)
        for entries in self.feedback.values():
            for name in _entry_names(entries):
                seen.setdefault(name)
        return tuple(seen)

    def bind(self, gains: Mapping[str, float]) -> "BoundController":
        def resolve(entries, where: str) -> Polynomial:
            coeffs = []
            for e in entries:
                if isinstance(e, str):
                    if e not in gains:
                        raise ToolkitError(f"{where}: gain {e!r} is not bound")
                    coeffs.append(float(gains[e]))
                else:
                    coeffs.append(float(e))
            return Polynomial(tuple(coeffs) or (0.0,))

        return BoundController(
            denominator=self.denominator,
            reference_numerator=resolve(self.reference_numerator, "reference_numerator"),
            feedback={
                out: resolve(entries, f"feedback.{out}")
                for out, entries in self.feedback.items()
            },
            actuated_input=self.actuated_input,
        )

    def properness(self) -> dict[str, bool]:
        """Per-polynomial properness (degree <= denominator degree); reported, not enforced."""
        deg_a = self.denominator.degree
        report = {"reference_numerator": len(self.reference_numerator) - 1 <= deg_a}
        for out, entries in self.feedback.items():
            report[f"feedback.{out}"] = len(entries) - 1 <= deg_a
        return report


@dataclass(frozen=True)
class BoundController:
    denominator: Polynomial
    reference_numerator: Polynomial
    feedback: dict[str, Polynomial]
    actuated_input: str


def load_controller(document: Mapping) -> tuple[ControllerSpec, dict[str, float]]:
    """Parse a controller document; returns the structure and any bundled gain values."""
    if not isinstance(document, Mapping):
        raise ModelFormatError("controller: expected a JSON object")

    def entries(values, where: str):
        if not isinstance(values, list):
            raise ModelFormatError(f"{where}: expected an array")
        out = []
        for v in values:
            if isinstance(v, str) or isinstance(v, (int, float)):
                out.append(v)
            else:
                raise ModelFormatError(f"{where}: entries must be numbers or gain names")
        return tuple(out)

    den_values = document.get("denominator")
    if not isinstance(den_values, list) or not all(
        isinstance(v, (int, float)) for v in den_values
    ):
        raise ModelFormatError("denominator: expected an array of numbers")
    feedback_doc = document.get("feedback")
    if not isinstance(feedback_doc, Mapping) or not feedback_doc:
        raise ModelFormatError("feedback: expected a non-empty object")
    spec = ControllerSpec(
        denominator=Polynomial(tuple(float(v) for v in den_values)),
        reference_numerator=entries(
            document.get("reference_numerator", []), "reference_numerator"
        ),
        feedback={
            out: entries(values, f"feedback.{out}") for out, values in feedback_doc.items()
        },
        actuated_input=document.get("actuated_input", ""),
    )
    if not spec.actuated_input:
        raise ModelFormatError("actuated_input: missing required field")
    gains_doc = document.get("gains", {})
    if not isinstance(gains_doc, Mapping):
        raise ModelFormatError("gains: expected an object")
    gains = {}
    for name, value in gains_doc.items():
        if not isinstance(value, (int, float)):
            raise ModelFormatError(f"gains.{name}: expected a number")
        gains[name] = float(value)
    return spec, gains


def controller_document(spec: ControllerSpec, gains: Mapping[str, float] | None = None) -> dict:
    doc = {
        "denominator": spec.denominator.to_list(),
        "reference_numerator": list(spec.reference_numerator),
        "feedback": {out: list(entries) for out, entries in spec.feedback.items()},
        "actuated_input": spec.actuated_input,
    }
    if gains is not None:
        doc["gains"] = dict(gains)
    return doc


# Certified hover design: integrator denominator, velocity/pitch/vertical
# feedback into the longitudinal cyclic.
R50_HOVER_GAINS = {
    "k0": 0.08412,
    "k1": -0.30369,
    "k2": -13.90378,
    "k3": -2.56712,
    "k4": 2.46190,
}

CONTROLLER_BUILTIN_NAME = "r50-hover-pid"


def r50_hover_controller() -> ControllerSpec:
    """PID-style hover controller: s*delta_lon = k0 r - [(k0+k1 s)u + (k2+k3 s)theta + k4 w]."""
    return ControllerSpec(
        denominator=Polynomial((0.0, 1.0)),
        reference_numerator=("k0",),
        feedback={
            "u": ("k0", "k1"),
            "theta": ("k2", "k3"),
            "w": ("k4",),
        },
        actuated_input="delta_lon",
    )


BUILTIN_CONTROLLERS = {
    CONTROLLER_BUILTIN_NAME: lambda: (r50_hover_controller(), dict(R50_HOVER_GAINS)),
}


def _check_structure(plant: TransferMatrix, ctrl: ControllerSpec) -> None:
    for out in ctrl.feedback:
        if out not in plant.output_names:
            raise ToolkitError(
                f"feedback output {out!r} not in plant outputs {list(plant.output_names)}"
            )
    if ctrl.actuated_input not in plant.input_names:
        raise ToolkitError(
            f"actuated input {ctrl.actuated_input!r} not in plant inputs {list(plant.input_names)}"
        )


def closed_loop_poly(
    plant: TransferMatrix, ctrl: ControllerSpec, gains: Mapping[str, float]
) -> Polynomial:
    """P(s) = A(s) delta(s) + sum_j B_j(s) N_j(s) with all gains bound."""
    _check_structure(plant, ctrl)
    bound = ctrl.bind(gains)
    p = bound.denominator * plant.delta
    for out, b_poly in bound.feedback.items():
        p = p + b_poly * plant.numerator(out, ctrl.actuated_input)
    return p


@dataclass(frozen=True)
class GainAssignment:
    """Solved gains with the per-coefficient mismatch against the (scaled) target."""

    values: dict[str, float]
    residuals: tuple[float, ...]
    achieved: Polynomial
    target: Polynomial


def solve_gains(
    plant: TransferMatrix, ctrl: ControllerSpec, target: Polynomial
) -> GainAssignment:
    """Least-squares gain solve matching the closed-loop polynomial to a target.

    The target is matched up to overall scale: its leading coefficient is
    normalized to the gain-independent leading coefficient of P before the
    per-coefficient linear system is assembled.  Exact solutions fall out of
    the least-squares solve when the system is square (or consistent) and of
    full column rank; otherwise residuals report the mismatch honestly.
    """
    names = ctrl.gain_names
    if not names:
        raise ToolkitError("controller has no unknown gains to solve for")
    _check_structure(plant, ctrl)

    zero = {name: 0.0 for name in names}
    p0 = closed_loop_poly(plant, ctrl, zero)
    columns = []
    for name in names:
        unit = dict(zero)
        unit[name] = 1.0
        columns.append(closed_loop_poly(plant, ctrl, unit) - p0)

    length = max([len(p0.coeffs)] + [len(c.coeffs) for c in columns])
    degree = length - 1
    if target.degree != degree:
        raise ToolkitError(
            f"target degree {target.degree} != achievable closed-loop degree {degree}"
        )

    def padded(poly: Polynomial) -> np.ndarray:
        arr = np.zeros(length)
        arr[: len(poly.coeffs)] = poly.coeffs
        return arr

    p0_vec = padded(p0)
    basis = np.column_stack([padded(c) for c in columns])

    gains_touch_leading = bool(np.any(basis[-1] != 0.0))
    if gains_touch_leading:
        target_vec = padded(target)
        rows = slice(0, length)
    else:
        # characteristic polynomials are defined up to scale; normalize the
        # leading coefficient out of the system
        target_vec = padded(target) * (p0_vec[-1] / target.coeffs[-1])
        rows = slice(0, length - 1)

    M = basis[rows]
    b = (target_vec - p0_vec)[rows]
    rank = int(np.linalg.matrix_rank(M))
    if rank < len(names):
        raise ToolkitError(
            f"rank-deficient gain system: rank {rank} for {len(names)} gains "
            f"(null space dimension {len(names) - rank})"
        )
    solution, *_ = np.linalg.lstsq(M, b, rcond=None)

    values = {name: float(v) for name, v in zip(names, solution)}
    achieved = closed_loop_poly(plant, ctrl, values)
    residuals = padded(achieved) - target_vec
    return GainAssignment(
        values=values,
        residuals=tuple(float(r) for r in residuals),
        achieved=achieved,
        target=Polynomial(tuple(target_vec)),
    )


@dataclass(frozen=True)
class ClosedLoopSystem:
    """All closed-loop paths over the shared characteristic polynomial P.

    tracking[j]    = N_j F / P      (reference -> output j)
    disturbance[j] = A N_j / P      (actuated-input disturbance -> output j)
    noise[j]       = -N_j B_j / P   (measurement noise on j -> output j)
    control_effort = delta F / P    (reference -> actuated input), with the
    disturbance-side effort path -sum_j B_j N_j / P kept alongside.
    """

    P: Polynomial
    tracking: dict[str, TransferFunction]
    disturbance: dict[str, TransferFunction]
    noise: dict[str, TransferFunction]
    control_effort: TransferFunction
    control_effort_disturbance: TransferFunction
    output_names: tuple[str, ...] = field(default=())


def closed_loop_tf(
    plant: TransferMatrix, ctrl: ControllerSpec, gains: Mapping[str, float]
) -> ClosedLoopSystem:
    _check_structure(plant, ctrl)
    bound = ctrl.bind(gains)
    P = closed_loop_poly(plant, ctrl, gains)
    F = bound.reference_numerator
    A = bound.denominator

    tracking = {}
    disturbance = {}
    noise = {}
    effort_dist_num = Polynomial((0.0,))
    for out in plant.output_names:
        n_j = plant.numerator(out, ctrl.actuated_input)
        tracking[out] = TransferFunction(n_j * F, P)
        disturbance[out] = TransferFunction(A * n_j, P)
        b_j = bound.feedback.get(out, Polynomial((0.0,)))
        noise[out] = TransferFunction(-(n_j * b_j), P)
        effort_dist_num = effort_dist_num + b_j * n_j

    return ClosedLoopSystem(
        P=P,
        tracking=tracking,
        disturbance=disturbance,
        noise=noise,
        control_effort=TransferFunction(plant.delta * F, P),
        control_effort_disturbance=TransferFunction(-effort_dist_num, P),
        output_names=plant.output_names,
    )
