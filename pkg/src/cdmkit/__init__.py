"""Coefficient-diagram-method controller synthesis toolkit.

Polynomial-level controller design for linear multivariable plants: stability
indices and condition checks, Diophantine gain solving, exact zero-order-hold
simulation, and parametric robustness sweeps, with a small-scale-helicopter
hover plant shipped as the reproducible case study.
"""

from .cdmcore import (
    ConditionReport,
    DiagramDataset,
    StabilityProfile,
    check_instability_condition,
    check_stability_condition,
    coefficient_diagram,
    profile,
    standard_gammas,
    target_polynomial,
)
from .errors import ModelFormatError, ToolkitError
from .plant import (
    StateSpaceModel,
    TransferMatrix,
    char_poly,
    fixture_r50_hover_lonvert,
    load_model,
    perturb,
    transfer_matrix,
)
from .polyalg import Polynomial, RouthVerdict, prune_epsilon, roots, routh_stable
from .robust import SweepPlan, SweepReport, sweep
from .sim import Scenario, SignalSpec, SimulationResult, generate, metrics, realize, simulate
from .synth import (
    ClosedLoopSystem,
    ControllerSpec,
    GainAssignment,
    TransferFunction,
    closed_loop_poly,
    closed_loop_tf,
    dc_gain,
    solve_gains,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedLoopSystem",
    "ConditionReport",
    "ControllerSpec",
    "DiagramDataset",
    "GainAssignment",
    "ModelFormatError",
    "Polynomial",
    "RouthVerdict",
    "Scenario",
    "SignalSpec",
    "SimulationResult",
    "StabilityProfile",
    "StateSpaceModel",
    "SweepPlan",
    "SweepReport",
    "ToolkitError",
    "TransferFunction",
    "TransferMatrix",
    "char_poly",
    "check_instability_condition",
    "check_stability_condition",
    "closed_loop_poly",
    "closed_loop_tf",
    "coefficient_diagram",
    "dc_gain",
    "fixture_r50_hover_lonvert",
    "generate",
    "load_model",
    "metrics",
    "perturb",
    "profile",
    "prune_epsilon",
    "realize",
    "roots",
    "routh_stable",
    "simulate",
    "solve_gains",
    "standard_gammas",
    "sweep",
    "target_polynomial",
    "transfer_matrix",
]
