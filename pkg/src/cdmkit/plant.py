"""Plant models: state-space ingestion, transfer-matrix extraction, perturbation.

Transfer matrices hold the open-loop characteristic polynomial delta(s) plus one
numerator polynomial per (output, input) pair, all ascending coefficients.  The
shipped hover plant of the small-scale helicopter case study (longitudinal-
vertical mode, outputs u, q, theta, w; inputs delta_lon, delta_col) is available
both as a built-in and as a reference JSON document.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

import numpy as np

from .errors import ModelFormatError, ToolkitError
from .polyalg import DEFAULT_PRUNE_TOL, Polynomial, prune_epsilon


def _frozen_array(values, name: str, ndim: int) -> np.ndarray:
    try:
        arr = np.array(values, dtype=float)
    except (ValueError, TypeError) as exc:
        raise ModelFormatError(f"{name}: {exc}") from None
    if arr.ndim != ndim:
        raise ModelFormatError(f"{name}: expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ModelFormatError(f"{name}: contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateSpaceModel:
    """x' = A x + B u, y = C x, with named states/inputs/outputs.

    params maps a scalar parameter name to its (matrix, row, col) location so
    robustness sweeps can perturb physically meaningful entries.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    state_names: tuple[str, ...]
    input_names: tuple[str, ...]
    output_names: tuple[str, ...]
    params: dict[str, tuple[str, int, int]] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        A = _frozen_array(self.A, "A", 2)
        B = _frozen_array(self.B, "B", 2)
        C = _frozen_array(self.C, "C", 2)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ModelFormatError(f"A: expected a square matrix, got {A.shape[0]}x{A.shape[1]}")
        if B.shape[0] != n:
            raise ModelFormatError(f"B: expected {n} rows, got {B.shape[0]}")
        if C.shape[1] != n:
            raise ModelFormatError(f"C: expected {n} columns, got {C.shape[1]}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "state_names", tuple(self.state_names))
        object.__setattr__(self, "input_names", tuple(self.input_names))
        object.__setattr__(self, "output_names", tuple(self.output_names))
        if len(self.state_names) != n:
            raise ModelFormatError(f"state_names: expected {n} entries, got {len(self.state_names)}")
        if len(self.input_names) != B.shape[1]:
            raise ModelFormatError(
                f"input_names: expected {B.shape[1]} entries, got {len(self.input_names)}"
            )
        if len(self.output_names) != C.shape[0]:
            raise ModelFormatError(
                f"output_names: expected {C.shape[0]} entries, got {len(self.output_names)}"
            )
        shapes = {"A": A.shape, "B": B.shape, "C": C.shape}
        for pname, loc in self.params.items():
            matrix_id, row, col = loc
            if matrix_id not in shapes:
                raise ModelFormatError(f"params.{pname}: unknown matrix {matrix_id!r}")
            rows, cols = shapes[matrix_id]
            if not (0 <= row < rows and 0 <= col < cols):
                raise ModelFormatError(
                    f"params.{pname}: ({row}, {col}) outside {matrix_id} ({rows}x{cols})"
                )

    @property
    def order(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class TransferMatrix:
    """Open-loop characteristic polynomial plus per-(output, input) numerators."""

    delta: Polynomial
    numerators: dict[tuple[str, str], Polynomial]
    input_names: tuple[str, ...]
    output_names: tuple[str, ...]
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_names", tuple(self.input_names))
        object.__setattr__(self, "output_names", tuple(self.output_names))
        nums = dict(self.numerators)
        for out in self.output_names:
            for inp in self.input_names:
                nums.setdefault((out, inp), Polynomial((0.0,)))
        for (out, inp), num in nums.items():
            if out not in self.output_names or inp not in self.input_names:
                raise ModelFormatError(f"numerators.{out}/{inp}: unknown output or input name")
            if not num.is_zero and num.degree >= self.delta.degree:
                raise ModelFormatError(
                    f"numerators.{out}/{inp}: degree {num.degree} >= delta degree "
                    f"{self.delta.degree} (plant must be strictly proper)"
                )
        object.__setattr__(self, "numerators", nums)

    def numerator(self, output: str, input: str) -> Polynomial:
        try:
            return self.numerators[(output, input)]
        except KeyError:
            raise ToolkitError(f"no numerator for output {output!r}, input {input!r}") from None


def faddeev_leverrier(A: np.ndarray) -> tuple[Polynomial, list[np.ndarray]]:
    """Characteristic polynomial of A and the adjugate coefficient matrices.

    Returns (char_poly, Ms) with adj(sI - A) = sum_k Ms[k] * s**(n-1-k); the
    recursion produces both in one O(n^4) pass.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ToolkitError(f"characteristic polynomial needs a square matrix, got shape {A.shape}")
    n = A.shape[0]
    eye = np.eye(n)
    coeffs_desc = [1.0]
    Ms: list[np.ndarray] = []
    Bk = eye
    for k in range(1, n + 1):
        if k > 1:
            Bk = A @ Ms[-1] + coeffs_desc[-1] * eye
        Ms.append(Bk)
        coeffs_desc.append(-np.trace(A @ Bk) / k)
    return Polynomial(tuple(reversed(coeffs_desc))), Ms


def char_poly(A: np.ndarray) -> Polynomial:
    """Monic characteristic polynomial det(sI - A), ascending coefficients."""
    poly, _ = faddeev_leverrier(A)
    return poly


def transfer_matrix(ss: StateSpaceModel, prune_tol: float = DEFAULT_PRUNE_TOL) -> TransferMatrix:
    """Per-pair numerators C_j adj(sI - A) B_k over the shared delta = det(sI - A)."""
    delta, Ms = faddeev_leverrier(ss.A)
    n = ss.order
    numerators: dict[tuple[str, str], Polynomial] = {}
    for j, out in enumerate(ss.output_names):
        row = ss.C[j]
        for k, inp in enumerate(ss.input_names):
            col = ss.B[:, k]
            coeffs = [0.0] * n
            for m, M in enumerate(Ms):
                coeffs[n - 1 - m] = float(row @ M @ col)
            numerators[(out, inp)] = prune_epsilon(Polynomial(tuple(coeffs)), prune_tol)
    return TransferMatrix(
        delta=delta,
        numerators=numerators,
        input_names=ss.input_names,
        output_names=ss.output_names,
        name=ss.name,
    )


# Hover-plant fixture, longitudinal-vertical mode.  All coefficients verbatim
# from the identified model; epsilon-sized terms are represented as exact zeros.
_HOVER_DELTA = (-24.11, -36.71, 55.56, 97.08, 22.4, 1.0)
_HOVER_NUM_U_LON = (3550.1, 5782.0, 43.0, 70.0)
_HOVER_NUM_Q_LON = (0.0, -7.98, -123.25, -179.56)
_HOVER_NUM_THETA_LON_VERBATIM = (-7.98, -123.25, 179.56)
_HOVER_NUM_THETA_LON_CORRECTED = (-7.98, -123.25, -179.56)
_HOVER_NUM_W_LON = (-38.29, 0.0, 1.07, 21.2)
_HOVER_NUM_W_COL = (1798.6, -191.0, -3833.4, -998.0, -45.8)

FIXTURE_NAME = "r50-hover-lonvert"
FIXTURE_NAME_VERBATIM = "r50-hover-lonvert-verbatim"


def fixture_r50_hover_lonvert(sign_corrected: bool = True) -> TransferMatrix:
    """Shipped helicopter hover plant (longitudinal-vertical mode).

    The published theta numerator carries +179.56 s^2 while the q numerator is
    -179.56 s^3 - ..., contradicting the kinematic identity theta = q/s.  With
    sign_corrected (the default) the theta numerator is replaced by the q
    numerator divided by s; sign_corrected=False returns the published
    coefficients verbatim.
    """
    theta = _HOVER_NUM_THETA_LON_CORRECTED if sign_corrected else _HOVER_NUM_THETA_LON_VERBATIM
    return TransferMatrix(
        delta=Polynomial(_HOVER_DELTA),
        numerators={
            ("u", "delta_lon"): Polynomial(_HOVER_NUM_U_LON),
            ("q", "delta_lon"): Polynomial(_HOVER_NUM_Q_LON),
            ("theta", "delta_lon"): Polynomial(theta),
            ("w", "delta_lon"): Polynomial(_HOVER_NUM_W_LON),
            ("w", "delta_col"): Polynomial(_HOVER_NUM_W_COL),
        },
        input_names=("delta_lon", "delta_col"),
        output_names=("u", "q", "theta", "w"),
        name=FIXTURE_NAME if sign_corrected else FIXTURE_NAME_VERBATIM,
    )


BUILTIN_MODELS = {
    FIXTURE_NAME: lambda: fixture_r50_hover_lonvert(sign_corrected=True),
    FIXTURE_NAME_VERBATIM: lambda: fixture_r50_hover_lonvert(sign_corrected=False),
}


def builtin_model(name: str):
    try:
        return BUILTIN_MODELS[name]()
    except KeyError:
        raise ToolkitError(
            f"unknown builtin model {name!r}; available: {', '.join(sorted(BUILTIN_MODELS))}"
        ) from None


def fixture_document() -> dict:
    """The reference JSON document shipped with the package (verbatim variant)."""
    with resources.files(__package__).joinpath("fixtures/r50_hover_lonvert.json").open() as fh:
        return json.load(fh)


def _require(document: Mapping, key: str, kind, path: str = ""):
    where = f"{path}.{key}" if path else key
    if key not in document:
        raise ModelFormatError(f"{where}: missing required field")
    value = document[key]
    if kind is not None and not isinstance(value, kind):
        raise ModelFormatError(f"{where}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _coeff_array(values, where: str) -> Polynomial:
    if not isinstance(values, list) or not all(isinstance(v, (int, float)) for v in values):
        raise ModelFormatError(f"{where}: expected an array of numbers (ascending powers)")
    try:
        return Polynomial(tuple(float(v) for v in values))
    except ValueError as exc:
        raise ModelFormatError(f"{where}: {exc}") from None


def load_model(document: Mapping | str | bytes) -> StateSpaceModel | TransferMatrix:
    """Validate and load a model document (parsed JSON mapping, or JSON text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"document is not valid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise ModelFormatError("document: expected a JSON object")

    form = _require(document, "form", str)
    name = document.get("name", "")
    if form == "state-space":
        params_doc = document.get("params", {})
        if not isinstance(params_doc, Mapping):
            raise ModelFormatError("params: expected an object")
        params = {}
        for pname, loc in params_doc.items():
            if (
                not isinstance(loc, list)
                or len(loc) != 3
                or not isinstance(loc[0], str)
                or not all(isinstance(x, int) for x in loc[1:])
            ):
                raise ModelFormatError(
                    f"params.{pname}: expected [matrix, row, col], got {loc!r}"
                )
            params[pname] = (loc[0], loc[1], loc[2])
        try:
            return StateSpaceModel(
                A=_require(document, "A", list),
                B=_require(document, "B", list),
                C=_require(document, "C", list),
                state_names=_require(document, "state_names", list),
                input_names=_require(document, "input_names", list),
                output_names=_require(document, "output_names", list),
                params=params,
                name=name,
            )
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None
    if form == "transfer-matrix":
        delta = _coeff_array(_require(document, "delta", list), "delta")
        input_names = tuple(_require(document, "input_names", list))
        output_names = tuple(_require(document, "output_names", list))
        numerators = {}
        for key, values in _require(document, "numerators", None).items():
            parts = key.split("/")
            if len(parts) != 2:
                raise ModelFormatError(
                    f"numerators.{key}: key must be '<output>/<input>'"
                )
            out, inp = parts
            if out not in output_names:
                raise ModelFormatError(f"numerators.{key}: unknown output {out!r}")
            if inp not in input_names:
                raise ModelFormatError(f"numerators.{key}: unknown input {inp!r}")
            numerators[(out, inp)] = _coeff_array(values, f"numerators.{key}")
        return TransferMatrix(
            delta=delta,
            numerators=numerators,
            input_names=input_names,
            output_names=output_names,
            name=name,
        )
    raise ModelFormatError(f"form: expected 'state-space' or 'transfer-matrix', got {form!r}")


def to_document(model: StateSpaceModel | TransferMatrix) -> dict:
    """Model as a JSON-serializable document (inverse of load_model)."""
    if isinstance(model, StateSpaceModel):
        return {
            "name": model.name,
            "form": "state-space",
            "A": model.A.tolist(),
            "B": model.B.tolist(),
            "C": model.C.tolist(),
            "state_names": list(model.state_names),
            "input_names": list(model.input_names),
            "output_names": list(model.output_names),
            "params": {k: [m, r, c] for k, (m, r, c) in model.params.items()},
        }
    return {
        "name": model.name,
        "form": "transfer-matrix",
        "delta": model.delta.to_list(),
        "numerators": {
            f"{out}/{inp}": model.numerators[(out, inp)].to_list()
            for out in model.output_names
            for inp in model.input_names
        },
        "input_names": list(model.input_names),
        "output_names": list(model.output_names),
    }


_COEFF_ADDRESS = re.compile(r"^(?P<curve>.+)\[(?P<index>\d+)\]$")


def _resolve_tm_address(model: TransferMatrix, address: str) -> tuple[tuple[str, str] | None, int]:
    m = _COEFF_ADDRESS.match(address)
    if not m:
        raise ToolkitError(
            f"unknown parameter {address!r}: transfer-matrix addresses look like "
            "'delta[2]' or 'u/delta_lon[0]'"
        )
    curve, index = m.group("curve"), int(m.group("index"))
    if curve == "delta":
        if index > model.delta.degree:
            raise ToolkitError(f"unknown parameter {address!r}: delta has degree {model.delta.degree}")
        return None, index
    parts = curve.split("/")
    if len(parts) != 2 or (parts[0], parts[1]) not in model.numerators:
        raise ToolkitError(f"unknown parameter {address!r}: no curve {curve!r}")
    num = model.numerators[(parts[0], parts[1])]
    if index > num.degree:
        raise ToolkitError(f"unknown parameter {address!r}: {curve} has degree {num.degree}")
    return (parts[0], parts[1]), index


def resolve_parameters(model: StateSpaceModel | TransferMatrix, names) -> None:
    """Raise if any perturbation parameter name does not resolve on the model."""
    for name in names:
        if isinstance(model, StateSpaceModel):
            if name not in model.params:
                raise ToolkitError(
                    f"unknown parameter {name!r}; model defines: {', '.join(sorted(model.params)) or '(none)'}"
                )
        else:
            _resolve_tm_address(model, name)


def perturb(
    model: StateSpaceModel | TransferMatrix, factors: Mapping[str, float]
) -> StateSpaceModel | TransferMatrix:
    """Multiply addressed scalars by their factors; everything else is untouched.

    State-space parameters are addressed through the model's params map;
    transfer-matrix coefficients through '<curve>[i]' addresses.
    """
    resolve_parameters(model, factors.keys())
    if isinstance(model, StateSpaceModel):
        matrices = {"A": model.A.copy(), "B": model.B.copy(), "C": model.C.copy()}
        for name, factor in factors.items():
            matrix_id, row, col = model.params[name]
            matrices[matrix_id][row, col] *= factor
        return StateSpaceModel(
            A=matrices["A"],
            B=matrices["B"],
            C=matrices["C"],
            state_names=model.state_names,
            input_names=model.input_names,
            output_names=model.output_names,
            params=model.params,
            name=model.name,
        )

    delta = list(model.delta.coeffs)
    numerators = {key: list(poly.coeffs) for key, poly in model.numerators.items()}
    for name, factor in factors.items():
        key, index = _resolve_tm_address(model, name)
        if key is None:
            delta[index] *= factor
        else:
            numerators[key][index] *= factor
    return TransferMatrix(
        delta=Polynomial(tuple(delta)),
        numerators={key: Polynomial(tuple(c)) for key, c in numerators.items()},
        input_names=model.input_names,
        output_names=model.output_names,
        name=model.name,
    )
