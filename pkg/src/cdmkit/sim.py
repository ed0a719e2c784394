"""Time-domain simulation with exact zero-order-hold stepping.

Inputs are piecewise constant on the uniform grid, so propagating the state
with the matrix exponential of the augmented (A, B) block is exact between
samples; halving the step does not change grid values beyond rounding.
Divergence is data, not failure: runaway runs are flagged (and truncated once
values stop being finite) so robustness sweeps always complete.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import ToolkitError
from .plant import StateSpaceModel
from .synth import ClosedLoopSystem, TransferFunction

DIVERGENCE_LIMIT = 1e9

SIGNAL_KINDS = ("doublet", "step", "impulse", "zero")


@dataclass(frozen=True)
class SignalSpec:
    """Test signal: doublet, step, impulse (unit-area convention), or zero."""

    kind: str
    amplitude: float = 1.0
    t0: float = 0.0
    half_width: float = 5.0
    area: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in SIGNAL_KINDS:
            raise ValueError(f"kind must be one of {SIGNAL_KINDS}, got {self.kind!r}")
        if self.t0 < 0:
            raise ValueError("t0 must be >= 0")
        if self.kind == "doublet" and self.half_width <= 0:
            raise ValueError("half_width must be > 0 for a doublet")


def zero_signal() -> SignalSpec:
    return SignalSpec(kind="zero")


def generate(signal: SignalSpec, t: np.ndarray) -> np.ndarray:
    """Sample the signal on the grid t (uniform spacing assumed for impulses)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    if signal.kind == "zero":
        return out
    if signal.kind == "step":
        out[t >= signal.t0] = signal.amplitude
        return out
    if signal.kind == "doublet":
        up = (t >= signal.t0) & (t < signal.t0 + signal.half_width)
        down = (t >= signal.t0 + signal.half_width) & (t < signal.t0 + 2 * signal.half_width)
        out[up] = signal.amplitude
        out[down] = -signal.amplitude
        return out
    # impulse: one-sample pulse of height area/step at the grid point nearest t0
    if len(t) < 2:
        raise ValueError("impulse needs a grid with at least two points")
    step = t[1] - t[0]
    out[int(np.argmin(np.abs(t - signal.t0)))] = signal.area / step
    return out


@dataclass(frozen=True)
class ResponseMetrics:
    available: bool
    settling_time_s: float | None
    overshoot_fraction: float | None
    steady_state_error: float | None

    def to_jsonable(self) -> dict:
        return {
            "available": self.available,
            "settling_time_s": self.settling_time_s,
            "overshoot_fraction": self.overshoot_fraction,
            "steady_state_error": self.steady_state_error,
        }


METRICS_UNAVAILABLE = ResponseMetrics(False, None, None, None)


@dataclass
class SimulationResult:
    """Uniform time grid plus named channels; truncated early when divergent."""

    t: np.ndarray
    channels: dict[str, np.ndarray]
    step: float
    diverged: bool
    tracked_channel: str
    reference_final: float
    metrics: ResponseMetrics

    def to_csv(self) -> str:
        out = io.StringIO()
        names = list(self.channels)
        out.write("t," + ",".join(names) + "\n")
        columns = [self.channels[name] for name in names]
        for k in range(len(self.t)):
            out.write(repr(float(self.t[k])))
            for col in columns:
                out.write("," + repr(float(col[k])))
            out.write("\n")
        return out.getvalue()


def metrics(result: SimulationResult, channel: str, reference_final: float) -> ResponseMetrics:
    """Settling time (2% band), overshoot, and steady-state error for one channel.

    With reference_final = 0 the band floor is 2% of the channel's own peak and
    overshoot is undefined (None).  Divergent results yield unavailable metrics.
    """
    if channel not in result.channels:
        raise ToolkitError(f"no channel {channel!r}; have {list(result.channels)}")
    if result.diverged or len(result.t) == 0:
        return METRICS_UNAVAILABLE
    y = result.channels[channel]
    if reference_final != 0.0:
        band = 0.02 * abs(reference_final)
        overshoot = max(0.0, float(np.max(y / reference_final)) - 1.0)
    else:
        band = 0.02 * float(np.max(np.abs(y)))
        overshoot = None
    outside = np.abs(y - reference_final) > band
    settling = float(result.t[outside][-1]) if np.any(outside) else 0.0
    tail = y[-max(1, len(y) // 10):]
    return ResponseMetrics(
        available=True,
        settling_time_s=settling,
        overshoot_fraction=overshoot,
        steady_state_error=float(np.mean(tail)) - reference_final,
    )


def realize(tf: TransferFunction) -> StateSpaceModel:
    """Controllable canonical realization of a strictly proper transfer function."""
    den = tf.den
    num = tf.num
    if den.is_zero:
        raise ToolkitError("zero denominator")
    n = den.degree
    if not num.is_zero and num.degree >= n:
        raise ToolkitError(
            f"improper transfer function: numerator degree {num.degree} >= denominator degree {n}"
        )
    if n < 1:
        raise ToolkitError("denominator must have degree >= 1")
    lead = den.coeffs[-1]
    den_monic = np.asarray(den.coeffs, dtype=float) / lead
    num_scaled = np.asarray(num.coeffs, dtype=float) / lead

    A = np.zeros((n, n))
    if n > 1:
        A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = -den_monic[:-1]
    B = np.zeros((n, 1))
    B[-1, 0] = 1.0
    C = np.zeros((1, n))
    C[0, : len(num_scaled)] = num_scaled
    return StateSpaceModel(
        A=A,
        B=B,
        C=C,
        state_names=tuple(f"x{i}" for i in range(n)),
        input_names=("u",),
        output_names=("y",),
    )


def _companion(den_monic: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(den_monic) - 1
    A = np.zeros((n, n))
    if n > 1:
        A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = -den_monic[:-1]
    B = np.zeros((n, 1))
    B[-1, 0] = 1.0
    return A, B


def _discretize(A: np.ndarray, B: np.ndarray, step: float) -> tuple[np.ndarray, np.ndarray]:
    n, m = A.shape[0], B.shape[1]
    M = np.zeros((n + m, n + m))
    M[:n, :n] = A * step
    M[:n, n:] = B * step
    E = expm(M)
    return E[:n, :n], E[:n, n:]


def _step_lti(
    Ad: np.ndarray, Bd: np.ndarray, C: np.ndarray, U: np.ndarray, D: np.ndarray | None = None
) -> tuple[np.ndarray, bool, int]:
    """Run the discrete recursion; truncate at the first non-finite output."""
    samples = U.shape[1]
    Y = np.zeros((C.shape[0], samples))
    x = np.zeros(Ad.shape[0])
    length = samples
    diverged = False
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(samples):
            u = U[:, k]
            y = C @ x if D is None else C @ x + D @ u
            if not np.all(np.isfinite(y)):
                length = k
                diverged = True
                break
            Y[:, k] = y
            x = Ad @ x + Bd @ u
    if length and np.max(np.abs(Y[:, :length])) > DIVERGENCE_LIMIT:
        diverged = True
    return Y[:, :length], diverged, length


def _validate_grid(horizon: float, step: float) -> np.ndarray:
    if step <= 0:
        raise ToolkitError("step must be > 0")
    if horizon < 10 * step:
        raise ToolkitError("horizon must be at least 10 steps long")
    samples = int(round(horizon / step))
    return np.arange(samples + 1) * step


def simulate(
    system: ClosedLoopSystem | StateSpaceModel | TransferFunction,
    reference: SignalSpec,
    disturbance: SignalSpec,
    horizon: float,
    step: float,
    tracked_output: str | None = None,
    input_name: str | None = None,
) -> SimulationResult:
    """Simulate the system driven by the reference and disturbance signals.

    Closed-loop systems route the reference through the tracking paths and the
    disturbance through the actuated-input disturbance paths.  State-space
    models and plain transfer functions are driven by reference + disturbance
    summed on one input (input_name, default the first).
    """
    t = _validate_grid(horizon, step)
    r = generate(reference, t)
    d = generate(disturbance, t)

    if isinstance(system, TransferFunction):
        system = realize(system)

    if isinstance(system, StateSpaceModel):
        names = system.output_names
        if input_name is None:
            idx = 0
        elif input_name in system.input_names:
            idx = system.input_names.index(input_name)
        else:
            raise ToolkitError(f"no input {input_name!r}; have {list(system.input_names)}")
        Ad, Bd = _discretize(system.A, system.B[:, idx : idx + 1], step)
        U = (r + d)[np.newaxis, :]
        Y, diverged, length = _step_lti(Ad, Bd, system.C, U)
        channels = {name: Y[j] for j, name in enumerate(names)}
        channels["effort"] = (r + d)[:length]
    else:
        names = system.output_names
        lead = system.P.coeffs[-1]
        den_monic = np.asarray(system.P.coeffs, dtype=float) / lead
        n = len(den_monic) - 1

        def c_row(num) -> tuple[np.ndarray, float]:
            # equal-degree paths (e.g. the effort path with a constant A(s))
            # split into a feedthrough term plus a strictly proper remainder
            coeffs = np.asarray(num.coeffs, dtype=float) / lead
            if len(coeffs) > n + 1:
                raise ToolkitError("closed-loop path is improper")
            if len(coeffs) == n + 1:
                feedthrough = coeffs[-1]
                return coeffs[:-1] - feedthrough * den_monic[:-1], feedthrough
            row = np.zeros(n)
            row[: len(coeffs)] = coeffs
            return row, 0.0

        A1, B1 = _companion(den_monic)
        # two companion blocks sharing P: one driven by r, one by d
        A = np.block([[A1, np.zeros((n, n))], [np.zeros((n, n)), A1]])
        B = np.zeros((2 * n, 2))
        B[:n, 0:1] = B1
        B[n:, 1:2] = B1
        rows = []
        feedthroughs = []
        paths = [(system.tracking[out].num, system.disturbance[out].num) for out in names]
        paths.append((system.control_effort.num, system.control_effort_disturbance.num))
        for ref_num, dist_num in paths:
            row_r, d_r = c_row(ref_num)
            row_d, d_d = c_row(dist_num)
            rows.append(np.concatenate([row_r, row_d]))
            feedthroughs.append([d_r, d_d])
        C = np.vstack(rows)
        D = np.asarray(feedthroughs)
        Ad, Bd = _discretize(A, B, step)
        U = np.vstack([r, d])
        Y, diverged, length = _step_lti(Ad, Bd, C, U, D)
        channels = {name: Y[j] for j, name in enumerate(names)}
        channels["effort"] = Y[len(names)]

    channels["reference"] = r[:length]
    channels["disturbance"] = d[:length]
    tracked = tracked_output if tracked_output is not None else names[0]
    if tracked not in channels:
        raise ToolkitError(f"no channel {tracked!r}; have {list(channels)}")
    result = SimulationResult(
        t=t[:length],
        channels=channels,
        step=step,
        diverged=diverged,
        tracked_channel=tracked,
        reference_final=float(r[-1]),
        metrics=METRICS_UNAVAILABLE,
    )
    result.metrics = metrics(result, tracked, result.reference_final)
    return result


@dataclass(frozen=True)
class Scenario:
    """A reference/disturbance pair plus grid settings, for simulate and sweeps."""

    reference: SignalSpec
    disturbance: SignalSpec
    horizon: float = 50.0
    step: float = 1e-3
    tracked_output: str | None = None


def default_scenario() -> Scenario:
    """Doublet reference at t0 = 1 s (half-width 5 s) and a unit-area impulse
    disturbance at t = 35 s over a 50 s horizon at 1 ms."""
    return Scenario(
        reference=SignalSpec(kind="doublet", amplitude=1.0, t0=1.0, half_width=5.0),
        disturbance=SignalSpec(kind="impulse", area=1.0, t0=35.0),
        horizon=50.0,
        step=1e-3,
    )


def run_scenario(
    system: ClosedLoopSystem | StateSpaceModel | TransferFunction, scenario: Scenario
) -> SimulationResult:
    return simulate(
        system,
        scenario.reference,
        scenario.disturbance,
        scenario.horizon,
        scenario.step,
        tracked_output=scenario.tracked_output,
    )
