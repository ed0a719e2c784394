import pytest

from cdmkit.errors import ToolkitError
from cdmkit.plant import TransferMatrix
from cdmkit.polyalg import Polynomial
from cdmkit.robust import SweepPlan, plan_factors, sweep
from cdmkit.sim import Scenario, SignalSpec, zero_signal
from cdmkit.synth import ControllerSpec


def _first_order_plant(a: float = 1.0) -> TransferMatrix:
    """y = 1/(s - a) u: closed loop with unit feedback gain 2 is stable iff a < 2."""
    return TransferMatrix(
        delta=Polynomial((-a, 1.0)),
        numerators={("y", "u"): Polynomial((1.0,))},
        input_names=("u",),
        output_names=("y",),
    )


_GAIN_TWO = ControllerSpec(
    denominator=Polynomial((1.0,)),
    reference_numerator=(2.0,),
    feedback={"y": (2.0,)},
    actuated_input="u",
)

_FAST_SCENARIO = Scenario(
    reference=SignalSpec(kind="step", amplitude=1.0, t0=0.0),
    disturbance=zero_signal(),
    horizon=10.0,
    step=0.01,
)


def test_plan_validation():
    with pytest.raises(ValueError, match="fraction"):
        SweepPlan(parameters=("a",), fraction=1.5)
    with pytest.raises(ValueError, match="samples"):
        SweepPlan(parameters=("a",), samples=-1)
    with pytest.raises(ValueError, match="parameter"):
        SweepPlan(parameters=())


def test_plan_total_runs():
    plan = SweepPlan(parameters=("a", "b"), samples=10, include_corners=True)
    assert plan.total_runs == 14
    assert len(plan_factors(plan)) == 14


def test_plan_factors_deterministic():
    plan = SweepPlan(parameters=("a", "b"), fraction=0.3, samples=25, seed=7)
    assert plan_factors(plan) == plan_factors(plan)
    shifted = SweepPlan(parameters=("a", "b"), fraction=0.3, samples=25, seed=8)
    assert plan_factors(plan) != plan_factors(shifted)


def test_plan_factors_range():
    plan = SweepPlan(parameters=("a",), fraction=0.3, samples=200, seed=1, include_corners=False)
    values = [row["a"] for row in plan_factors(plan)]
    assert min(values) >= 0.7
    assert max(values) <= 1.3


def test_zero_fraction_sweep_is_nominal(hover_plant, hover_controller, hover_gains):
    plan = SweepPlan(parameters=("delta[2]",), fraction=0.0, samples=3, seed=1)
    scenario = Scenario(
        reference=SignalSpec(kind="step", amplitude=1.0, t0=0.0),
        disturbance=zero_signal(),
        horizon=5.0,
        step=0.01,
    )
    report = sweep(hover_plant, hover_controller, hover_gains, plan, scenario)
    assert len(report.runs) == 5  # 2 corners + 3 samples, all at factor 1.0
    assert all(run.factors["delta[2]"] == 1.0 for run in report.runs)
    assert all(run.stable for run in report.runs)
    assert report.aggregate()["fraction_stable"] == 1.0
    first = report.runs[0]
    for run in report.runs[1:]:
        assert run == first


def test_analytic_boundary_classification():
    # a = factor * 1 swept over [0, 2]; closed form: stable iff a < 2
    plan = SweepPlan(parameters=("delta[0]",), fraction=1.0, samples=50, seed=3)
    report = sweep(_first_order_plant(1.0), _GAIN_TWO, {}, plan, _FAST_SCENARIO)
    assert len(report.runs) == 52
    for run in report.runs:
        a = run.factors["delta[0]"]  # delta[0] = -a scales with the factor
        assert run.stable == (a < 2.0), f"factor {a}"


def test_corner_factor_two_is_marginal_not_stable():
    plan = SweepPlan(parameters=("delta[0]",), fraction=1.0, samples=0, seed=3)
    report = sweep(_first_order_plant(1.0), _GAIN_TWO, {}, plan, _FAST_SCENARIO)
    factors = [run.factors["delta[0]"] for run in report.runs]
    assert factors == [0.0, 2.0]
    assert report.runs[0].stable
    assert not report.runs[1].stable


def test_stability_classification_matches_simulation():
    plan = SweepPlan(parameters=("delta[0]",), fraction=1.0, samples=40, seed=5)
    report = sweep(_first_order_plant(1.0), _GAIN_TWO, {}, plan, _FAST_SCENARIO)
    for run in report.runs:
        a = run.factors["delta[0]"]
        if abs(2.0 - a) < 1e-4:
            continue  # marginal band excluded
        if run.stable:
            assert not run.diverged


def test_seeded_reports_are_byte_identical(hover_plant, hover_controller, hover_gains):
    plan = SweepPlan(parameters=("delta[2]", "delta[3]"), fraction=0.3, samples=6, seed=11)
    scenario = Scenario(
        reference=SignalSpec(kind="step", amplitude=1.0, t0=0.0),
        disturbance=zero_signal(),
        horizon=3.0,
        step=0.01,
    )
    a = sweep(hover_plant, hover_controller, hover_gains, plan, scenario)
    b = sweep(hover_plant, hover_controller, hover_gains, plan, scenario)
    assert a.to_csv() == b.to_csv()
    assert a.to_jsonable() == b.to_jsonable()


def test_parallel_matches_serial(hover_plant, hover_controller, hover_gains):
    plan = SweepPlan(parameters=("delta[2]",), fraction=0.3, samples=6, seed=2)
    scenario = Scenario(
        reference=SignalSpec(kind="step", amplitude=1.0, t0=0.0),
        disturbance=zero_signal(),
        horizon=3.0,
        step=0.01,
    )
    serial = sweep(hover_plant, hover_controller, hover_gains, plan, scenario, workers=1)
    parallel = sweep(hover_plant, hover_controller, hover_gains, plan, scenario, workers=4)
    assert serial.to_csv() == parallel.to_csv()


def test_corner_enumeration_count(hover_plant, hover_controller, hover_gains):
    plan = SweepPlan(
        parameters=("delta[1]", "delta[2]", "delta[3]", "delta[4]"),
        fraction=0.3,
        samples=0,
        seed=1,
    )
    scenario = Scenario(
        reference=SignalSpec(kind="step", amplitude=1.0, t0=0.0),
        disturbance=zero_signal(),
        horizon=2.0,
        step=0.01,
    )
    report = sweep(hover_plant, hover_controller, hover_gains, plan, scenario)
    assert len(report.runs) == 16
    seen = {tuple(sorted(run.factors.items())) for run in report.runs}
    assert len(seen) == 16


def test_unresolvable_parameter_fails_before_running(hover_plant, hover_controller, hover_gains):
    plan = SweepPlan(parameters=("bogus[0]",), samples=2)
    with pytest.raises(ToolkitError, match="unknown parameter"):
        sweep(hover_plant, hover_controller, hover_gains, plan, _FAST_SCENARIO)


def test_degenerate_runs_recorded_not_raised():
    # factor 0 on the leading delta coefficient collapses the plant order;
    # the run must land in the report as a failed row, not abort the sweep
    plan = SweepPlan(parameters=("delta[1]",), fraction=1.0, samples=0, seed=1)
    report = sweep(_first_order_plant(1.0), _GAIN_TWO, {}, plan, _FAST_SCENARIO)
    assert len(report.runs) == 2
    collapsed = report.runs[0]
    assert collapsed.factors["delta[1]"] == 0.0
    assert not collapsed.stable
    assert collapsed.error != ""


def test_csv_has_plan_header_and_rows(hover_plant, hover_controller, hover_gains):
    plan = SweepPlan(parameters=("delta[2]",), fraction=0.1, samples=2, seed=4)
    scenario = Scenario(
        reference=SignalSpec(kind="step", amplitude=1.0, t0=0.0),
        disturbance=zero_signal(),
        horizon=2.0,
        step=0.01,
    )
    report = sweep(hover_plant, hover_controller, hover_gains, plan, scenario)
    lines = report.to_csv().strip().split("\n")
    assert lines[0].startswith("# plan ")
    assert lines[1] == "factor:delta[2],stable,settling_time_s,steady_state_error,diverged"
    assert len(lines) == 2 + 4
    agg = report.aggregate()
    assert agg["runs"] == 4
    stable_rows = sum(1 for run in report.runs if run.stable)
    assert agg["fraction_stable"] == stable_rows / 4
