import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdmkit.cdmcore import (
    check_instability_condition,
    check_stability_condition,
    coefficient_diagram,
    profile,
    standard_gammas,
    target_polynomial,
)
from cdmkit.errors import ToolkitError
from cdmkit.polyalg import Polynomial, roots

from conftest import DELTA_COEFFS


def test_profile_cubic_reference_case():
    prof = profile(Polynomial((1.0, 2.5, 2.5, 1.25)))
    assert prof.gammas == pytest.approx((2.5, 2.0), rel=1e-12)
    assert prof.tau == pytest.approx(2.5, rel=1e-12)
    assert prof.sign_uniform


def test_profile_delta_time_constant(delta):
    prof = profile(delta)
    assert prof.tau == pytest.approx(-36.71 / -24.11, rel=1e-12)
    assert prof.tau == pytest.approx(1.5226, abs=1e-4)
    assert not prof.sign_uniform


def test_profile_rejects_degree_one():
    with pytest.raises(ToolkitError, match="degree >= 2"):
        profile(Polynomial((1.0, 1.0)))


def test_profile_rejects_zero_constant_term():
    with pytest.raises(ToolkitError, match="time constant"):
        profile(Polynomial((0.0, 1.0, 1.0)))


def test_profile_zero_interior_coefficient_is_sentinel_not_error():
    prof = profile(Polynomial((1.0, 0.0, 1.0, 1.0)))
    # gamma_1 = a1^2/(a2 a0) is fine; gamma_2 = a2^2/(a3 a1) divides by zero
    assert prof.gammas[0] == 0.0
    assert math.isnan(prof.gammas[1])
    assert math.isnan(prof.taus[0])
    assert not prof.sign_uniform


def test_gamma_star_boundary_convention():
    prof = profile(Polynomial((1.0, 2.5, 2.5, 1.25)))
    # gamma_0 = gamma_n = inf: edge stars reduce to the single finite term
    assert prof.gamma_stars[0] == pytest.approx(1 / prof.gammas[1], rel=1e-12)
    assert prof.gamma_stars[-1] == pytest.approx(1 / prof.gammas[0], rel=1e-12)


def test_target_polynomial_reference_case():
    # a2 = tau^2/gamma1 = 2.5, a3 = tau^3/(gamma2 gamma1^2) = 1.25, by hand
    p = target_polynomial(1.0, 2.5, [2.5, 2.0])
    assert p.coeffs == pytest.approx((1.0, 2.5, 2.5, 1.25), rel=1e-12)


def test_target_polynomial_empty_gammas_is_first_order():
    assert target_polynomial(2.0, 3.0, []).coeffs == (2.0, 6.0)


def test_target_polynomial_rejects_nonpositive():
    with pytest.raises(ToolkitError):
        target_polynomial(0.0, 1.0, [2.0])
    with pytest.raises(ToolkitError):
        target_polynomial(1.0, -1.0, [2.0])
    with pytest.raises(ToolkitError):
        target_polynomial(1.0, 1.0, [2.0, 0.0])


positive = st.floats(min_value=0.05, max_value=20.0, allow_nan=False)


@given(
    positive,
    positive,
    st.lists(st.floats(min_value=0.3, max_value=6.0), min_size=1, max_size=7),
)
@settings(max_examples=120)
def test_profile_target_round_trip(a0, tau, gammas):
    prof = profile(target_polynomial(a0, tau, gammas))
    assert prof.tau == pytest.approx(tau, rel=1e-12)
    for got, want in zip(prof.gammas, gammas):
        assert got == pytest.approx(want, rel=1e-12)


@given(
    positive,
    positive,
    st.lists(st.floats(min_value=0.3, max_value=6.0), min_size=1, max_size=7),
)
@settings(max_examples=120)
def test_time_constant_ratio_identity(a0, tau, gammas):
    # tau_i / tau_{i-1} = 1/gamma_i with tau_0 = tau, on every computed profile
    prof = profile(target_polynomial(a0, tau, gammas))
    chain = (prof.tau,) + prof.taus
    for i, gamma in enumerate(prof.gammas, start=1):
        assert chain[i] / chain[i - 1] == pytest.approx(1.0 / gamma, rel=1e-12)


def test_profile_scale_invariance(delta):
    base = profile(delta)
    for c in (2.0, 0.5, -1024.0):
        scaled = profile(delta * c)
        assert scaled.gammas == base.gammas
        assert scaled.gamma_stars == base.gamma_stars
        assert scaled.tau == base.tau
        assert scaled.taus == base.taus
    general = profile(delta * 3.7)
    assert general.tau == pytest.approx(base.tau, rel=1e-12)
    for got, want in zip(general.gammas, base.gammas):
        assert got == pytest.approx(want, rel=1e-12)


def test_stability_condition_on_delta_matches_published_check(delta):
    report = check_stability_condition(delta)
    entry = {e.index: e for e in report.entries}[2]
    assert entry.lhs == 55.56
    # exact-rational evaluation of the cross-term threshold
    a = [Fraction(str(c)) for c in DELTA_COEFFS]
    expected = Fraction(112, 100) * ((a[1] / a[3]) * a[4] + (a[3] / a[1]) * a[0])
    assert entry.rhs == pytest.approx(float(expected), rel=1e-12)
    # printed value 61.588; recomputation lands within 1%
    assert abs(entry.rhs - 61.588) / 61.588 < 0.01
    assert entry.satisfied is False
    assert not report.sufficiently_stable


def test_stability_condition_satisfied_by_design_form():
    report = check_stability_condition(target_polynomial(1.0, 2.5, [2.5, 2.0, 2.0, 2.0]))
    assert report.entries
    assert all(e.satisfied for e in report.entries)
    assert report.sufficiently_stable


def test_stability_condition_low_degree_inconclusive():
    report = check_stability_condition(Polynomial((1.0, 2.0, 2.0, 1.0)))
    assert report.inconclusive
    assert report.entries == ()
    assert not report.sufficiently_stable


def test_coefficient_and_gamma_forms_agree():
    rng = np.random.default_rng(5)
    for _ in range(200):
        coeffs = rng.uniform(0.1, 5.0, int(rng.integers(5, 9)))
        report = check_stability_condition(Polynomial(tuple(coeffs)))
        for e in report.entries:
            assert e.satisfied == (e.gamma_lhs > e.gamma_rhs)


def test_instability_condition_mixed_sign_pre_check(delta):
    report = check_instability_condition(delta)
    assert report.sufficiently_unstable
    assert "not uniform" in report.note


def test_instability_condition_not_triggered_by_design_form():
    report = check_instability_condition(target_polynomial(1.0, 2.5, [2.5, 2.0, 2.0]))
    assert not report.sufficiently_unstable


def test_instability_condition_unit_coefficients():
    p = Polynomial((1.0, 1.0, 1.0, 1.0))
    report = check_instability_condition(p)
    assert report.sufficiently_unstable
    # the root oracle agrees this is not asymptotically stable: roots at +/- i
    assert any(abs(z.real) < 1e-9 for z in roots(p))


def test_instability_condition_degree_check():
    with pytest.raises(ToolkitError, match="degree >= 3"):
        check_instability_condition(Polynomial((1.0, 1.0, 1.0)))


def test_conditions_never_both_sufficient():
    rng = np.random.default_rng(9)
    for _ in range(300):
        degree = int(rng.integers(4, 9))
        coeffs = rng.uniform(-3.0, 3.0, degree + 1)
        if abs(coeffs[-1]) < 0.1 or coeffs[0] == 0.0:
            continue
        p = Polynomial(tuple(coeffs))
        stable_rep = check_stability_condition(p)
        unstable_rep = check_instability_condition(p)
        assert not (stable_rep.sufficiently_stable and unstable_rep.sufficiently_unstable)


def test_standard_gammas():
    assert standard_gammas(4) == [2.5, 2.0, 2.0, 2.0]
    assert standard_gammas(1) == [2.5]
    assert standard_gammas(0) == []


def test_diagram_delta_signs(delta):
    dataset = coefficient_diagram({"delta": delta})
    points = dataset.curve("delta")
    assert len(points) == 6
    assert [p.sign for p in points] == ["-", "-", "+", "+", "+", "+"]
    assert points[5].log10_magnitude == pytest.approx(0.0)


def test_diagram_zero_polynomial():
    points = coefficient_diagram({"z": Polynomial((0.0,))}).curve("z")
    assert len(points) == 1
    assert points[0].sign == "0"
    assert points[0].log10_magnitude is None


def test_diagram_exact_decades():
    points = coefficient_diagram({"p": Polynomial((1.0, 10.0, 100.0))}).curve("p")
    assert [p.log10_magnitude for p in points] == pytest.approx([0.0, 1.0, 2.0])


def test_diagram_csv_layout(delta):
    csv = coefficient_diagram({"delta": delta, "zero": Polynomial((0.0,))}).to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == "curve,i,log10_magnitude,sign"
    assert lines[1].startswith("delta,0,") and lines[1].endswith(",-")
    assert lines[-1] == "zero,0,,0"
