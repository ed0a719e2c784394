import numpy as np
import pytest

from cdmkit.plant import fixture_r50_hover_lonvert
from cdmkit.polyalg import Polynomial
from cdmkit.synth import R50_HOVER_GAINS, r50_hover_controller

# ascending coefficients of the hover plant's open-loop characteristic polynomial
DELTA_COEFFS = (-24.11, -36.71, 55.56, 97.08, 22.4, 1.0)


@pytest.fixture
def delta():
    return Polynomial(DELTA_COEFFS)


@pytest.fixture
def hover_plant():
    return fixture_r50_hover_lonvert(sign_corrected=True)


@pytest.fixture
def hover_plant_verbatim():
    return fixture_r50_hover_lonvert(sign_corrected=False)


@pytest.fixture
def hover_controller():
    return r50_hover_controller()


@pytest.fixture
def hover_gains():
    return dict(R50_HOVER_GAINS)


def random_stable_monic(rng: np.random.Generator, degree: int) -> Polynomial:
    """Monic polynomial with random left-half-plane roots (real and conjugate pairs)."""
    coeffs = np.array([1.0])
    remaining = degree
    while remaining > 0:
        if remaining >= 2 and rng.random() < 0.5:
            re = -rng.uniform(0.1, 3.0)
            im = rng.uniform(0.1, 3.0)
            factor = np.array([re * re + im * im, -2 * re, 1.0])
            remaining -= 2
        else:
            factor = np.array([rng.uniform(0.1, 3.0), 1.0])
            remaining -= 1
        coeffs = np.convolve(coeffs, factor)
    return Polynomial(tuple(coeffs))


def random_polynomial(rng: np.random.Generator, degree: int) -> Polynomial:
    coeffs = rng.uniform(-2.0, 2.0, degree + 1)
    while abs(coeffs[-1]) < 0.1:
        coeffs[-1] = rng.uniform(-2.0, 2.0)
    return Polynomial(tuple(coeffs))
