"""Real-coefficient polynomial arithmetic and stability oracles.

Coefficients are stored in ascending power order throughout the toolkit:
``coeffs[i]`` multiplies ``s**i``.  The zero polynomial is represented by the
single coefficient ``0.0``.  Polynomials serialize as plain JSON arrays in the
same order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import numpy.polynomial.polynomial as npoly

from .errors import ToolkitError

# Relative threshold below which a coefficient counts as a numerical epsilon.
DEFAULT_PRUNE_TOL = 1e-8


def _normalized(values: Iterable[float]) -> tuple[float, ...]:
    coeffs = [float(c) for c in values]
    if not coeffs:
        raise ValueError("polynomial needs at least one coefficient")
    for c in coeffs:
        if not math.isfinite(c):
            raise ValueError(f"non-finite coefficient {c!r}")
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial in ascending coefficient order (``coeffs[i]`` * s^i)."""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _normalized(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(tuple(out))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial | float | int") -> "Polynomial":
        if isinstance(other, (int, float)):
            return Polynomial(tuple(c * float(other) for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return Polynomial((0.0,))
        return Polynomial(tuple(np.convolve(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __call__(self, s: complex | float) -> complex | float:
        """Horner evaluation; exact for degree 0."""
        acc: complex | float = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def shifted(self, powers: int = 1) -> "Polynomial":
        """Multiply by s**powers."""
        if self.is_zero:
            return self
        return Polynomial((0.0,) * powers + self.coeffs)

    def scaled(self, factor: float) -> "Polynomial":
        return self * factor

    def to_list(self) -> list[float]:
        return list(self.coeffs)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def evaluate(p: Polynomial, s: complex | float) -> complex | float:
    return p(s)


def roots(p: Polynomial) -> list[complex]:
    """All roots with multiplicity, via the companion-matrix eigenvalues.

    Residual guarantee: |p(r)| <= 1e-6 * max|coeffs| * max(1, |r|)**degree
    for every returned root r.
    """
    if p.degree < 1:
        raise ToolkitError("constant polynomial has no roots")
    return [complex(z) for z in npoly.polyroots(np.asarray(p.coeffs))]


def from_roots(root_list: Sequence[complex]) -> Polynomial:
    """Monic polynomial with the given roots (tiny imaginary residue dropped)."""
    coeffs = npoly.polyfromroots(np.asarray(root_list, dtype=complex))
    return Polynomial(tuple(float(c.real) for c in coeffs))


@dataclass(frozen=True)
class RouthVerdict:
    stable: bool
    first_column: tuple[float, ...]
    degenerate: bool


def routh_stable(p: Polynomial) -> RouthVerdict:
    """Routh-table stability test for a polynomial with positive leading coefficient.

    A zero pivot is recorded as-is in the first column (so the verdict stays
    conservative) and replaced by a small positive epsilon to continue the
    table; such tables are flagged degenerate.
    """
    if p.is_zero:
        raise ToolkitError("zero polynomial has no Routh table")
    n = p.degree
    if n < 1:
        raise ToolkitError("Routh test requires degree >= 1")
    if p.coeffs[-1] <= 0:
        raise ToolkitError("leading coefficient must be positive (sign-normalize first)")

    desc = list(reversed(p.coeffs))
    width = n // 2 + 1
    rows = [desc[0::2], desc[1::2]]
    for row in rows:
        row.extend(0.0 for _ in range(width - len(row)))

    eps_pivot = 1e-12 * max(abs(c) for c in p.coeffs)
    first_column = [rows[0][0], rows[1][0]]
    degenerate = False

    prev2, prev1 = rows[0], rows[1]
    for _ in range(2, n + 1):
        pivot = prev1[0]
        if pivot == 0.0:
            degenerate = True
            pivot = eps_pivot
        row = [
            (pivot * prev2[i + 1] - prev2[0] * prev1[i + 1]) / pivot
            for i in range(width - 1)
        ]
        row.append(0.0)
        first_column.append(row[0])
        prev2, prev1 = [pivot] + prev1[1:], row

    # first_column keeps the raw pivots (zeros included), length degree+1
    stable = all(c > 0.0 for c in first_column)
    return RouthVerdict(stable=stable, first_column=tuple(first_column), degenerate=degenerate)


def prune_epsilon(p: Polynomial, rel_tol: float = DEFAULT_PRUNE_TOL) -> Polynomial:
    """Zero out coefficients below rel_tol * max|coeff|, then renormalize."""
    if rel_tol < 0:
        raise ValueError("rel_tol must be >= 0")
    threshold = rel_tol * max(abs(c) for c in p.coeffs)
    return Polynomial(tuple(0.0 if abs(c) < threshold else c for c in p.coeffs))
