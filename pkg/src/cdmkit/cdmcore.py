"""Stability indices, target polynomials, and coefficient-diagram data.

The analysis quantities for a polynomial sum(a_i s^i) of degree n:

    gamma_i  = a_i**2 / (a_{i+1} * a_{i-1})        i = 1..n-1   stability index
    gamma_i* = 1/gamma_{i+1} + 1/gamma_{i-1}       gamma_0 = gamma_n = inf
    tau      = a_1 / a_0                           equivalent time constant
    tau_i    = a_{i+1} / a_i                       i = 1..n-1

Indices that hit a zero coefficient are reported as NaN sentinels rather than
raising, so perturbation sweeps can classify every sample.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ToolkitError
from .polyalg import Polynomial

# Margin factor in the sufficient stability condition: a_i must exceed the
# cross term by this factor (equivalently gamma_i > 1.12 gamma_i*).
STABILITY_MARGIN = 1.12

UNDEFINED = math.nan


def _is_defined(x: float) -> bool:
    return math.isfinite(x)


@dataclass(frozen=True)
class StabilityProfile:
    """Index analysis of one polynomial; NaN marks undefined entries."""

    coeffs: tuple[float, ...]
    gammas: tuple[float, ...]
    gamma_stars: tuple[float, ...]
    tau: float
    taus: tuple[float, ...]
    sign_uniform: bool


def sign_uniform(p: Polynomial) -> bool:
    """True when every coefficient is strictly positive or every one strictly negative."""
    return all(c > 0 for c in p.coeffs) or all(c < 0 for c in p.coeffs)


def profile(p: Polynomial) -> StabilityProfile:
    n = p.degree
    if n < 2:
        raise ToolkitError(f"stability profile needs degree >= 2, got {n}")
    a = p.coeffs
    if a[0] == 0.0:
        raise ToolkitError("equivalent time constant undefined: constant coefficient is zero")

    gammas = []
    taus = []
    for i in range(1, n):
        denom = a[i + 1] * a[i - 1]
        gammas.append(a[i] ** 2 / denom if denom != 0.0 else UNDEFINED)
        taus.append(a[i + 1] / a[i] if a[i] != 0.0 else UNDEFINED)

    def reciprocal(g: float) -> float:
        return math.inf if g == 0.0 else 1.0 / g

    # gamma* uses the boundary convention gamma_0 = gamma_n = inf (terms drop out)
    gamma_stars = []
    for i in range(1, n):
        above = reciprocal(gammas[i]) if i < n - 1 else 0.0
        below = reciprocal(gammas[i - 2]) if i >= 2 else 0.0
        gamma_stars.append(above + below)

    return StabilityProfile(
        coeffs=a,
        gammas=tuple(gammas),
        gamma_stars=tuple(gamma_stars),
        tau=a[1] / a[0],
        taus=tuple(taus),
        sign_uniform=sign_uniform(p),
    )


def standard_gammas(count: int) -> list[float]:
    """Conventional design indices [2.5, 2, 2, ...] used when only tau is given."""
    if count < 1:
        return []
    return [2.5] + [2.0] * (count - 1)


def target_polynomial(a0: float, tau: float, gammas: Sequence[float]) -> Polynomial:
    """Design polynomial of degree len(gammas)+1 realizing the given tau and indices.

    a_1 = a0*tau and a_i = a0 * tau**i / prod_{j=1..i-1} gamma_{i-j}**j for i >= 2.
    """
    if a0 <= 0:
        raise ToolkitError("a0 must be > 0")
    if tau <= 0:
        raise ToolkitError("tau must be > 0")
    g = [float(x) for x in gammas]
    if any(x <= 0 for x in g):
        raise ToolkitError("all stability indices must be > 0")

    coeffs = [a0, a0 * tau]
    for i in range(2, len(g) + 2):
        denom = 1.0
        for j in range(1, i):
            denom *= g[i - j - 1] ** j
        coeffs.append(a0 * tau**i / denom)
    return Polynomial(tuple(coeffs))


@dataclass(frozen=True)
class ConditionEntry:
    """One index check; lhs/rhs in coefficient form, gamma_lhs/gamma_rhs in index form.

    satisfied is None when a zero coefficient makes the check undefined.  For
    stability reports satisfied means "margin met at this index"; for
    instability reports it means "this index triggers the instability test".
    """

    index: int
    lhs: float
    rhs: float
    satisfied: bool | None
    gamma_lhs: float
    gamma_rhs: float


@dataclass(frozen=True)
class ConditionReport:
    kind: str  # "stability" or "instability"
    entries: tuple[ConditionEntry, ...]
    sufficiently_stable: bool
    sufficiently_unstable: bool
    inconclusive: bool
    note: str = ""

    def __post_init__(self) -> None:
        if self.sufficiently_stable and self.sufficiently_unstable:
            raise ValueError("a polynomial cannot be sufficiently stable and unstable at once")


def check_stability_condition(p: Polynomial) -> ConditionReport:
    """Sufficient stability test: a_i above the margin-scaled cross term for i = 2..n-2.

    The coefficient arithmetic is evaluated verbatim even for mixed-sign
    polynomials, but the sufficiency verdict additionally requires uniform
    coefficient signs (the condition is derived for Hurwitz candidates).
    A negative leading coefficient is normalized away first, since the
    inequality is not invariant under an overall sign flip.
    """
    if p.coeffs[-1] < 0:
        p = -p
    n = p.degree
    if n < 4:
        return ConditionReport(
            kind="stability",
            entries=(),
            sufficiently_stable=False,
            sufficiently_unstable=False,
            inconclusive=True,
            note=f"degree {n} < 4: the condition checks i = 2..n-2, which is empty",
        )

    a = p.coeffs
    prof = profile(p) if a[0] != 0.0 else None
    entries = []
    undefined = False
    for i in range(2, n - 1):
        if prof is not None:
            g = prof.gammas[i - 1]
            g_star = prof.gamma_stars[i - 1]
        else:
            g = g_star = UNDEFINED
        if a[i - 1] == 0.0 or a[i + 1] == 0.0:
            undefined = True
            entries.append(
                ConditionEntry(i, a[i], UNDEFINED, None, g, STABILITY_MARGIN * g_star)
            )
            continue
        rhs = STABILITY_MARGIN * (
            (a[i - 1] / a[i + 1]) * a[i + 2] + (a[i + 1] / a[i - 1]) * a[i - 2]
        )
        entries.append(
            ConditionEntry(i, a[i], rhs, a[i] > rhs, g, STABILITY_MARGIN * g_star)
        )

    uniform = sign_uniform(p)
    return ConditionReport(
        kind="stability",
        entries=tuple(entries),
        sufficiently_stable=(
            not undefined and uniform and all(e.satisfied for e in entries)
        ),
        sufficiently_unstable=False,
        inconclusive=undefined,
        note="" if uniform else "coefficient signs are not uniform; sufficiency verdict withheld",
    )


def check_instability_condition(p: Polynomial) -> ConditionReport:
    """Sufficient instability test: a_{i+1} a_i <= a_{i+2} a_{i-1} for some i = 1..n-2.

    Mixed-sign polynomials are reported sufficiently unstable outright: uniform
    coefficient signs are necessary for Hurwitz stability.
    """
    n = p.degree
    if n < 3:
        raise ToolkitError(f"instability condition needs degree >= 3, got {n}")

    a = p.coeffs
    entries = []
    for i in range(1, n - 1):
        lhs = a[i + 1] * a[i]
        rhs = a[i + 2] * a[i - 1]
        denom = a[i + 2] * a[i - 1]
        gamma_product = lhs / denom if denom != 0.0 else UNDEFINED
        entries.append(ConditionEntry(i, lhs, rhs, lhs <= rhs, gamma_product, 1.0))

    if not sign_uniform(p):
        return ConditionReport(
            kind="instability",
            entries=tuple(entries),
            sufficiently_stable=False,
            sufficiently_unstable=True,
            inconclusive=False,
            note="coefficient signs are not uniform (necessary stability condition fails)",
        )

    return ConditionReport(
        kind="instability",
        entries=tuple(entries),
        sufficiently_stable=False,
        sufficiently_unstable=any(e.satisfied for e in entries),
        inconclusive=False,
    )


@dataclass(frozen=True)
class DiagramPoint:
    index: int
    log10_magnitude: float | None  # None for zero coefficients
    sign: str  # "+", "-", or "0"


@dataclass(frozen=True)
class DiagramDataset:
    """Per-curve coefficient magnitudes on a log10 scale, for the design diagram."""

    curves: tuple[tuple[str, tuple[DiagramPoint, ...]], ...]

    def curve(self, name: str) -> tuple[DiagramPoint, ...]:
        for curve_name, points in self.curves:
            if curve_name == name:
                return points
        raise KeyError(name)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("curve,i,log10_magnitude,sign\n")
        for name, points in self.curves:
            for pt in points:
                mag = "" if pt.log10_magnitude is None else repr(pt.log10_magnitude)
                out.write(f"{name},{pt.index},{mag},{pt.sign}\n")
        return out.getvalue()

    def to_jsonable(self) -> dict:
        return {
            name: [
                {"i": pt.index, "log10_magnitude": pt.log10_magnitude, "sign": pt.sign}
                for pt in points
            ]
            for name, points in self.curves
        }


def coefficient_diagram(curves: Mapping[str, Polynomial]) -> DiagramDataset:
    """Diagram dataset for the named polynomials; zero coefficients carry sign '0'."""
    rendered = []
    for name, poly in curves.items():
        points = []
        for i, c in enumerate(poly.coeffs):
            if c == 0.0:
                points.append(DiagramPoint(i, None, "0"))
            else:
                points.append(DiagramPoint(i, math.log10(abs(c)), "+" if c > 0 else "-"))
        rendered.append((name, tuple(points)))
    return DiagramDataset(curves=tuple(rendered))
