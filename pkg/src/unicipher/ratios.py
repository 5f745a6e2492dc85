"""Ratio dynamics of the coding sequences.

Successive-term ratios obey a(n+1) = t - d / a(n).  Their fixed points, how
fast orbits settle onto the larger one, and the exact rational interval that
brackets the row ratios of any honest ciphertext all live here.  Anything
that gates correctness runs on exact rationals; floats appear only in
estimates and display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import (
    ComplexFixedPoints,
    DivisionByZeroInOrbit,
    ZeroDenominator,
    ZeroSequenceEntry,
)
from .matrix import CodingMatrix, Mat2

BOTTOM_OVER_TOP = "bottom-over-top"
TOP_OVER_BOTTOM = "top-over-bottom"

DEFAULT_ORBIT_STEPS = 64


class ConvergenceMode(Enum):
    MONOTONE_DECREASING = "monotone-decreasing"
    MONOTONE_INCREASING = "monotone-increasing"
    ALTERNATING_SPLIT = "alternating-split"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class FixedPoints:
    """Roots (t +/- sqrt(t^2 - 4d)) / 2 of x^2 - t*x + d.

    Held as the exact surd (t, discriminant); float views are derived.
    Rational comparisons are decided by sign analysis of (2q - t)^2 against
    the discriminant, never through floats.
    """

    t: int
    d: int

    @property
    def discriminant(self) -> int:
        return self.t * self.t - 4 * self.d

    @property
    def phi_plus(self) -> float:
        return (self.t + math.sqrt(self.discriminant)) / 2.0

    @property
    def phi_minus(self) -> float:
        return (self.t - math.sqrt(self.discriminant)) / 2.0

    def compare_plus(self, q) -> int:
        """Sign of q - phi_plus for rational q, computed exactly."""
        r = 2 * Fraction(q) - self.t
        if r < 0:
            return -1
        lhs, rhs = r * r, self.discriminant
        return (lhs > rhs) - (lhs < rhs)

    def compare_minus(self, q) -> int:
        """Sign of q - phi_minus for rational q, computed exactly."""
        r = 2 * Fraction(q) - self.t
        if r >= 0:
            return 1 if (r > 0 or self.discriminant > 0) else 0
        lhs, rhs = r * r, self.discriminant
        return (rhs > lhs) - (rhs < lhs)

    def phi_plus_decimal(self, digits: int = 15) -> str:
        """phi_plus truncated to `digits` decimal places via integer sqrt."""
        scale = 10 ** digits
        root = math.isqrt(self.discriminant * scale * scale)
        value = (self.t * scale + root) // 2
        sign = "-" if value < 0 else ""
        text = str(abs(value)).rjust(digits + 1, "0")
        return f"{sign}{text[:-digits]}.{text[-digits:]}" if digits else f"{sign}{text}"


def fixed_points(t: int, d: int) -> FixedPoints:
    if t * t < 4 * d:
        raise ComplexFixedPoints(f"x^2 - {t}x + {d} has no real roots")
    return FixedPoints(t, d)


@dataclass(frozen=True)
class RatioParams:
    """Parameters of the ratio iteration a(n+1) = t - d / a(n)."""

    t: int
    d: int
    a0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a0", Fraction(self.a0))
        if self.a0 == 0:
            raise ValueError("a0 must be nonzero")
        if self.d > 0 and self.t * self.t < 4 * self.d:
            raise ComplexFixedPoints("no real fixed points: the ratios diverge")

    @property
    def fixed(self) -> FixedPoints:
        return FixedPoints(self.t, self.d)


def ratio_iterate(params: RatioParams, steps: int) -> tuple[Fraction, ...]:
    """Exact orbit a0, a1, ..., a(steps)."""
    orbit = [params.a0]
    a = params.a0
    for i in range(steps):
        if a == 0:
            raise DivisionByZeroInOrbit(f"orbit hit zero at step {i}")
        a = params.t - Fraction(params.d) / a
        orbit.append(a)
    return tuple(orbit)


@dataclass(frozen=True)
class ConvergenceProfile:
    mode: ConvergenceMode
    orbit: tuple[Fraction, ...]
    errors: tuple[float, ...]


def _distance_to_phi_plus(a: Fraction, fp: FixedPoints) -> float:
    # |a - phi+| = |a^2 - t*a + d| / |a - phi-|; the numerator is exact.
    num = a * a - fp.t * a + fp.d
    if num == 0:
        if fp.compare_plus(a) == 0:
            return 0.0
        return math.sqrt(fp.discriminant)
    return abs(float(num)) / abs(float(a) - fp.phi_minus)


def _direction(seq: Sequence[Fraction]) -> str | None:
    """'down', 'up', 'flat', or None for a mixed sequence."""
    down = up = False
    for prev, cur in zip(seq, seq[1:]):
        if cur < prev:
            down = True
        elif cur > prev:
            up = True
    if down and up:
        return None
    if down:
        return "down"
    if up:
        return "up"
    return "flat"


def convergence_profile(
    params: RatioParams, steps: int = DEFAULT_ORBIT_STEPS
) -> ConvergenceProfile:
    """Observed monotonicity class of the orbit plus its error decay.

    Classification is empirical and exact: a globally monotone orbit is
    monotone-decreasing/-increasing; an orbit whose even and odd
    subsequences are monotone in opposite directions is alternating-split;
    anything else is divergent.
    """
    orbit = ratio_iterate(params, steps)
    fp = params.fixed
    errors = tuple(_distance_to_phi_plus(a, fp) for a in orbit)
    whole = _direction(orbit)
    if whole == "flat":
        if fp.compare_plus(orbit[0]) >= 0:
            mode = ConvergenceMode.MONOTONE_DECREASING
        elif fp.compare_minus(orbit[0]) > 0:
            mode = ConvergenceMode.MONOTONE_INCREASING
        else:
            mode = ConvergenceMode.DIVERGENT
    elif whole == "down":
        mode = ConvergenceMode.MONOTONE_DECREASING
    elif whole == "up":
        mode = ConvergenceMode.MONOTONE_INCREASING
    else:
        evens = _direction(orbit[0::2])
        odds = _direction(orbit[1::2])
        if {evens, odds} == {"down", "up"}:
            mode = ConvergenceMode.ALTERNATING_SPLIT
        else:
            mode = ConvergenceMode.DIVERGENT
    return ConvergenceProfile(mode, orbit, errors)


def exponential_rate(errors: Sequence[float], floor: float = 1e-250) -> float:
    """Worst observed per-step error ratio; < 1 means geometric decay."""
    ratios = [
        nxt / cur
        for cur, nxt in zip(errors, errors[1:])
        if cur > floor and nxt > 0.0
    ]
    return max(ratios) if ratios else 0.0


def row_ratio_interval(cm: CodingMatrix) -> tuple[Fraction, Fraction]:
    """Closed interval spanned by A(n+1)/A(n) and B(n+1)/B(n).

    Each row of an honest ciphertext (non-negative plaintext, row not all
    zero) has c_row1/c_row2 inside this interval, because the ciphertext
    ratio is a non-negatively weighted mediant of the two column ratios.
    """
    m = cm.matrix
    if m.a12 <= 0 or m.a22 <= 0:
        raise ZeroSequenceEntry("both sequences must be positive at index n")
    ra = Fraction(m.a11, m.a12)
    rb = Fraction(m.a21, m.a22)
    return (ra, rb) if ra <= rb else (rb, ra)


@dataclass(frozen=True)
class ColumnRatios:
    """Both per-column ratios of a ciphertext matrix, plus their mean."""

    left: Fraction
    right: Fraction
    orientation: str = BOTTOM_OVER_TOP

    @property
    def mean(self) -> Fraction:
        return (self.left + self.right) / 2

    def mean_decimal(self, digits: int = 2) -> str:
        return round_half_even(self.mean, digits)

    def flipped(self) -> "ColumnRatios":
        if self.left == 0 or self.right == 0:
            raise ZeroDenominator("cannot invert a zero column ratio")
        other = TOP_OVER_BOTTOM if self.orientation == BOTTOM_OVER_TOP else BOTTOM_OVER_TOP
        return ColumnRatios(1 / self.left, 1 / self.right, other)


def column_ratio(c: Mat2) -> ColumnRatios:
    """Bottom-over-top column ratios (c21/c11, c22/c12).

    Use .flipped() for the top-over-bottom orientation.
    """
    if c.a11 == 0 or c.a12 == 0:
        raise ZeroDenominator("top-row entry is zero; column ratio undefined")
    return ColumnRatios(Fraction(c.a21, c.a11), Fraction(c.a22, c.a12))


def round_half_even(value, digits: int) -> str:
    """Round an exact rational to a fixed-point decimal string."""
    if digits < 0:
        raise ValueError("digits must be >= 0")
    scaled = round(Fraction(value) * 10 ** digits)  # round() ties to even
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}" if digits else f"{sign}{text}"
