"""Exact 2x2 integer matrices and the coding matrices built from them.

Everything stays in arbitrary-precision integer arithmetic: products,
determinants, adjugates, powers, and the two-sequence coding matrices
[[A(n+1), A(n)], [B(n+1), B(n)]] that multiply plaintext blocks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateConvergenceWarning, InvalidKey, SingularMatrix

DEFAULT_MAX_EXPONENT = 512


def _require_int(name: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix of exact integers, fields row-major."""

    a11: int
    a12: int
    a21: int
    a22: int

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            _require_int(name, getattr(self, name))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self):
        return ((self.a11, self.a12), (self.a21, self.a22))

    def entries(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self) -> int:
        return self.a11 + self.a22

    def adjugate(self) -> "Mat2":
        return Mat2(self.a22, -self.a12, -self.a21, self.a11)

    def inverse_exact(self) -> tuple["Mat2", int]:
        """Adjugate plus determinant, so callers can divide exactly.

        For determinant +/-1 the integer inverse is adjugate * det.
        """
        d = self.det()
        if d == 0:
            raise SingularMatrix(f"{self} is singular")
        return self.adjugate(), d

    def __pow__(self, n: int) -> "Mat2":
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Mat2.identity()
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def __str__(self) -> str:
        return f"[[{self.a11}, {self.a12}], [{self.a21}, {self.a22}]]"


class PowerForm(Enum):
    BARE_POWER = "bare-power"
    DEGENERATE = "degenerate"
    NEITHER = "neither"


def classify_power_form(u: Mat2) -> PowerForm:
    """Classify whether u can tile its own powers with shifted columns.

    Only matrices [[a, 1], [c, 0]] and singular matrices admit
    u^n = [[x(n+1), x(n)], [y(n+1), y(n)]] for a pair of sequences.
    """
    if u.a12 == 1 and u.a22 == 0:
        return PowerForm.BARE_POWER
    if u.det() == 0:
        return PowerForm.DEGENERATE
    return PowerForm.NEITHER


@dataclass(frozen=True)
class KeyMatrix:
    """Unimodular matrix admissible as the multiplier of a cipher key.

    Admissible means determinant +/-1, non-negative entries, and enough
    trace for the coding-sequence ratios to settle on the larger fixed
    point: trace >= 2 when det = +1 (trace exactly 2 still converges, but
    only linearly, hence the warning), trace > 2 with a positive diagonal
    when det = -1.  The bare-power family [[k, 1], [1, 0]] is admitted for
    every k >= 1; its ratio sequences are the classical k-Fibonacci
    quotients, which converge without the trace bound.
    """

    m: Mat2

    def __post_init__(self):
        d = self.m.det()
        if d not in (1, -1):
            raise InvalidKey(f"key matrix must have determinant +1 or -1, got {d}")
        if any(e < 0 for e in self.m.entries()):
            raise InvalidKey("key matrix entries must be non-negative")
        t = self.m.trace()
        if self.is_bare_power:
            if self.m.a11 < 1:
                raise InvalidKey("bare-power key needs its top-left entry >= 1")
        elif d == -1:
            if t <= 2 or self.m.a11 < 1 or self.m.a22 < 1:
                raise InvalidKey(
                    "det -1 keys need trace > 2 and both diagonal entries >= 1"
                )
        else:
            if t < 2:
                raise InvalidKey("det +1 keys need trace >= 2")
            if t == 2:
                warnings.warn(
                    "trace-2 key: ratio convergence is not exponential",
                    DegenerateConvergenceWarning,
                    stacklevel=2,
                )

    @property
    def is_bare_power(self) -> bool:
        return classify_power_form(self.m) is PowerForm.BARE_POWER

    @property
    def alpha(self) -> int:
        return self.m.a11

    @property
    def beta(self) -> int:
        return self.m.a12

    @property
    def gamma(self) -> int:
        return self.m.a21

    @property
    def delta(self) -> int:
        return self.m.a22

    @property
    def trace(self) -> int:
        return self.m.trace()

    @property
    def det(self) -> int:
        return self.m.det()


@dataclass(frozen=True)
class SeedPair:
    """Start values of the two coding sequences."""

    a0: int
    b0: int

    def __post_init__(self):
        _require_int("a0", self.a0)
        _require_int("b0", self.b0)
        if self.a0 < 0 or self.b0 < 0:
            raise InvalidKey("seed values must be non-negative")
        if self.a0 == 0 and self.b0 == 0:
            raise InvalidKey("seed (0, 0) is degenerate")


def mu_of_seed(key: KeyMatrix, seed: SeedPair) -> int:
    """Determinant of the index-0 coding matrix for this key and seed."""
    closed = (
        (key.alpha - key.delta) * seed.a0 * seed.b0
        + key.beta * seed.b0 * seed.b0
        - key.gamma * seed.a0 * seed.a0
    )
    a1 = key.alpha * seed.a0 + key.beta * seed.b0
    b1 = key.gamma * seed.a0 + key.delta * seed.b0
    assert closed == a1 * seed.b0 - seed.a0 * b1
    return closed


@dataclass(frozen=True)
class CodingMatrix:
    """Encryption multiplier [[A(n+1), A(n)], [B(n+1), B(n)]].

    Both columns advance by the same recurrence x(n+1) = t*x(n) - d*x(n-1),
    so det shrinks to seed_det * unit_det^n exactly.
    """

    matrix: Mat2
    n: int
    trace: int
    unit_det: int
    seed_det: int

    @property
    def det(self) -> int:
        return self.seed_det * (self.unit_det ** self.n)

    @property
    def ratio_limit(self) -> float:
        """Larger root of x^2 - t*x + d: the common limit of the column ratios."""
        disc = self.trace * self.trace - 4 * self.unit_det
        return (self.trace + math.sqrt(disc)) / 2.0


def build_coding_matrix(
    key: KeyMatrix,
    seed: SeedPair,
    n: int,
    max_n: int = DEFAULT_MAX_EXPONENT,
) -> CodingMatrix:
    """Run both seeded sequences out to index n + 1.

    Equals (key.m ** n) @ M0 entrywise; entries grow geometrically with n,
    hence the configurable cap.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise InvalidKey("exponent must be a non-negative integer")
    if n > max_n:
        raise InvalidKey(f"exponent {n} exceeds the cap {max_n}")
    a_prev, b_prev = seed.a0, seed.b0
    a_cur = key.alpha * seed.a0 + key.beta * seed.b0
    b_cur = key.gamma * seed.a0 + key.delta * seed.b0
    t, d = key.trace, key.det
    for _ in range(n):
        a_prev, a_cur = a_cur, t * a_cur - d * a_prev
        b_prev, b_cur = b_cur, t * b_cur - d * b_prev
    return CodingMatrix(Mat2(a_cur, a_prev, b_cur, b_prev), n, t, d, mu_of_seed(key, seed))


def k_golden_matrix(k: int, n: int, max_n: int = DEFAULT_MAX_EXPONENT) -> CodingMatrix:
    """n-th power of [[k, 1], [1, 0]] arranged as a coding matrix."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InvalidKey("k must be a positive integer")
    if n < 1:
        raise InvalidKey("need n >= 1 so the bottom-right sequence entry exists")
    return build_coding_matrix(KeyMatrix(Mat2(k, 1, 1, 0)), SeedPair(0, 1), n, max_n)


def golden_matrix(n: int, max_n: int = DEFAULT_MAX_EXPONENT) -> CodingMatrix:
    """Coding matrix of consecutive Fibonacci numbers (the k = 1 case)."""
    return k_golden_matrix(1, n, max_n)


def s_matrix(t: int, d: int) -> Mat2:
    """Companion-style column shifter: M(n+1) = M(n) @ s_matrix(t, d)."""
    return Mat2(t, 1, -d, 0)
