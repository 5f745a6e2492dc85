"""Chosen-plaintext attacks on the matrix cipher families.

Encrypting the unit plaintext [[1,0],[0,0]] copies the top row of the coding
matrix into the ciphertext.  For bare-power keys that row is a consecutive
pair from one public sequence, so the exponent (and k) fall out of a short
scan.  Seeded keys put six free parameters behind the same row, and the only
generic recourse is enumeration, measured here rather than asserted away.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .cipher import CipherKey, PlaintextMatrix
from .errors import NoMatchInBounds, NotGoldenOracle
from .matrix import Mat2

UNIT_PROBE = Mat2(1, 0, 0, 0)


@dataclass(frozen=True)
class EncryptionOracle:
    """Opaque deterministic map from plaintext matrix to ciphertext matrix."""

    encrypt_block: Callable[[Mat2], Mat2]

    def query(self, p: Mat2) -> Mat2:
        return self.encrypt_block(p)

    @classmethod
    def from_key(cls, key: CipherKey) -> "EncryptionOracle":
        coding = key.coding_matrix.matrix
        return cls(lambda p: p @ coding)


@dataclass(frozen=True)
class GoldenAttackResult:
    n: int
    matched_pair: tuple[int, int]
    queries: int = 1


@dataclass(frozen=True)
class KGoldenAttackResult:
    k: int
    n: int
    matched_pair: tuple[int, int]
    queries: int = 1


def _k_sequence_pairs(k: int, n_max: int):
    """(F(n+1), F(n)) for the recurrence F(n+1) = k*F(n) + F(n-1), n = 0.."""
    prev, cur = 0, 1
    for n in range(n_max + 1):
        yield n, (cur, prev)
        prev, cur = cur, k * cur + prev


def attack_golden(oracle: EncryptionOracle, n_max: int = 512) -> GoldenAttackResult:
    """Recover the exponent of a Fibonacci-power key from one query.

    The top row of the unit-probe ciphertext must be a consecutive Fibonacci
    pair; the smallest matching index is returned (the pair (1, 1) occurs
    only at n = 1, so the classical F(1) = F(2) ambiguity never surfaces).
    """
    c = oracle.query(UNIT_PROBE)
    top = (c.a11, c.a12)
    for n, pair in _k_sequence_pairs(1, n_max):
        if pair == top:
            return GoldenAttackResult(n, pair)
    raise NotGoldenOracle(
        f"top row {top} is not a consecutive Fibonacci pair within n <= {n_max}"
    )


def attack_k_golden(
    oracle: EncryptionOracle, k_max: int = 10, n_max: int = 512
) -> KGoldenAttackResult:
    """Recover (k, n) of a bare-power key [[k,1],[1,0]]^n from one query."""
    c = oracle.query(UNIT_PROBE)
    top = (c.a11, c.a12)
    for k in range(1, k_max + 1):
        for n, pair in _k_sequence_pairs(k, n_max):
            if pair == top:
                return KGoldenAttackResult(k, n, pair)
            if pair[0] > top[0] and pair[1] > top[1]:
                break
    raise NoMatchInBounds(
        f"top row {top} matches no k-sequence pair with k <= {k_max}, n <= {n_max}"
    )


@dataclass(frozen=True)
class ParamBox:
    """Axis-aligned candidate-key search box for brute-force consistency tests."""

    alphas: Sequence[int]
    betas: Sequence[int]
    gammas: Sequence[int]
    deltas: Sequence[int]
    seeds_a: Sequence[int]
    seeds_b: Sequence[int]
    exponents: Sequence[int]


@dataclass(frozen=True)
class ResistanceStats:
    """How many candidate keys stay consistent after each successive query."""

    consistent_counts: tuple[int, ...]
    enumerated: int
    truncated: bool


def measure_unimodular_resistance(
    oracle: EncryptionOracle,
    box: ParamBox,
    queries: Sequence[Mat2] = (UNIT_PROBE,),
    cap: int = 10_000_000,
) -> ResistanceStats:
    """Count oracle-consistent keys in the box after 1..q chosen plaintexts.

    This is a measurement of search-space narrowing, not a security proof.
    Candidates are raw parameter tuples restricted to determinant +/-1; the
    enumeration stops (and is flagged) once `cap` candidates were weighed.
    """
    observed = [oracle.query(p) for p in queries]
    counts = [0] * len(queries)
    enumerated = 0
    truncated = False
    exponents = sorted(set(box.exponents))
    for alpha, beta, gamma, delta, a0, b0 in itertools.product(
        box.alphas, box.betas, box.gammas, box.deltas, box.seeds_a, box.seeds_b
    ):
        u = Mat2(alpha, beta, gamma, delta)
        if u.det() not in (1, -1):
            continue
        m_prev = Mat2(
            alpha * a0 + beta * b0, a0,
            gamma * a0 + delta * b0, b0,
        )
        prev_n = 0
        for n in exponents:
            if enumerated >= cap:
                truncated = True
                break
            enumerated += 1
            for _ in range(n - prev_n):
                m_prev = u @ m_prev
            prev_n = n
            for q, (probe, want) in enumerate(zip(queries, observed)):
                if probe @ m_prev != want:
                    break
                counts[q] += 1
        if truncated:
            break
    return ResistanceStats(tuple(counts), enumerated, truncated)
