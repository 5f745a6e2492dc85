"""Block cipher on 2x2 integer matrices: C = P @ M(n).

A message is chopped into 4-symbol blocks, each block permuted into a
plaintext matrix and multiplied by the coding matrix.  det P rides along as
a check number; optionally a rounded column ratio does too.  Decryption
multiplies by the exact adjugate and demands clean divisibility, so any
corruption that survives the determinant check still tends to surface as a
non-integral or negative plaintext.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

from .errors import (
    InvalidKey,
    NegativePlaintext,
    NonIntegralPlaintext,
    UnknownSymbol,
    ZeroDenominator,
    ZeroSequenceEntry,
)
from .matrix import (
    DEFAULT_MAX_EXPONENT,
    CodingMatrix,
    KeyMatrix,
    Mat2,
    SeedPair,
    build_coding_matrix,
    mu_of_seed,
)
from .ratios import BOTTOM_OVER_TOP, column_ratio, round_half_even, row_ratio_interval

IDENTITY_PERM = (0, 1, 2, 3)


def _check_perm(perm) -> tuple[int, int, int, int]:
    p = tuple(perm)
    if sorted(p) != [0, 1, 2, 3]:
        raise InvalidKey(f"perm must be a permutation of 0..3, got {perm}")
    return p


@dataclass(frozen=True)
class Alphabet:
    """Symbol table mapping message units to indices 0..size-1.

    symbols=None selects byte mode: messages are bytes, indices 0..255.
    """

    symbols: str | None = string.ascii_uppercase

    def __post_init__(self):
        if self.symbols is not None:
            if len(self.symbols) < 2:
                raise ValueError("alphabet needs at least two symbols")
            if len(set(self.symbols)) != len(self.symbols):
                raise ValueError("alphabet symbols must be unique")

    @classmethod
    def latin(cls) -> "Alphabet":
        return cls(string.ascii_uppercase)

    @classmethod
    def bytes_mode(cls) -> "Alphabet":
        return cls(None)

    @classmethod
    def custom(cls, symbols: str) -> "Alphabet":
        return cls(symbols)

    @property
    def size(self) -> int:
        return 256 if self.symbols is None else len(self.symbols)

    def indices(self, message) -> list[int]:
        if self.symbols is None:
            data = message.encode("utf-8") if isinstance(message, str) else bytes(message)
            return list(data)
        out = []
        for ch in message:
            i = self.symbols.find(ch)
            if i < 0:
                raise UnknownSymbol(f"symbol {ch!r} is not in the alphabet")
            out.append(i)
        return out

    def render(self, indices) -> str | bytes:
        if self.symbols is None:
            bad = [i for i in indices if not 0 <= i <= 255]
            if bad:
                raise UnknownSymbol(f"index {bad[0]} is not a byte value")
            return bytes(indices)
        out = []
        for i in indices:
            if not 0 <= i < len(self.symbols):
                raise UnknownSymbol(f"index {i} is outside the alphabet")
            out.append(self.symbols[i])
        return "".join(out)


@dataclass(frozen=True)
class PlaintextMatrix:
    """Non-negative 2x2 block of symbol indices (or raw numbers)."""

    p: Mat2
    alphabet_size: int = 26

    def __post_init__(self):
        if any(e < 0 for e in self.p.entries()):
            raise ValueError("plaintext entries must be non-negative")
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")

    @property
    def in_alphabet(self) -> bool:
        return all(e < self.alphabet_size for e in self.p.entries())

    @property
    def zero_rows(self) -> tuple[int, ...]:
        return tuple(i for i, row in enumerate(self.p.rows()) if row == (0, 0))

    @property
    def is_degenerate(self) -> bool:
        """A zero row survives encryption as a zero row, so its ratio check is vacuous."""
        return bool(self.zero_rows)


@dataclass(frozen=True)
class ColumnRatioCheck:
    """Rounded column ratio as transmitted: orientation, decimal string, digits."""

    orientation: str
    value: str
    digits: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.value)

    @property
    def half_ulp(self) -> Fraction:
        return Fraction(1, 2 * 10 ** self.digits)


@dataclass(frozen=True)
class CipherPackage:
    """Ciphertext block plus its check numbers and framing."""

    c: Mat2
    det_p: int
    column_ratio: ColumnRatioCheck | None = None
    block_index: int = 0
    pad_len: int = 0

    def __post_init__(self):
        if not 0 <= self.pad_len <= 3:
            raise ValueError("pad_len must be in 0..3")
        if self.block_index < 0:
            raise ValueError("block_index must be non-negative")


@dataclass(frozen=True)
class CipherKey:
    """Secret key: multiplier matrix, sequence seed, exponent, block permutation."""

    u: KeyMatrix
    seed: SeedPair
    n: int
    perm: tuple[int, int, int, int] = IDENTITY_PERM

    def __post_init__(self):
        object.__setattr__(self, "perm", _check_perm(self.perm))
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise InvalidKey("exponent must be a non-negative integer")
        if self.n > DEFAULT_MAX_EXPONENT:
            raise InvalidKey(f"exponent {self.n} exceeds the cap {DEFAULT_MAX_EXPONENT}")
        if (self.seed.a0 == 0 or self.seed.b0 == 0) and self.n < 1:
            raise InvalidKey("a seed with a zero component needs n >= 1")
        if mu_of_seed(self.u, self.seed) == 0:
            raise InvalidKey("seed gives a singular index-0 coding matrix")

    @cached_property
    def coding_matrix(self) -> CodingMatrix:
        return build_coding_matrix(self.u, self.seed, self.n)

    @classmethod
    def golden(cls, n: int, perm=IDENTITY_PERM) -> "CipherKey":
        return cls(KeyMatrix(Mat2(1, 1, 1, 0)), SeedPair(0, 1), n, perm)

    @classmethod
    def k_golden(cls, k: int, n: int, perm=IDENTITY_PERM) -> "CipherKey":
        return cls(KeyMatrix(Mat2(k, 1, 1, 0)), SeedPair(0, 1), n, perm)

    @classmethod
    def arnolds_cat(cls, n: int, perm=IDENTITY_PERM) -> "CipherKey":
        return cls(KeyMatrix(Mat2(2, 1, 1, 1)), SeedPair(0, 1), n, perm)


def encode_text(
    message, alphabet: Alphabet | None = None, perm=IDENTITY_PERM
) -> tuple[tuple[PlaintextMatrix, ...], int]:
    """Split a message into permuted 4-symbol blocks.

    The final short block is padded with symbol index 0; the pad length is
    returned so decryption can strip it.
    """
    alphabet = alphabet if alphabet is not None else Alphabet.latin()
    perm = _check_perm(perm)
    idx = alphabet.indices(message)
    pad = (-len(idx)) % 4
    idx.extend([0] * pad)
    blocks = []
    for start in range(0, len(idx), 4):
        slots = [0, 0, 0, 0]
        for pos in range(4):
            slots[perm[pos]] = idx[start + pos]
        blocks.append(PlaintextMatrix(Mat2(*slots), alphabet.size))
    return tuple(blocks), pad


def decode_text(
    blocks, pad_len: int, alphabet: Alphabet | None = None, perm=IDENTITY_PERM
):
    """Inverse of encode_text: un-permute blocks and strip the final padding."""
    alphabet = alphabet if alphabet is not None else Alphabet.latin()
    perm = _check_perm(perm)
    indices: list[int] = []
    for block in blocks:
        entries = block.p.entries()
        indices.extend(entries[perm[pos]] for pos in range(4))
    if pad_len:
        indices = indices[:-pad_len]
    return alphabet.render(indices)


def encrypt(
    p: PlaintextMatrix,
    key: CipherKey,
    *,
    emit_column_ratio: bool = False,
    ratio_digits: int = 2,
    block_index: int = 0,
    pad_len: int = 0,
) -> CipherPackage:
    """C = P @ M(n), det P as check number, optional rounded column ratio.

    The ratio check is silently omitted when a top-row entry is zero.
    """
    cm = key.coding_matrix
    c = p.p @ cm.matrix
    check = None
    if emit_column_ratio:
        try:
            ratios = column_ratio(c)
        except ZeroDenominator:
            check = None
        else:
            check = ColumnRatioCheck(
                BOTTOM_OVER_TOP, round_half_even(ratios.left, ratio_digits), ratio_digits
            )
    return CipherPackage(c, p.p.det(), check, block_index, pad_len)


def decrypt(pkg: CipherPackage, key: CipherKey, alphabet_size: int = 26) -> PlaintextMatrix:
    """P = C @ adj(M(n)) / det(M(n)), demanding exact divisibility."""
    adj, det = key.coding_matrix.matrix.inverse_exact()
    raw = pkg.c @ adj
    values = []
    for e in raw.entries():
        q, r = divmod(e, det)
        if r != 0:
            raise NonIntegralPlaintext(
                f"entry {e} is not divisible by det {det}; ciphertext is corrupt"
            )
        values.append(q)
    if any(v < 0 for v in values):
        raise NegativePlaintext(
            "decryption produced negative entries; ciphertext corrupt or key wrong"
        )
    return PlaintextMatrix(Mat2(*values), alphabet_size)


class VerifyStatus(Enum):
    CLEAN = "clean"
    DETERMINANT_MISMATCH = "determinant-mismatch"
    INTERVAL_VIOLATION = "interval-violation"
    BOTH = "both"


@dataclass(frozen=True)
class VerifyResult:
    status: VerifyStatus
    bad_rows: frozenset[int]
    det_observed: int
    det_expected: int
    interval_checked: bool = True

    @property
    def clean(self) -> bool:
        return self.status is VerifyStatus.CLEAN


def verify_package(pkg: CipherPackage, key: CipherKey) -> VerifyResult:
    """Determinant check plus the per-row ratio interval check.

    Rows that are entirely zero are vacuously fine (a zero plaintext row
    encrypts to a zero row).  The interval check is skipped when the coding
    sequences are not yet positive (tiny n with a zero-component seed).
    """
    cm = key.coding_matrix
    expected = cm.det * pkg.det_p
    observed = pkg.c.det()
    bad: list[int] = []
    checked = True
    try:
        lo, hi = row_ratio_interval(cm)
    except ZeroSequenceEntry:
        checked = False
    if checked:
        for i, (c1, c2) in enumerate(pkg.c.rows()):
            if c1 == 0 and c2 == 0:
                continue
            if c1 < 0 or c2 <= 0 or not lo <= Fraction(c1, c2) <= hi:
                bad.append(i)
    det_ok = observed == expected
    if det_ok and not bad:
        status = VerifyStatus.CLEAN
    elif det_ok:
        status = VerifyStatus.INTERVAL_VIOLATION
    elif bad:
        status = VerifyStatus.BOTH
    else:
        status = VerifyStatus.DETERMINANT_MISMATCH
    return VerifyResult(status, frozenset(bad), observed, expected, checked)


def encrypt_message(
    message,
    key: CipherKey,
    alphabet: Alphabet | None = None,
    *,
    emit_column_ratio: bool = False,
    ratio_digits: int = 2,
) -> tuple[CipherPackage, ...]:
    """Encode, then encrypt block by block; blocks are independent."""
    blocks, pad = encode_text(message, alphabet, key.perm)
    packages = []
    for i, block in enumerate(blocks):
        packages.append(
            encrypt(
                block,
                key,
                emit_column_ratio=emit_column_ratio,
                ratio_digits=ratio_digits,
                block_index=i,
                pad_len=pad if i == len(blocks) - 1 else 0,
            )
        )
    return tuple(packages)


def decrypt_message(packages, key: CipherKey, alphabet: Alphabet | None = None):
    """Decrypt, reorder by block index, decode, strip final padding."""
    alphabet = alphabet if alphabet is not None else Alphabet.latin()
    ordered = sorted(packages, key=lambda pkg: pkg.block_index)
    blocks = [decrypt(pkg, key, alphabet.size) for pkg in ordered]
    pad = ordered[-1].pad_len if ordered else 0
    return decode_text(blocks, pad, alphabet, key.perm)
