"""On-disk formats and the seeded noisy-channel corrupter.

Key and package files are canonical JSON: fixed field order, two-space
indent, trailing newline, and every payload integer (matrix entries, seeds,
check numbers) written as a decimal string so values of any magnitude
survive untouched.  parse -> serialize is byte-identical.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .cipher import Alphabet, CipherKey, CipherPackage, ColumnRatioCheck
from .errors import FormatError
from .matrix import KeyMatrix, Mat2, SeedPair

KEY_FORMAT_VERSION = 1
PACKAGE_FORMAT_VERSION = 1

CORRUPTION_MODES = (
    "single",
    "diagonal",
    "antidiagonal",
    "column_left",
    "column_right",
    "row_top",
    "row_bottom",
    "random",
)

_MODE_POSITIONS = {
    "diagonal": ((0, 0), (1, 1)),
    "antidiagonal": ((0, 1), (1, 0)),
    "column_left": ((0, 0), (1, 0)),
    "column_right": ((0, 1), (1, 1)),
    "row_top": ((0, 0), (0, 1)),
    "row_bottom": ((1, 0), (1, 1)),
}


def _dump(document: dict) -> str:
    return json.dumps(document, indent=2) + "\n"


def _need(document: dict, field: str):
    try:
        return document[field]
    except (KeyError, TypeError):
        raise FormatError(f"missing field {field!r}") from None


def _parse_int(value) -> int:
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise FormatError(f"not a decimal integer: {value!r}") from None
    raise FormatError(f"expected a decimal string, got {type(value).__name__}")


def _check_version(document: dict, expected: int) -> None:
    version = _need(document, "version")
    if version != expected:
        raise FormatError(f"unsupported format version {version!r}")


# --- keys -------------------------------------------------------------------


def _alphabet_to_dict(alphabet: Alphabet) -> dict:
    if alphabet.symbols is None:
        return {"kind": "bytes"}
    if alphabet == Alphabet.latin():
        return {"kind": "latin"}
    return {"kind": "custom", "symbols": alphabet.symbols}


def _alphabet_from_dict(document: dict) -> Alphabet:
    kind = _need(document, "kind")
    if kind == "latin":
        return Alphabet.latin()
    if kind == "bytes":
        return Alphabet.bytes_mode()
    if kind == "custom":
        return Alphabet.custom(_need(document, "symbols"))
    raise FormatError(f"unknown alphabet kind {kind!r}")


def key_to_dict(key: CipherKey, alphabet: Alphabet | None = None) -> dict:
    alphabet = alphabet if alphabet is not None else Alphabet.latin()
    return {
        "version": KEY_FORMAT_VERSION,
        "u": {
            "alpha": str(key.u.alpha),
            "beta": str(key.u.beta),
            "gamma": str(key.u.gamma),
            "delta": str(key.u.delta),
        },
        "seed": {"a0": str(key.seed.a0), "b0": str(key.seed.b0)},
        "n": key.n,
        "perm": list(key.perm),
        "alphabet": _alphabet_to_dict(alphabet),
    }


def key_from_dict(document: dict) -> tuple[CipherKey, Alphabet]:
    _check_version(document, KEY_FORMAT_VERSION)
    u = _need(document, "u")
    seed = _need(document, "seed")
    matrix = Mat2(
        _parse_int(_need(u, "alpha")),
        _parse_int(_need(u, "beta")),
        _parse_int(_need(u, "gamma")),
        _parse_int(_need(u, "delta")),
    )
    n = _need(document, "n")
    if not isinstance(n, int):
        raise FormatError("n must be a plain integer")
    perm = _need(document, "perm")
    key = CipherKey(
        KeyMatrix(matrix),
        SeedPair(_parse_int(_need(seed, "a0")), _parse_int(_need(seed, "b0"))),
        n,
        tuple(perm),
    )
    return key, _alphabet_from_dict(_need(document, "alphabet"))


def dumps_key(key: CipherKey, alphabet: Alphabet | None = None) -> str:
    return _dump(key_to_dict(key, alphabet))


def loads_key(text: str) -> tuple[CipherKey, Alphabet]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return key_from_dict(document)


# --- packages ---------------------------------------------------------------


def package_to_dict(pkg: CipherPackage) -> dict:
    ratio = None
    if pkg.column_ratio is not None:
        ratio = {
            "orientation": pkg.column_ratio.orientation,
            "value": pkg.column_ratio.value,
            "digits": pkg.column_ratio.digits,
        }
    return {
        "c": [str(e) for e in pkg.c.entries()],
        "det_p": str(pkg.det_p),
        "column_ratio": ratio,
        "block_index": pkg.block_index,
        "pad_len": pkg.pad_len,
    }


def package_from_dict(document: dict) -> CipherPackage:
    entries = _need(document, "c")
    if not isinstance(entries, list) or len(entries) != 4:
        raise FormatError("c must be a list of four decimal strings")
    ratio = document.get("column_ratio")
    check = None
    if ratio is not None:
        check = ColumnRatioCheck(
            _need(ratio, "orientation"), _need(ratio, "value"), _need(ratio, "digits")
        )
    return CipherPackage(
        Mat2(*(_parse_int(e) for e in entries)),
        _parse_int(_need(document, "det_p")),
        check,
        _need(document, "block_index"),
        _need(document, "pad_len"),
    )


def dumps_packages(packages) -> str:
    return _dump(
        {
            "version": PACKAGE_FORMAT_VERSION,
            "packages": [package_to_dict(p) for p in packages],
        }
    )


def loads_packages(text: str) -> tuple[CipherPackage, ...]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    _check_version(document, PACKAGE_FORMAT_VERSION)
    packages = _need(document, "packages")
    if not isinstance(packages, list):
        raise FormatError("packages must be a list")
    return tuple(package_from_dict(p) for p in packages)


# --- corruption -------------------------------------------------------------


@dataclass(frozen=True)
class CorruptionSpec:
    """Deterministic fault model: same seed, spec, and input => same output."""

    mode: str
    seed: int
    model: str = "additive"
    max_delta: int | None = None

    def __post_init__(self):
        if self.mode not in CORRUPTION_MODES:
            raise ValueError(f"unknown corruption mode {self.mode!r}")
        if self.model not in ("additive", "digit-flip"):
            raise ValueError(f"unknown magnitude model {self.model!r}")


@dataclass(frozen=True)
class CorruptionDiff:
    """Ground truth for test oracles: what changed where."""

    block_index: int
    mode: str
    entries: tuple[tuple[tuple[int, int], int, int], ...]  # (pos, old, new)


def _mutate(value: int, spec: CorruptionSpec, rng: random.Random) -> int:
    if spec.model == "digit-flip":
        digits = list(str(value))
        i = rng.randrange(len(digits))
        choices = [d for d in "0123456789" if d != digits[i]]
        digits[i] = rng.choice(choices)
        return int("".join(digits))
    bound = spec.max_delta if spec.max_delta is not None else max(1, value // 2)
    delta = rng.randint(1, max(1, bound)) * rng.choice((1, -1))
    mutated = value + delta
    if mutated < 0:
        mutated = value + abs(delta)  # keep entries non-negative, still != value
    return mutated


def corrupt_package(
    pkg: CipherPackage, spec: CorruptionSpec, rng: random.Random | None = None
) -> tuple[CipherPackage, CorruptionDiff]:
    """Mutate exactly the entries the mode dictates; checks stay untouched.

    Every mutated entry is guaranteed to differ from the original.
    """
    rng = rng if rng is not None else random.Random(spec.seed * 1_000_003 + pkg.block_index)
    mode = spec.mode
    if mode == "random":
        mode = rng.choice(CORRUPTION_MODES[:-1])
    if mode == "single":
        positions = (rng.choice(((0, 0), (0, 1), (1, 0), (1, 1))),)
    else:
        positions = _MODE_POSITIONS[mode]
    rows = [list(r) for r in pkg.c.rows()]
    changes = []
    for pos in positions:
        old = rows[pos[0]][pos[1]]
        new = _mutate(old, spec, rng)
        rows[pos[0]][pos[1]] = new
        changes.append((pos, old, new))
    corrupted = CipherPackage(
        Mat2.from_rows(rows), pkg.det_p, pkg.column_ratio, pkg.block_index, pkg.pad_len
    )
    return corrupted, CorruptionDiff(pkg.block_index, mode, tuple(changes))


def corrupt_packages(
    packages, spec: CorruptionSpec
) -> tuple[tuple[CipherPackage, ...], tuple[CorruptionDiff, ...]]:
    out, diffs = [], []
    for pkg in packages:
        corrupted, diff = corrupt_package(pkg, spec)
        out.append(corrupted)
        diffs.append(diff)
    return tuple(out), tuple(diffs)


def diffs_to_dict(diffs) -> dict:
    return {
        "version": PACKAGE_FORMAT_VERSION,
        "diffs": [
            {
                "block_index": d.block_index,
                "mode": d.mode,
                "entries": [
                    {"pos": list(pos), "old": str(old), "new": str(new)}
                    for pos, old, new in d.entries
                ],
            }
            for d in diffs
        ],
    }


def dumps_diffs(diffs) -> str:
    return _dump(diffs_to_dict(diffs))
