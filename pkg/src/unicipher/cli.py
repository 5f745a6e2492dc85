"""Command-line surface: keygen | encrypt | decrypt | verify | corrupt | correct | attack | ratios.

Exit codes: 0 success; 1 on any structured error (category printed to
stderr); `correct` additionally uses 2 when a package is uncorrectable and
3 when only ambiguous repairs were found.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import channel
from .attacks import EncryptionOracle, attack_golden, attack_k_golden
from .cipher import (
    Alphabet,
    CipherKey,
    SeedPair,
    decrypt_message,
    encrypt_message,
    verify_package,
)
from .correction import correct
from .errors import CipherError, NoMatchInBounds, NotGoldenOracle
from .matrix import KeyMatrix, Mat2
from .ratios import RatioParams, fixed_points, ratio_iterate

RATIO_DIGITS_ENV = "UNICIPHER_RATIO_DIGITS"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _alphabet_from_flag(value: str) -> Alphabet:
    if value == "latin":
        return Alphabet.latin()
    if value == "bytes":
        return Alphabet.bytes_mode()
    return Alphabet.custom(value)


def _default_ratio_digits() -> int:
    raw = os.environ.get(RATIO_DIGITS_ENV)
    if raw is None:
        return 2
    try:
        return int(raw)
    except ValueError:
        raise CipherError(f"{RATIO_DIGITS_ENV} must be an integer, got {raw!r}") from None


def _cmd_keygen(args) -> int:
    preset = args.golden or args.k_golden is not None or args.arnolds_cat
    if args.golden:
        u = KeyMatrix(Mat2(1, 1, 1, 0))
    elif args.k_golden is not None:
        u = KeyMatrix(Mat2(args.k_golden, 1, 1, 0))
    elif args.arnolds_cat:
        u = KeyMatrix(Mat2(2, 1, 1, 1))
    else:
        required = (args.alpha, args.beta, args.gamma, args.delta)
        if any(v is None for v in required):
            raise CipherError("provide --alpha/--beta/--gamma/--delta or a preset")
        u = KeyMatrix(Mat2(args.alpha, args.beta, args.gamma, args.delta))
    # presets default to the classical (0, 1) seed, explicit keys to (1, 1)
    a0 = args.seed_a if args.seed_a is not None else (0 if preset else 1)
    b0 = args.seed_b if args.seed_b is not None else 1
    key = CipherKey(u, SeedPair(a0, b0), args.n, _parse_perm(args.perm))
    _write(args.out, channel.dumps_key(key, _alphabet_from_flag(args.alphabet)))
    return 0


def _parse_perm(text: str) -> tuple[int, int, int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise CipherError(f"perm must be four comma-separated integers, got {text!r}") from None
    if len(parts) != 4:
        raise CipherError("perm must have exactly four positions")
    return parts


def _load_key(path: str):
    return channel.loads_key(_read(path))


def _cmd_encrypt(args) -> int:
    key, alphabet = _load_key(args.key)
    message = sys.stdin.read() if args.infile == "-" else args.infile
    if alphabet.symbols is None and isinstance(message, str):
        message = message.encode("utf-8")
    packages = encrypt_message(
        message,
        key,
        alphabet,
        emit_column_ratio=args.emit_column_ratio,
        ratio_digits=args.ratio_digits,
    )
    _write(args.out, channel.dumps_packages(packages))
    return 0


def _cmd_decrypt(args) -> int:
    key, alphabet = _load_key(args.key)
    packages = channel.loads_packages(_read(args.infile))
    message = decrypt_message(packages, key, alphabet)
    if isinstance(message, bytes):
        sys.stdout.buffer.write(message)
    else:
        sys.stdout.write(message + "\n")
    return 0


def _cmd_verify(args) -> int:
    key, _ = _load_key(args.key)
    packages = channel.loads_packages(_read(args.infile))
    all_clean = True
    for pkg in packages:
        result = verify_package(pkg, key)
        rows = ",".join("top" if r == 0 else "bottom" for r in sorted(result.bad_rows))
        detail = f" rows={rows}" if rows else ""
        print(f"block {pkg.block_index}: {result.status.value}{detail}")
        all_clean = all_clean and result.clean
    return 0 if all_clean else 1


def _cmd_corrupt(args) -> int:
    packages = channel.loads_packages(_read(args.infile))
    spec = channel.CorruptionSpec(args.spec, args.seed, args.model, args.max_delta)
    corrupted, diffs = channel.corrupt_packages(packages, spec)
    _write(args.out, channel.dumps_packages(corrupted))
    if args.diff:
        _write(args.diff, channel.dumps_diffs(diffs))
    return 0


def _cmd_correct(args) -> int:
    key, alphabet = _load_key(args.key)
    packages = channel.loads_packages(_read(args.infile))
    bound = alphabet.size if args.use_plaintext_bounds else None
    repaired_packages = []
    worst = 0
    reports = []
    for pkg in packages:
        report = correct(pkg, key, plaintext_bound=bound)
        reports.append(
            {
                "block_index": pkg.block_index,
                "status": "repaired" if report.success else "uncorrectable",
                "assumed_class": report.assumed_class.value,
                "position": list(report.position) if report.position else None,
                "candidates_examined": report.candidates_examined,
                "repaired": [str(e) for e in report.repaired.entries()]
                if report.repaired
                else None,
                "residual_failure": report.residual_failure,
                "attempts": [list(a) for a in report.attempts],
            }
        )
        if report.success:
            repaired_packages.append(
                channel.CipherPackage(
                    report.repaired, pkg.det_p, pkg.column_ratio,
                    pkg.block_index, pkg.pad_len,
                )
            )
            continue
        worst = max(worst, 3 if report.ambiguous else 2)
    print(json.dumps({"reports": reports}, indent=2))
    if args.out and worst == 0:
        _write(args.out, channel.dumps_packages(repaired_packages))
    return worst


def _cmd_attack(args) -> int:
    key, _ = _load_key(args.oracle_key)
    oracle = EncryptionOracle.from_key(key)
    try:
        if args.family == "golden":
            result = attack_golden(oracle, n_max=args.n_max)
            print(json.dumps({"family": "golden", "n": result.n,
                              "matched_pair": list(result.matched_pair)}))
        else:
            result = attack_k_golden(oracle, k_max=args.k_max, n_max=args.n_max)
            print(json.dumps({"family": "kgolden", "k": result.k, "n": result.n,
                              "matched_pair": list(result.matched_pair)}))
    except (NotGoldenOracle, NoMatchInBounds) as exc:
        print(json.dumps({"family": args.family, "recovered": None,
                          "failure": type(exc).__name__, "detail": str(exc)}))
        return 1
    return 0


def _cmd_ratios(args) -> int:
    params = RatioParams(args.t, args.d, Fraction(args.a0))
    orbit = ratio_iterate(params, args.steps)
    fp = fixed_points(args.t, args.d)
    print(f"fixed point: {fp.phi_plus_decimal(12)}")
    print(f"{'step':>4}  {'ratio':>24}  {'decimal':>18}")
    for i, a in enumerate(orbit):
        print(f"{i:>4}  {str(a):>24}  {float(a):>18.12f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unicipher",
        description="Unimodular matrix cipher with error detection and correction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="emit a key file")
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--gamma", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--seed-a", type=int, default=None)
    p.add_argument("--seed-b", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", default="0,1,2,3")
    p.add_argument("--alphabet", default="latin",
                   help="latin, bytes, or an explicit symbol string")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--golden", action="store_true")
    group.add_argument("--k-golden", type=int, default=None, metavar="K")
    group.add_argument("--arnolds-cat", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt text into a packages file")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True,
                   help="literal message text, or - for stdin")
    p.add_argument("--out", default="-")
    p.add_argument("--emit-column-ratio", action="store_true")
    p.add_argument("--ratio-digits", type=int, default=None)
    p.set_defaults(func=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a packages file")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_decrypt)

    p = sub.add_parser("verify", help="run the check numbers against each package")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("corrupt", help="inject seeded errors into a packages file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--spec", required=True, choices=channel.CORRUPTION_MODES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--model", default="additive", choices=("additive", "digit-flip"))
    p.add_argument("--max-delta", type=int, default=None)
    p.add_argument("--diff", default=None, help="sidecar file recording the ground truth")
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("correct", help="repair corrupted packages")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None, help="write repaired packages here")
    p.add_argument("--use-plaintext-bounds", action="store_true",
                   help="filter candidates by the alphabet-implied entry ranges")
    p.set_defaults(func=_cmd_correct)

    p = sub.add_parser("attack", help="chosen-plaintext attack against a key file")
    p.add_argument("--oracle-key", required=True)
    p.add_argument("--family", required=True, choices=("golden", "kgolden"))
    p.add_argument("--n-max", type=int, default=512)
    p.add_argument("--k-max", type=int, default=10)
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("ratios", help="print the exact ratio orbit a(n+1) = t - d/a(n)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a0", required=True, help="rational, e.g. 3/2 or 1.5")
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=_cmd_ratios)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "ratio_digits", "absent") is None:
        args.ratio_digits = _default_ratio_digits()
    try:
        return args.func(args)
    except CipherError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
