import json

import pytest

from unicipher.channel import loads_key, loads_packages
from unicipher.cli import main
from unicipher.matrix import Mat2


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestKeygen:
    def test_golden_preset(self, tmp_path, capsys):
        key_file = tmp_path / "key.json"
        code, _, _ = run(capsys, "keygen", "--golden", "--n", "10", "--out", str(key_file))
        assert code == 0
        key, alphabet = loads_key(key_file.read_text())
        assert key.u.m == Mat2(1, 1, 1, 0)
        assert (key.seed.a0, key.seed.b0) == (0, 1)
        assert key.n == 10

    def test_explicit_key(self, tmp_path, capsys):
        key_file = tmp_path / "key.json"
        code, _, _ = run(
            capsys, "keygen", "--alpha", "2", "--beta", "1", "--gamma", "1",
            "--delta", "1", "--seed-a", "3", "--seed-b", "5", "--n", "6",
            "--perm", "1,0,3,2", "--out", str(key_file),
        )
        assert code == 0
        key, _ = loads_key(key_file.read_text())
        assert key.u.m == Mat2(2, 1, 1, 1)
        assert (key.seed.a0, key.seed.b0) == (3, 5)
        assert key.perm == (1, 0, 3, 2)

    def test_invalid_key_is_reported(self, capsys):
        code, _, err = run(
            capsys, "keygen", "--alpha", "2", "--beta", "0", "--gamma", "0",
            "--delta", "1", "--n", "4",
        )
        assert code == 1
        assert "error[InvalidKey]" in err


class TestPipelines:
    def make_key(self, tmp_path, capsys, *extra):
        key_file = tmp_path / "key.json"
        code, _, _ = run(capsys, "keygen", "--golden", "--n", "10",
                         "--out", str(key_file), *extra)
        assert code == 0
        return key_file

    def test_encrypt_matches_worked_example(self, tmp_path, capsys):
        key_file = self.make_key(tmp_path, capsys)
        pkg_file = tmp_path / "packages.json"
        code, _, _ = run(capsys, "encrypt", "--key", str(key_file), "--in", "MATH",
                         "--out", str(pkg_file))
        assert code == 0
        (pkg,) = loads_packages(pkg_file.read_text())
        assert pkg.c == Mat2(1068, 660, 2076, 1283)
        assert pkg.det_p == 84

    def test_encrypt_decrypt_identity(self, tmp_path, capsys):
        key_file = self.make_key(tmp_path, capsys)
        pkg_file = tmp_path / "packages.json"
        run(capsys, "encrypt", "--key", str(key_file), "--in", "ATTACKATDAWN",
            "--out", str(pkg_file))
        code, out, _ = run(capsys, "decrypt", "--key", str(key_file),
                           "--in", str(pkg_file))
        assert code == 0
        assert out.strip() == "ATTACKATDAWN"

    def test_verify_clean_and_corrupt(self, tmp_path, capsys):
        key_file = self.make_key(tmp_path, capsys)
        pkg_file = tmp_path / "packages.json"
        bad_file = tmp_path / "bad.json"
        run(capsys, "encrypt", "--key", str(key_file), "--in", "MATH",
            "--out", str(pkg_file))
        code, out, _ = run(capsys, "verify", "--key", str(key_file), "--in", str(pkg_file))
        assert code == 0 and "clean" in out
        run(capsys, "corrupt", "--in", str(pkg_file), "--out", str(bad_file),
            "--spec", "single", "--seed", "7")
        code, out, _ = run(capsys, "verify", "--key", str(key_file), "--in", str(bad_file))
        assert code == 1

    def test_corrupt_then_correct_then_decrypt(self, tmp_path, capsys):
        key_file = self.make_key(tmp_path, capsys)
        pkg_file = tmp_path / "packages.json"
        bad_file = tmp_path / "bad.json"
        diff_file = tmp_path / "bad.diff.json"
        fixed_file = tmp_path / "fixed.json"
        run(capsys, "encrypt", "--key", str(key_file), "--in", "GOLDENMATRIX",
            "--out", str(pkg_file), "--emit-column-ratio")
        code, _, _ = run(capsys, "corrupt", "--in", str(pkg_file), "--out", str(bad_file),
                         "--spec", "diagonal", "--seed", "11", "--diff", str(diff_file))
        assert code == 0
        assert json.loads(diff_file.read_text())["diffs"][0]["mode"] == "diagonal"
        code, out, _ = run(capsys, "correct", "--key", str(key_file),
                           "--in", str(bad_file), "--out", str(fixed_file))
        assert code == 0
        reports = json.loads(out)["reports"]
        assert all(r["status"] == "repaired" for r in reports)
        code, out, _ = run(capsys, "decrypt", "--key", str(key_file), "--in", str(fixed_file))
        assert code == 0 and out.strip() == "GOLDENMATRIX"

    def test_correct_exit_codes(self, tmp_path, capsys):
        key_file = self.make_key(tmp_path, capsys)
        pkg_file = tmp_path / "packages.json"
        bad_file = tmp_path / "bad.json"
        run(capsys, "encrypt", "--key", str(key_file), "--in", "MATH",
            "--out", str(pkg_file))
        # clean input exits 0
        code, _, _ = run(capsys, "correct", "--key", str(key_file), "--in", str(pkg_file))
        assert code == 0
        # a row error without a transmitted ratio cannot be repaired
        run(capsys, "corrupt", "--in", str(pkg_file), "--out", str(bad_file),
            "--spec", "row_top", "--seed", "3")
        code, out, _ = run(capsys, "correct", "--key", str(key_file), "--in", str(bad_file))
        assert code == 2
        report = json.loads(out)["reports"][0]
        assert report["status"] == "uncorrectable"
        assert any("column-ratio-missing" in a[1] for a in report["attempts"])

    def test_ratio_digits_env_default(self, tmp_path, capsys, monkeypatch):
        key_file = tmp_path / "key.json"
        run(capsys, "keygen", "--arnolds-cat", "--n", "4", "--out", str(key_file))
        pkg_file = tmp_path / "packages.json"
        monkeypatch.setenv("UNICIPHER_RATIO_DIGITS", "4")
        code, _, _ = run(capsys, "encrypt", "--key", str(key_file), "--in", "OXEN",
                         "--out", str(pkg_file), "--emit-column-ratio")
        assert code == 0
        (pkg,) = loads_packages(pkg_file.read_text())
        assert pkg.column_ratio.digits == 4

    def test_unknown_symbol_error_category(self, tmp_path, capsys):
        key_file = self.make_key(tmp_path, capsys)
        code, _, err = run(capsys, "encrypt", "--key", str(key_file), "--in", "math")
        assert code == 1
        assert "error[UnknownSymbol]" in err


class TestAttackCommand:
    def test_golden_attack(self, tmp_path, capsys):
        key_file = tmp_path / "key.json"
        run(capsys, "keygen", "--golden", "--n", "17", "--out", str(key_file))
        code, out, _ = run(capsys, "attack", "--oracle-key", str(key_file),
                           "--family", "golden")
        assert code == 0
        assert json.loads(out)["n"] == 17

    def test_kgolden_attack(self, tmp_path, capsys):
        key_file = tmp_path / "key.json"
        run(capsys, "keygen", "--k-golden", "3", "--n", "8", "--out", str(key_file))
        code, out, _ = run(capsys, "attack", "--oracle-key", str(key_file),
                           "--family", "kgolden")
        assert code == 0
        payload = json.loads(out)
        assert (payload["k"], payload["n"]) == (3, 8)

    def test_attack_fails_against_seeded_key(self, tmp_path, capsys):
        key_file = tmp_path / "key.json"
        run(capsys, "keygen", "--arnolds-cat", "--n", "9", "--out", str(key_file))
        code, out, _ = run(capsys, "attack", "--oracle-key", str(key_file),
                           "--family", "golden")
        assert code == 1
        assert json.loads(out)["failure"] == "NotGoldenOracle"


class TestRatiosCommand:
    def test_orbit_table(self, capsys):
        code, out, _ = run(capsys, "ratios", "--t", "1", "--d", "-1",
                           "--a0", "1.5", "--steps", "5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("fixed point: 1.618033988749")
        assert len(lines) == 2 + 6  # header rows plus orbit
        last = float(lines[-1].split()[-1])
        assert abs(last - 1.618033988749895) < 2e-3

    def test_rational_a0(self, capsys):
        code, out, _ = run(capsys, "ratios", "--t", "3", "--d", "1",
                           "--a0", "3/2", "--steps", "3")
        assert code == 0
        assert "7/3" in out
