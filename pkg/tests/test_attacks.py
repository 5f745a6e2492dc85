import random

import pytest

from unicipher.attacks import (
    UNIT_PROBE,
    EncryptionOracle,
    ParamBox,
    attack_golden,
    attack_k_golden,
    measure_unimodular_resistance,
)
from unicipher.cipher import CipherKey
from unicipher.errors import NoMatchInBounds, NotGoldenOracle
from unicipher.matrix import Mat2
from unicipher.sampling import random_cipher_key


def k_sequence(k, count):
    seq = [0, 1]
    while len(seq) < count:
        seq.append(k * seq[-1] + seq[-2])
    return seq


class TestGoldenAttack:
    def test_unit_probe_exposes_coding_row(self):
        oracle = EncryptionOracle.from_key(CipherKey.golden(10))
        c = oracle.query(UNIT_PROBE)
        assert (c.a11, c.a12) == (89, 55)
        assert (c.a21, c.a22) == (0, 0)

    def test_recovers_n_ten(self):
        result = attack_golden(EncryptionOracle.from_key(CipherKey.golden(10)))
        assert result.n == 10 and result.matched_pair == (89, 55)
        assert result.queries == 1

    def test_n_one_resolves_to_smallest(self):
        result = attack_golden(EncryptionOracle.from_key(CipherKey.golden(1)))
        assert result.n == 1 and result.matched_pair == (1, 1)

    def test_cat_oracle_is_not_golden(self):
        oracle = EncryptionOracle.from_key(CipherKey.arnolds_cat(4))
        assert oracle.query(UNIT_PROBE).rows()[0] == (55, 21)
        with pytest.raises(NotGoldenOracle):
            attack_golden(oracle)

    def test_every_exponent_in_range(self):
        for n in range(2, 61):
            result = attack_golden(EncryptionOracle.from_key(CipherKey.golden(n)))
            assert result.n == n


class TestKGoldenAttack:
    def test_k2_n3(self):
        seq = k_sequence(2, 6)
        assert seq[:5] == [0, 1, 2, 5, 12]
        result = attack_k_golden(EncryptionOracle.from_key(CipherKey.k_golden(2, 3)))
        assert (result.k, result.n) == (2, 3)
        assert result.matched_pair == (12, 5)

    def test_k1_matches_golden(self):
        oracle = EncryptionOracle.from_key(CipherKey.golden(9))
        assert attack_k_golden(oracle).n == attack_golden(oracle).n == 9

    def test_unimodular_oracle_defeats_it(self):
        oracle = EncryptionOracle.from_key(CipherKey.arnolds_cat(4))
        with pytest.raises(NoMatchInBounds):
            attack_k_golden(oracle, k_max=10, n_max=50)

    def test_grid_sweep(self):
        for k in range(1, 8):
            for n in (2, 5, 11):
                oracle = EncryptionOracle.from_key(CipherKey.k_golden(k, n))
                result = attack_k_golden(oracle)
                assert (result.k, result.n) == (k, n)


class TestUnimodularResistance:
    def test_seeded_keys_yield_failures_not_wrong_answers(self):
        rng = random.Random(31337)
        for _ in range(40):
            key = random_cipher_key(rng, n_lo=2, n_hi=20, allow_bare_power=False)
            assert key.u.delta >= 1
            oracle = EncryptionOracle.from_key(key)
            with pytest.raises(NotGoldenOracle):
                attack_golden(oracle, n_max=80)
            with pytest.raises(NoMatchInBounds):
                attack_k_golden(oracle, k_max=10, n_max=60)

    def test_golden_box_pins_one_candidate(self):
        oracle = EncryptionOracle.from_key(CipherKey.golden(10))
        box = ParamBox((1,), (1,), (1,), (0,), (0,), (1,), range(0, 41))
        stats = measure_unimodular_resistance(oracle, box)
        assert stats.consistent_counts == (1,)
        assert not stats.truncated

    def test_empty_box(self):
        oracle = EncryptionOracle.from_key(CipherKey.golden(4))
        box = ParamBox((), (1,), (1,), (0,), (0,), (1,), range(4))
        stats = measure_unimodular_resistance(oracle, box)
        assert stats.consistent_counts == (0,)
        assert stats.enumerated == 0

    def test_wider_box_is_a_measurement(self):
        key = CipherKey.arnolds_cat(4)
        oracle = EncryptionOracle.from_key(key)
        box = ParamBox(range(1, 4), range(0, 3), range(0, 3), range(0, 3),
                       range(0, 3), range(1, 3), range(1, 7))
        stats = measure_unimodular_resistance(oracle, box)
        assert stats.consistent_counts[0] >= 1  # the true key is in the box
        assert stats.enumerated > 0

    def test_second_query_narrows(self):
        key = CipherKey.arnolds_cat(4)
        oracle = EncryptionOracle.from_key(key)
        probes = (UNIT_PROBE, Mat2(0, 0, 1, 0))
        box = ParamBox(range(0, 4), range(0, 4), range(0, 4), range(0, 4),
                       range(0, 3), range(0, 3), range(1, 7))
        stats = measure_unimodular_resistance(oracle, box, queries=probes)
        assert stats.consistent_counts[1] <= stats.consistent_counts[0]
        assert stats.consistent_counts[1] >= 1

    def test_cap_truncates(self):
        oracle = EncryptionOracle.from_key(CipherKey.arnolds_cat(4))
        box = ParamBox(range(0, 6), range(0, 6), range(0, 6), range(0, 6),
                       range(0, 6), range(0, 6), range(1, 9))
        stats = measure_unimodular_resistance(oracle, box, cap=500)
        assert stats.truncated
        assert stats.enumerated >= 500
