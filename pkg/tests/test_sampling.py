import numpy as np
import pytest

import mrpower as mp
from mrpower.errors import InvalidRank


class TestSeededRng:
    def test_splitmix_is_deterministic(self):
        assert mp.splitmix64(42, 0) == mp.splitmix64(42, 0)
        assert mp.splitmix64(42, 0) != mp.splitmix64(42, 1)
        assert mp.splitmix64(42, 0) != mp.splitmix64(43, 0)

    def test_same_seed_replays_bits(self):
        a = mp.haar_unitary(4, mp.SeededRng(7))
        b = mp.haar_unitary(4, mp.SeededRng(7))
        assert np.array_equal(a, b)

    def test_spawned_streams_differ(self):
        root = mp.SeededRng(7)
        a = mp.haar_unitary(4, root.spawn(0))
        b = mp.haar_unitary(4, root.spawn(1))
        assert not np.allclose(a, b)

    def test_channel_reproducibility(self):
        first = mp.random_channel(3, 4, "general", mp.SeededRng(99))
        second = mp.random_channel(3, 4, "general", mp.SeededRng(99))
        assert np.array_equal(first.kraus, second.kraus)


class TestHaarUnitary:
    def test_scalar_case(self):
        u = mp.haar_unitary(1, mp.SeededRng(1))
        assert abs(abs(u[0, 0]) - 1.0) < 1e-12

    def test_unitarity(self):
        rng = mp.SeededRng(2)
        for i in range(100):
            u = mp.haar_unitary(4, rng.spawn(i))
            assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12

    def test_first_entry_moment(self):
        # Haar moment E|U_ij|^2 = 1/d
        rng = mp.SeededRng(3)
        values = [abs(mp.haar_unitary(2, rng.spawn(i))[0, 0]) ** 2 for i in range(10_000)]
        assert np.mean(values) == pytest.approx(0.5, abs=0.02)


class TestRandomChannel:
    def test_general_is_cptp(self):
        rng = mp.SeededRng(4)
        for i in range(100):
            rank = int(rng.spawn(2 * i).gen.integers(1, 10))
            channel = mp.random_channel(3, rank, "general", rng.spawn(2 * i + 1))
            assert mp.classify_channel(channel).cptp

    def test_unital_kind(self):
        rng = mp.SeededRng(5)
        for i in range(100):
            rank = int(rng.spawn(2 * i).gen.integers(1, 5))
            channel = mp.random_channel(2, rank, "unital", rng.spawn(2 * i + 1))
            assert mp.classify_channel(channel).unital

    def test_rank_one_preserves_purity(self):
        rng = mp.SeededRng(6)
        channel = mp.random_channel(3, 1, "general", rng.spawn(0))
        vec = rng.spawn(1).gen.standard_normal(3) + 1j * rng.spawn(2).gen.standard_normal(3)
        rho = mp.projector(vec / np.linalg.norm(vec))
        out = channel.apply(rho)
        purity = np.trace(out.matrix @ out.matrix).real
        assert purity == pytest.approx(1.0, abs=1e-10)

    def test_invalid_rank(self):
        with pytest.raises(InvalidRank):
            mp.random_channel(2, 5, "general", mp.SeededRng(7))


class TestRandomDio:
    def test_always_detection_incoherent(self):
        rng = mp.SeededRng(8)
        for i in range(50):
            unital = bool(i % 2)
            channel = mp.random_dio(3, unital, rng.spawn(i))
            flags = mp.classify_channel(channel)
            assert flags.dio
            if unital:
                assert flags.unital

    def test_free_channels_have_no_power(self):
        rng = mp.SeededRng(9)
        for i in range(100):
            channel = mp.random_dio(2, bool(i % 2), rng.spawn(i))
            assert mp.measurement_cohering_power(channel) <= 1e-9


class TestRandomPovm:
    def test_completeness(self):
        rng = mp.SeededRng(10)
        for i in range(200):
            d = int(rng.spawn(3 * i).gen.integers(2, 5))
            n = int(rng.spawn(3 * i + 1).gen.integers(2, 6))
            povm = mp.random_povm(d, n, bool(i % 2), rng.spawn(3 * i + 2))
            total = sum(el.matrix for el in povm.elements)
            assert np.max(np.abs(total - np.eye(d))) <= 1e-9

    def test_incoherent_flag(self):
        rng = mp.SeededRng(11)
        for i in range(50):
            povm = mp.random_povm(3, 4, True, rng.spawn(i))
            assert mp.is_incoherent_measurement(povm, 1e-10)
            assert mp.measurement_coherence(povm) <= 1e-9

    def test_coherent_draws_are_coherent(self):
        rng = mp.SeededRng(12)
        povm = mp.random_povm(2, 2, False, rng)
        assert not mp.is_incoherent_measurement(povm, 1e-6)


class TestGeneratorPredicates:
    def test_thousand_draws_pass_class_predicates(self):
        # 250 rounds x 4 generators = 10^3 draws, zero predicate failures
        rng = mp.SeededRng(14)
        for i in range(250):
            d = 2 + (i % 2)
            sub = rng.spawn(i)
            general = mp.random_channel(d, int(sub.gen.integers(1, d * d + 1)), "general", sub)
            assert mp.classify_channel(general).cptp
            unital = mp.random_channel(d, int(sub.gen.integers(1, d * d + 1)), "unital", sub)
            flags = mp.classify_channel(unital)
            assert flags.cptp and flags.unital
            free = mp.random_dio(d, bool(sub.gen.integers(0, 2)), sub)
            assert mp.classify_channel(free).dio
            povm = mp.random_povm(
                d, int(sub.gen.integers(2, 5)), bool(sub.gen.integers(0, 2)), sub
            )
            total = sum(el.matrix for el in povm.elements)
            assert np.max(np.abs(total - np.eye(d))) <= 1e-9


class TestExampleChannels:
    def test_all_entries_are_cptp(self):
        for name, channel in mp.example_channels().items():
            assert mp.classify_channel(channel).cptp, name

    def test_expected_keys(self):
        assert set(mp.example_channels()) == {
            "prep",
            "g",
            "hadamard",
            "qubit_dephase",
            "cnot2",
        }

    def test_prep_discards_input(self):
        prep = mp.example_channels()["prep"]
        rng = mp.SeededRng(13)
        plus = mp.projector(np.array([1.0, 1.0]) / np.sqrt(2.0))
        for i in range(5):
            rho = mp.HermitianOperator(mp.random_density(2, rng.spawn(i)))
            np.testing.assert_allclose(prep.apply(rho).matrix, plus.matrix, atol=1e-12)

    def test_g_measures_in_plus_minus_basis(self):
        g = mp.example_channels()["g"]
        plus = mp.projector(np.array([1.0, 1.0]) / np.sqrt(2.0))
        np.testing.assert_allclose(
            g.apply(plus).matrix, mp.basis_projector(0, 2).matrix, atol=1e-12
        )

    def test_cnot_entry_matches_generator(self):
        assert mp.channels_equal(mp.example_channels()["cnot2"], mp.cnot_unitary(2))
