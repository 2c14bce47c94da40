import numpy as np
import pytest

from lextremes import build_group, dft_over_group, orthogonality_sum


class TestBuildGroup:
    def test_q5_tables(self, group_of):
        group = group_of(5)
        assert group.g == 2
        assert {a: int(group.dlog[a]) for a in range(1, 5)} == {1: 0, 2: 1, 4: 2, 3: 3}

    def test_composite_rejected(self):
        with pytest.raises(ValueError):
            build_group(9)
        with pytest.raises(ValueError):
            build_group(2)

    def test_q101_order(self, group_of):
        assert group_of(101).phi == 100

    def test_modulus_limit(self):
        with pytest.raises(ValueError):
            build_group(2**31 + 11)


class TestCharValue:
    def test_principal_is_one_on_coprime(self, group_of):
        chi0 = group_of(7).character(0)
        assert chi0.value(10) == pytest.approx(1.0)

    def test_zero_on_multiples_of_q(self, group_of):
        for j in range(4):
            assert group_of(5).character(j).value(10) == 0

    def test_i_at_2_mod_5(self, group_of):
        value = group_of(5).character(1).value(2)
        assert value == pytest.approx(1j, abs=1e-15)

    def test_unit_modulus_on_coprime(self, group_of):
        for q in (5, 101, 1009):
            group = group_of(q)
            for j in (1, q // 2, q - 2):
                assert np.max(np.abs(np.abs(group.character_values(j)) - 1)) < 1e-14

    def test_multiplicativity(self, group_of):
        # chi(m) * chi(n) = chi(mn) across a deterministic sample grid
        sample = list(range(1, 40)) + [97, 311, 554, 801, 999, 1000]
        for q in (5, 7, 11, 101):
            group = group_of(q)
            for j in range(q - 1):
                chi = group.character(j)
                for m in sample:
                    for n in sample[::5]:
                        lhs = chi.value(m) * chi.value(n)
                        assert abs(lhs - chi.value(m * n)) < 1e-12

    def test_conjugate_character(self, group_of):
        group = group_of(11)
        for j in range(10):
            chi = group.character(j)
            for a in range(1, 11):
                assert abs(chi.conjugate().value(a) - chi.value(a).conjugate()) < 1e-14


class TestOrthogonality:
    def test_trivial_examples(self, group_of):
        assert orthogonality_sum(group_of(5), 2, 3) == pytest.approx(0.0, abs=1e-12)
        assert orthogonality_sum(group_of(5), 3, 3) == pytest.approx(4.0, abs=1e-12)
        assert orthogonality_sum(group_of(7), 1, 8) == pytest.approx(6.0, abs=1e-12)

    def test_rejects_noncoprime(self, group_of):
        with pytest.raises(ValueError):
            orthogonality_sum(group_of(5), 5, 3)

    @pytest.mark.parametrize("q", [5, 7, 11])
    def test_full_pair_grid(self, group_of, q):
        group = group_of(q)
        for m in range(1, 51):
            if m % q == 0:
                continue
            for n in range(1, 51):
                if n % q == 0:
                    continue
                expected = (q - 1.0) if (m - n) % q == 0 else 0.0
                assert orthogonality_sum(group, m, n) == pytest.approx(expected, abs=1e-10)

    def test_sampled_pairs_q101(self, group_of):
        group = group_of(101)
        for m, n in [(1, 1), (2, 103), (3, 50), (17, 17 + 101), (50, 49)]:
            expected = 100.0 if (m - n) % 101 == 0 else 0.0
            assert orthogonality_sum(group, m, n) == pytest.approx(expected, abs=1e-9)


class TestGroupDft:
    def test_constant_vector(self, group_of):
        group = group_of(7)
        out = dft_over_group(group, np.ones(6))
        assert out[0] == pytest.approx(6.0, abs=1e-12)
        assert np.max(np.abs(out[1:])) < 1e-12

    def test_delta_at_identity(self, group_of):
        group = group_of(5)
        f = np.zeros(4)
        f[0] = 1.0  # residue a = 1
        out = dft_over_group(group, f)
        assert np.max(np.abs(out - 1.0)) < 1e-12

    def test_length_mismatch_rejected(self, group_of):
        with pytest.raises(ValueError):
            dft_over_group(group_of(7), np.ones(7))

    @pytest.mark.parametrize("q", [101, 1009, 10007])
    def test_matches_naive_summation(self, group_of, q):
        group = group_of(q)
        rng = np.random.default_rng(q)
        f = rng.standard_normal(q - 1) + 1j * rng.standard_normal(q - 1)
        out = dft_over_group(group, f)
        indices = sorted({0, 1, 2, q // 3, q // 2, q - 2} | set(range(0, q - 1, max(1, (q - 1) // 24))))
        for j in indices:
            naive = complex(np.sum(f * group.character_values(j)))
            assert abs(out[j] - naive) <= 1e-9 * max(1.0, abs(naive))

    def test_full_naive_q101(self, group_of):
        group = group_of(101)
        rng = np.random.default_rng(7)
        f = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        out = dft_over_group(group, f)
        for j in range(100):
            naive = complex(np.sum(f * group.character_values(j)))
            assert abs(out[j] - naive) <= 1e-9 * max(1.0, abs(naive))

    def test_parseval_consistency(self, group_of):
        # sum_j |F[j]|^2 = (q-1) * sum_a |f(a)|^2 for any f
        group = group_of(101)
        rng = np.random.default_rng(3)
        f = rng.standard_normal(100)
        out = dft_over_group(group, f)
        assert np.sum(np.abs(out) ** 2) == pytest.approx(100 * np.sum(f**2), rel=1e-12)
