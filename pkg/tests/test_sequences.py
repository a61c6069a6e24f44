import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from geospacing import ParameterDomainError
from geospacing.quadrature import (
    Halton,
    IIDUniform,
    Shifted,
    VanDerCorput,
    radical_inverse,
    random_shift,
    replicate_seeds,
    scramble_base2,
    van_der_corput,
)

seeds = st.integers(0, 2**64 - 1)


class TestVanDerCorput:
    def test_hand_values(self):
        assert van_der_corput(1, 2) == 0.5
        assert van_der_corput(3, 2) == 0.75
        # 5 = 12 in base 3, reversed 0.21 = 2/3 + 1/9
        assert van_der_corput(5, 3) == pytest.approx(7 / 9, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ParameterDomainError):
            van_der_corput(3, 1)
        with pytest.raises(ParameterDomainError):
            van_der_corput(0, 2)

    def test_vectorised_matches_scalar(self):
        idx = np.arange(1, 500)
        for base in (2, 3, 5, 7):
            assert np.array_equal(radical_inverse(idx, base), [van_der_corput(int(i), base) for i in idx])

    @pytest.mark.parametrize("k", range(13))
    def test_dyadic_stratification(self, k):
        x = VanDerCorput(2).first(2**k).ravel()
        cells = np.floor(x * 2**k).astype(int)
        assert sorted(cells) == list(range(2**k))

    def test_points_blocks_are_consistent(self):
        seq = VanDerCorput(3)
        full = seq.first(100)
        assert np.array_equal(np.vstack([seq.points(0, 37), seq.points(37, 100)]), full)
        assert np.array_equal(seq.point(50), full[49])


class TestHalton:
    def test_first_points(self):
        pts = Halton(2).first(3)
        np.testing.assert_allclose(pts, [[0.5, 1 / 3], [0.25, 2 / 3], [0.75, 1 / 9]])

    def test_dimension(self):
        assert Halton(3).first(10).shape == (10, 3)
        with pytest.raises(ParameterDomainError):
            Halton(0)


class TestIID:
    @settings(max_examples=25, deadline=None)
    @given(seeds, st.integers(0, 300), st.integers(1, 200), st.integers(1, 6))
    def test_stateless_blocks(self, seed, start, count, dims):
        seq = IIDUniform(seed, dims=dims)
        whole = seq.first(start + count)
        np.testing.assert_array_equal(seq.points(start, start + count), whole[start:])

    def test_reproducible_and_in_range(self):
        a = IIDUniform(7, dims=3).first(1000)
        assert np.array_equal(a, IIDUniform(7, dims=3).first(1000))
        assert not np.array_equal(a, IIDUniform(8, dims=3).first(1000))
        assert a.min() >= 0 and a.max() < 1

    def test_uniform(self):
        x = IIDUniform(3).first(20000).ravel()
        assert stats.kstest(x, "uniform").pvalue > 1e-3


class TestShift:
    def test_zero_shift_is_identity(self):
        base = VanDerCorput(2)
        assert np.array_equal(Shifted(base, shift=[0.0]).first(64), base.first(64))
        assert not Shifted(base, shift=[0.0]).randomized

    def test_requires_exactly_one_source(self):
        with pytest.raises(ParameterDomainError):
            Shifted(VanDerCorput(2))
        with pytest.raises(ParameterDomainError):
            Shifted(VanDerCorput(2), shift=[0.1], seed=1)
        with pytest.raises(ParameterDomainError):
            Shifted(Halton(2), shift=[0.1])

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_reproducible_in_range(self, seed):
        a = random_shift(seed).first(256)
        assert np.array_equal(a, random_shift(seed).first(256))
        assert a.min() >= 0 and a.max() < 1

    def test_marginally_uniform(self):
        x = np.array([random_shift(s).point(5)[0] for s in replicate_seeds(11, 3000)])
        assert stats.kstest(x, "uniform").pvalue > 1e-3


class TestScramble:
    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(0, 8))
    def test_net_property_preserved(self, seed, k):
        x = scramble_base2(seed).first(2**k).ravel()
        cells = np.floor(x * 2**k).astype(int)
        assert sorted(cells) == list(range(2**k))

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_deterministic_and_in_range(self, seed):
        seq = scramble_base2(seed)
        a = seq.first(512)
        assert np.array_equal(a, scramble_base2(seed).first(512))
        assert np.array_equal(seq.points(100, 300), a[100:300])
        assert a.min() >= 0 and a.max() < 1

    def test_seeds_differ(self):
        assert not np.array_equal(scramble_base2(1).first(16), scramble_base2(2).first(16))

    @pytest.mark.parametrize("index", [1, 2, 7, 1000])
    def test_marginally_uniform(self, index):
        x = np.array([scramble_base2(s).point(index)[0] for s in replicate_seeds(5, 4000)])
        assert stats.kstest(x, "uniform").pvalue > 1e-3

    def test_index_limit(self):
        with pytest.raises(ParameterDomainError):
            scramble_base2(1).points(2**32 - 2, 2**32)


class TestSeeds:
    def test_counter_split(self):
        a = replicate_seeds(42, 10)
        assert a == replicate_seeds(42, 10)
        assert replicate_seeds(42, 20)[:10] == a
        assert len(set(a)) == 10
        assert replicate_seeds(43, 10) != a

    def test_bad_seed(self):
        with pytest.raises(ParameterDomainError):
            IIDUniform(-1)
