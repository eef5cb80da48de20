import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadic_cesaro.dyadic import DyadicFunction, GroupPoint, unit
from dyadic_cesaro.errors import FrequencyAboveResolution, InvalidCount, OutOfRange
from dyadic_cesaro.kernels import dirichlet_kernel
from dyadic_cesaro.walsh import (
    WalshSpectrum,
    butterfly,
    fejer_mean,
    fwht,
    naive_fwht,
    partial_sum,
    rademacher,
    synthesize,
    walsh,
    walsh_matrix,
    walsh_row,
)


def integer_functions(max_M):
    return st.integers(1, max_M).flatmap(lambda M: st.lists(
        st.integers(-2**20, 2**20), min_size=1 << M, max_size=1 << M
    ).map(lambda v, M=M: DyadicFunction(M, v)))


class TestPointwise:
    def test_rademacher_examples(self):
        assert rademacher(0, GroupPoint(0, 3)) == 1
        assert rademacher(0, unit(0, 3)) == -1
        assert rademacher(2, GroupPoint(5, 4)) == -1

    def test_rademacher_out_of_range(self):
        with pytest.raises(OutOfRange):
            rademacher(3, GroupPoint(0, 3))

    def test_walsh_examples(self):
        for i in range(8):
            assert walsh(0, GroupPoint(i, 3)) == 1
        assert walsh(5, GroupPoint(1, 3)) == -1
        assert walsh(3, GroupPoint(0, 3)) == 1

    def test_walsh_above_resolution(self):
        with pytest.raises(FrequencyAboveResolution):
            walsh(8, GroupPoint(0, 3))

    @pytest.mark.parametrize("M", [1, 3, 5])
    def test_factored_form(self, M):
        # w_n = r_|n| * (-1)^(sum_{k<|n|} n_k x_k), |n| the top bit of n
        for n in range(1, 1 << M):
            top = n.bit_length() - 1
            for i in range(1 << M):
                x = GroupPoint(i, M)
                rest = sum(((n >> k) & 1) * x.coordinate(k) for k in range(top))
                assert walsh(n, x) == rademacher(top, x) * (-1) ** rest

    @pytest.mark.parametrize("M", [1, 4, 6])
    def test_rows_match_pointwise(self, M):
        H = walsh_matrix(M)
        for n in range(1 << M):
            expected = [walsh(n, GroupPoint(i, M)) for i in range(1 << M)]
            assert walsh_row(n, M).tolist() == expected
            assert H[n].tolist() == expected

    def test_orthonormal(self):
        H = walsh_matrix(6)
        assert (H @ H.T == 64 * np.eye(64, dtype=np.int64)).all()


class TestTransform:
    def test_constant(self):
        c = fwht(DyadicFunction.constant(1.0, 4)).coefficients
        assert c[0] == 1 and not c[1:].any()

    def test_single_walsh(self):
        c = fwht(DyadicFunction(3, walsh_row(5, 3))).coefficients
        assert c.tolist() == [0, 0, 0, 0, 0, 1, 0, 0]

    def test_dirichlet_4_pins_paley_order(self):
        c = fwht(dirichlet_kernel(4, 3).values).coefficients
        assert c.tolist() == [1, 1, 1, 1, 0, 0, 0, 0]

    @pytest.mark.parametrize("M", range(1, 9))
    def test_exact_against_naive(self, M):
        rng = np.random.default_rng(M)
        f = DyadicFunction(M, rng.integers(-1000, 1000, 1 << M))
        assert np.array_equal(fwht(f).coefficients, naive_fwht(f).coefficients)

    @settings(max_examples=40)
    @given(integer_functions(8))
    def test_exact_against_naive_property(self, f):
        assert np.array_equal(fwht(f).coefficients, naive_fwht(f).coefficients)

    def test_integer_butterfly_stays_integer(self):
        a = np.arange(16, dtype=np.int64)
        b = butterfly(a)
        assert b.dtype == np.int64
        assert np.array_equal(butterfly(b), 16 * a)

    @pytest.mark.parametrize("M", range(4, 13))
    def test_parseval(self, M):
        rng = np.random.default_rng(100 + M)
        f = DyadicFunction(M, rng.standard_normal(1 << M))
        energy = np.sum(f.values ** 2) * 2.0 ** -M
        assert abs(np.sum(fwht(f).coefficients ** 2) - energy) <= 1e-12 * energy

    @pytest.mark.parametrize("M", [1, 5, 12, 16])
    def test_round_trip(self, M):
        rng = np.random.default_rng(M)
        f = DyadicFunction(M, rng.standard_normal(1 << M))
        back = synthesize(fwht(f)).values
        assert np.max(np.abs(back - f.values)) <= 1e-12 * np.max(np.abs(f.values))

    def test_batched_rows(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((5, 32))
        b = butterfly(a)
        for row_in, row_out in zip(a, b):
            assert np.allclose(butterfly(row_in), row_out, rtol=0, atol=1e-12)

    def test_not_power_of_two(self):
        with pytest.raises(ValueError):
            butterfly(np.zeros(6))


class TestPartialSums:
    def test_s0_is_zero(self):
        spec = fwht(DyadicFunction(3, np.arange(8)))
        assert not partial_sum(spec, 0).values.any()

    def test_full_sum_is_identity(self):
        f = DyadicFunction(4, np.arange(16) - 3.0)
        assert np.array_equal(partial_sum(fwht(f), 16).values, f.values)

    def test_walsh_truncation(self):
        M = 4
        for j in range(1 << M):
            spec = fwht(DyadicFunction(M, walsh_row(j, M)))
            for n in range((1 << M) + 1):
                expected = walsh_row(j, M) if j < n else np.zeros(1 << M)
                assert np.array_equal(partial_sum(spec, n).values, expected)

    def test_above_resolution(self):
        spec = fwht(DyadicFunction.zeros(3))
        with pytest.raises(FrequencyAboveResolution):
            partial_sum(spec, 9)


class TestFejerMeans:
    def test_first_mean(self):
        f = DyadicFunction(3, np.arange(8.0))
        spec = fwht(f)
        assert np.array_equal(fejer_mean(spec, 1).values, np.full(8, spec[0]))

    def test_constant_is_fixed(self):
        spec = fwht(DyadicFunction.constant(1.0, 4))
        for n in range(1, 17):
            assert np.array_equal(fejer_mean(spec, n).values, np.ones(16))

    def test_second_mean_by_hand(self):
        c = np.zeros(8)
        c[:2] = 1.0
        out = fejer_mean(WalshSpectrum(3, c), 2).values
        assert np.array_equal(out, 1 + walsh_row(1, 3) / 2)

    def test_zero_order(self):
        with pytest.raises(InvalidCount):
            fejer_mean(fwht(DyadicFunction.zeros(2)), 0)

    @pytest.mark.parametrize("M", [2, 6, 10])
    def test_matches_mean_of_partial_sums(self, M):
        rng = np.random.default_rng(M)
        spec = fwht(DyadicFunction(M, rng.standard_normal(1 << M)))
        running = np.zeros(1 << M)
        for n in range(1, min(1 << M, 64) + 1):
            running += partial_sum(spec, n).values
            expect = running / n
            got = fejer_mean(spec, n).values
            assert np.max(np.abs(got - expect)) <= 1e-12 * max(1.0, np.max(np.abs(expect)))
