import math

import pytest
from hypothesis import assume, given, strategies as st

from qcdecision.errors import DomainError, UnboundedSampleSizeError
from qcdecision.quantiles import QuantileMode
from qcdecision.sampling import (
    ErrorType,
    PopulationModel,
    SampleObservation,
    TestConfig,
    Verdict,
    binomial_moments,
    decide_rejection,
    defect_rate_variance,
    grid,
    hypergeometric_moments,
    min_sample_size_type1,
    min_sample_size_type2,
    normal_approx_params,
    normal_approximation_advisory,
    sample_defect_rate,
    sample_variance,
    sweep_type1,
    sweep_type2,
    test_lot as run_lot_test,
    z_statistic,
)

PAPER = QuantileMode.PAPER_ROUNDED


def brute_hypergeometric(big_n, m, n):
    """Mean and variance from the exact pmf."""
    total = math.comb(big_n, n)
    pmf = {k: math.comb(m, k) * math.comb(big_n - m, n - k) / total for k in range(0, min(m, n) + 1)}
    mean = sum(k * p for k, p in pmf.items())
    var = sum((k - mean) ** 2 * p for k, p in pmf.items())
    return mean, var


def brute_min_n(condition, limit=10**6):
    for n in range(1, limit):
        if condition(n):
            return n
    raise AssertionError("no n found")


class TestTypes:
    def test_population_invariants(self):
        with pytest.raises(DomainError):
            PopulationModel(0, 0)
        with pytest.raises(DomainError):
            PopulationModel(10, 11)
        assert PopulationModel(100, 10).defect_rate == 0.1

    def test_observation_invariants(self):
        with pytest.raises(DomainError):
            SampleObservation(5, 6)
        with pytest.raises(DomainError):
            SampleObservation(0, 0)

    def test_config_invariants(self):
        with pytest.raises(DomainError):
            TestConfig(0.0)
        with pytest.raises(DomainError):
            TestConfig(0.1, significance_level=1.0)
        assert TestConfig(0.1, quantile_mode="paper-rounded").quantile_mode is PAPER


class TestEstimators:
    @pytest.mark.parametrize("n,a,expected", [(10, 3, 0.3), (5, 0, 0.0), (7, 7, 1.0)])
    def test_sample_defect_rate(self, n, a, expected):
        assert sample_defect_rate(SampleObservation(n, a)) == expected

    @pytest.mark.parametrize("n,a,expected", [(10, 3, 10 / 9 * 0.21), (10, 0, 0.0), (2, 1, 0.5)])
    def test_sample_variance(self, n, a, expected):
        assert sample_variance(SampleObservation(n, a)) == pytest.approx(expected, abs=1e-15)

    def test_sample_variance_matches_indicator_variance(self):
        ys = [1] * 3 + [0] * 7
        mean = sum(ys) / len(ys)
        direct = sum((y - mean) ** 2 for y in ys) / (len(ys) - 1)
        assert sample_variance(SampleObservation(10, 3)) == pytest.approx(direct)

    def test_sample_variance_needs_two(self):
        with pytest.raises(DomainError):
            sample_variance(SampleObservation(1, 0))

    def test_defect_rate_variance_examples(self):
        assert defect_rate_variance(SampleObservation(10, 3), PopulationModel(100, 5)) == pytest.approx(0.021)
        assert defect_rate_variance(SampleObservation(2, 1), PopulationModel(4, 2)) == pytest.approx(0.125)

    @pytest.mark.parametrize("a", [0, 1, 5, 10])
    def test_defect_rate_variance_census(self, a):
        assert defect_rate_variance(SampleObservation(10, a), PopulationModel(10, 5)) == 0.0

    def test_defect_rate_variance_errors(self):
        with pytest.raises(DomainError):
            defect_rate_variance(SampleObservation(20, 1), PopulationModel(10, 1))
        with pytest.raises(DomainError):
            defect_rate_variance(SampleObservation(1, 1), PopulationModel(10, 1))


class TestHypergeometric:
    def test_examples(self):
        mean, var = hypergeometric_moments(PopulationModel(100, 10), 20)
        assert mean == pytest.approx(2.0)
        assert var == pytest.approx(20 * 0.1 * 0.9 * 80 / 99)
        assert hypergeometric_moments(PopulationModel(2, 1), 1) == pytest.approx((0.5, 0.25))
        assert hypergeometric_moments(PopulationModel(100, 10), 100) == pytest.approx((10.0, 0.0))

    def test_single_unit_lot(self):
        assert hypergeometric_moments(PopulationModel(1, 1), 1) == (1.0, 0.0)

    @pytest.mark.parametrize("big_n,m,n", [(10, 3, 4), (25, 7, 12), (40, 0, 5), (30, 30, 9), (50, 13, 50)])
    def test_against_exact_pmf(self, big_n, m, n):
        assert hypergeometric_moments(PopulationModel(big_n, m), n) == pytest.approx(
            brute_hypergeometric(big_n, m, n), abs=1e-9
        )

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            hypergeometric_moments(PopulationModel(10, 1), 11)

    @given(st.integers(2, 500), st.data())
    def test_fpc_bounded_by_binomial(self, big_n, data):
        m = data.draw(st.integers(1, big_n - 1))
        n = data.draw(st.integers(1, big_n))
        _, hg = hypergeometric_moments(PopulationModel(big_n, m), n)
        _, bn = binomial_moments(m / big_n, n)
        if n == 1:
            assert hg == bn
        else:
            assert hg < bn

    @pytest.mark.parametrize("n", [1, 2, 20, 500])
    def test_fpc_ratio_tends_to_one(self, n):
        ratios = []
        for big_n in (10**3, 10**6):
            _, hg = hypergeometric_moments(PopulationModel(big_n, big_n // 10), n)
            _, bn = binomial_moments(0.1, n)
            ratio = hg / bn
            assert ratio == pytest.approx((big_n - n) / (big_n - 1), rel=1e-12)
            ratios.append(ratio)
        assert ratios[0] <= ratios[1] <= 1.0
        assert abs(ratios[1] - 1.0) <= 1e-3


class TestNormalApprox:
    @pytest.mark.parametrize("p,n,expected", [(0.10, 100, (0.10, 0.0009)), (0.5, 1, (0.5, 0.25)),
                                              (0.10, 900, (0.10, 0.0001))])
    def test_examples(self, p, n, expected):
        assert normal_approx_params(p, n) == pytest.approx(expected)

    @pytest.mark.parametrize("p", [0.0, 1.0])
    def test_degenerate(self, p):
        with pytest.raises(DomainError):
            normal_approx_params(p, 10)

    def test_advisory(self):
        assert normal_approximation_advisory(0.10, 30) is not None
        assert normal_approximation_advisory(0.10, 50) is None
        assert normal_approximation_advisory(0.99, 100) is not None


class TestZTest:
    def test_examples(self):
        assert z_statistic(0.16, 0.10, 100) == pytest.approx(2.0)
        assert z_statistic(0.10, 0.10, 50) == 0.0
        assert z_statistic(0.04, 0.10, 100) == pytest.approx(-2.0)

    @given(st.floats(0.01, 0.99), st.floats(0, 0.5), st.integers(1, 10**6))
    def test_antisymmetry(self, p0, delta, n):
        assert z_statistic(p0 + delta, p0, n) == pytest.approx(-z_statistic(p0 - delta, p0, n), abs=1e-9)

    def test_antisymmetry_exact_on_representable_grid(self):
        # p0 +/- delta exact in binary: the two statistics are exact negatives
        for p0, delta in [(0.5, 0.125), (0.25, 0.0625), (0.75, 0.25)]:
            assert z_statistic(p0 + delta, p0, 64) == -z_statistic(p0 - delta, p0, 64)

    def test_degenerate_null(self):
        with pytest.raises(DomainError):
            z_statistic(0.1, 0.0, 10)

    def test_verdicts(self):
        assert decide_rejection(2.0, 0.05) is Verdict.REJECT_LOT
        assert decide_rejection(1.645, 0.05, PAPER) is Verdict.FAIL_TO_REJECT
        assert decide_rejection(-1.0, 0.05) is Verdict.FAIL_TO_REJECT

    def test_boundary_precise(self):
        from qcdecision.quantiles import significance_quantile

        critical = significance_quantile(0.05)
        assert decide_rejection(critical, 0.05) is Verdict.FAIL_TO_REJECT
        assert decide_rejection(math.nextafter(critical, 10), 0.05) is Verdict.REJECT_LOT

    @given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0.001, 0.5))
    def test_monotone_in_z(self, z1, z2, alpha):
        lo, hi = sorted((z1, z2))
        if decide_rejection(lo, alpha) is Verdict.REJECT_LOT:
            assert decide_rejection(hi, alpha) is Verdict.REJECT_LOT

    def test_lot(self):
        z, critical, verdict = run_lot_test(SampleObservation(100, 16), TestConfig(0.10))
        assert z == pytest.approx(2.0)
        assert critical == pytest.approx(1.644854, abs=1e-6)
        assert verdict is Verdict.REJECT_LOT
        _, _, verdict = run_lot_test(SampleObservation(100, 10), TestConfig(0.10))
        assert verdict is Verdict.FAIL_TO_REJECT


class TestType1Plan:
    def test_examples(self):
        assert min_sample_size_type1(0.10, 0.02, 0.05, PAPER).sample_size == 609
        assert min_sample_size_type1(0.10, 0.09, 0.05, PAPER).sample_size == 31
        plan = min_sample_size_type1(0.5, 0.8225, 0.05, PAPER)
        assert plan.sample_size == 1
        assert plan.quantile_used == 1.645
        assert plan.error_type_controlled is ErrorType.TYPE1
        assert plan.input_echo == 0.8225

    @pytest.mark.parametrize("d", [0.0, -0.1])
    def test_bad_limit(self, d):
        with pytest.raises(DomainError):
            min_sample_size_type1(0.1, d)

    @pytest.mark.parametrize("p0,d", [(0.10, 0.02), (0.10, 0.05), (0.3, 0.01), (0.02, 0.007)])
    def test_against_linear_search(self, p0, d):
        z = 1.6448536269514722
        expected = brute_min_n(lambda n: z * math.sqrt(p0 * (1 - p0) / n) <= d)
        assert min_sample_size_type1(p0, d).sample_size == expected

    @given(st.floats(0.01, 0.99), st.floats(0.005, 0.5))
    def test_quadratic_law(self, p0, d):
        base = min_sample_size_type1(p0, 0.01).raw_size * 0.01**2
        assert min_sample_size_type1(p0, d).raw_size * d**2 == pytest.approx(base, rel=1e-9)

    @given(st.floats(0.01, 0.99), st.floats(0.005, 0.5), st.floats(0.005, 0.5))
    def test_monotone(self, p0, d1, d2):
        lo, hi = sorted((d1, d2))
        assert min_sample_size_type1(p0, lo).sample_size >= min_sample_size_type1(p0, hi).sample_size


class TestType2Plan:
    def test_paper_endpoints(self):
        assert min_sample_size_type2(0.10, 0.04, 0.90).sample_size == 18
        assert min_sample_size_type2(0.10, 0.08, 0.90).sample_size == 303

    def test_midpoint(self):
        plan = min_sample_size_type2(0.10, 0.06, 0.90)
        assert plan.sample_size == 58
        assert plan.quantile_used == pytest.approx(1.281552, abs=1e-6)
        assert plan.error_type_controlled is ErrorType.TYPE2

    def test_rounded_quantile_misses_303(self):
        assert min_sample_size_type2(0.10, 0.08, 0.90, PAPER).sample_size == 302

    def test_unbounded(self):
        with pytest.raises(UnboundedSampleSizeError):
            min_sample_size_type2(0.10, 0.10)

    @pytest.mark.parametrize("p0,p1", [(0.10, 0.04), (0.10, 0.08), (0.10, 0.15), (0.5, 0.45)])
    def test_against_linear_search(self, p0, p1):
        z = 1.2815515655446004
        expected = brute_min_n(lambda n: z * math.sqrt(p1 * (1 - p1) / n) <= abs(p1 - p0))
        assert min_sample_size_type2(p0, p1).sample_size == expected

    @given(st.floats(0.05, 0.95), st.floats(0.001, 0.04), st.floats(0.001, 0.04))
    def test_monotone_in_gap(self, p0, g1, g2):
        assume(g1 != g2)
        near, far = sorted((g1, g2))
        # below p0 the variance p1(1-p1) also shrinks as the gap widens
        assume(p0 <= 0.5)
        assert min_sample_size_type2(p0, p0 - near).sample_size >= min_sample_size_type2(p0, p0 - far).sample_size


class TestSweeps:
    def test_grid(self):
        assert grid(0.02, 0.09, 0.01) == [0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09]
        assert grid(0.02, 0.02, 0.01) == [0.02]
        assert grid(0.0, 0.3, 0.1) == [0.0, 0.1, 0.2, 0.3]
        with pytest.raises(DomainError):
            grid(0.09, 0.02, 0.01)
        with pytest.raises(DomainError):
            grid(0.0, 1.0, 0.0)

    def test_type1(self):
        result = sweep_type1(0.10, 0.02, 0.09, 0.01, 0.05, PAPER)
        assert len(result.rows) == 8
        assert result.sizes[0] == 609 and result.sizes[-1] == 31
        assert all(a >= b for a, b in zip(result.sizes, result.sizes[1:]))
        assert len(sweep_type1(0.10, 0.02, 0.02, 0.01, 0.05, PAPER).rows) == 1

    def test_type1_matches_pointwise(self):
        result = sweep_type1(0.10, 0.02, 0.09, 0.01)
        for row in result.rows:
            assert row.sample_size == min_sample_size_type1(0.10, row.swept_value).sample_size

    def test_type2(self):
        result = sweep_type2(0.10, 0.04, 0.08, 0.01, 0.90)
        assert result.sizes == [18, 32, 58, 119, 303]
        swept = [r.swept_value for r in result.rows]
        assert swept == sorted(set(swept))
        assert sweep_type2(0.10, 0.04, 0.04, 0.01).sizes == [18]

    def test_type2_reports_degenerate_row(self):
        result = sweep_type2(0.10, 0.08, 0.12, 0.01)
        assert len(result.rows) == 5
        assert [r.swept_value for r in result.failures] == [0.1]
        assert result.rows[0].sample_size == 303
        assert result.rows[3].sample_size is not None
