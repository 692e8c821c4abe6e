import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize

from sphwhittle import (
    Band,
    DegenerateBand,
    EmpiricalSpectrum,
    ExactPowerLaw,
    FullBand,
    NarrowBand,
    NoiseModel,
    NoiseSub,
    NonPositiveAmplitude,
    Rate,
    SearchBox,
    SeedSpec,
    UnsupportedRegime,
    correction_factor,
    curvature,
    debiased_variance_ratio,
    estimate,
    full_band,
    g_hat_k,
    joint_objective,
    narrow_band,
    noise_h,
    noise_scheme_from_estimate,
    noise_variance_constant,
    normalization_factor,
    objective,
    sample_empirical,
    sample_observed_debiased,
    score,
    spectrum_values,
)
from sphwhittle.errors import BandTooNarrow

MODEL = ExactPowerLaw(2.0, 3.0)


def exact_spectrum(g0: float, alpha0: float, l_max: int) -> EmpiricalSpectrum:
    return EmpiricalSpectrum(spectrum_values(ExactPowerLaw(g0, alpha0), l_max))


class TestBand:
    def test_width_and_validation(self):
        assert Band(1, 100).width == 100
        assert Band(98, 100).width == 3
        with pytest.raises(ValueError):
            Band(0, 10)
        with pytest.raises(ValueError):
            Band(11, 10)

    def test_full_band(self):
        assert full_band(2000) == Band(1, 2000)

    def test_narrow_band_rule(self):
        band = narrow_band(2000, 1.0)
        assert band == Band(1737, 2000)
        g = 1.0 / math.log(2000)
        assert g == pytest.approx(0.13157, abs=1e-5)
        assert band.l_lo == math.ceil(2000 * (1 - g))

    def test_explicit_l1_fraction(self):
        band = Band(1850, 2000)
        assert 1 - band.l_lo / band.l_hi == pytest.approx(0.075, rel=1e-12)

    def test_narrow_band_rejects_bad_fraction(self):
        with pytest.raises(ValueError):
            narrow_band(2000, 1.5)
        with pytest.raises(ValueError):
            narrow_band(2000, 0.0)

    def test_narrow_band_too_narrow(self):
        with pytest.raises(BandTooNarrow):
            narrow_band(5, 0.01)


class TestSearchBox:
    def test_defaults(self):
        box = SearchBox()
        assert box.alpha_min == 2.01
        assert box.alpha_max == 10.0
        assert box.tol == 1e-6

    def test_validation(self):
        SearchBox(1.0, 8.0)
        with pytest.raises(ValueError):
            SearchBox(-0.5, 3.0)
        with pytest.raises(ValueError):
            SearchBox(3.0, 3.0)
        with pytest.raises(ValueError):
            SearchBox(2.01, 10.0, tol=0.0)


class TestGHatK:
    def test_unit_spectrum_weights_sum_to_one(self):
        spec = exact_spectrum(1.0, 3.5, 200)
        assert g_hat_k(spec, 3.5, k=0) == pytest.approx(1.0, rel=1e-13)

    def test_single_multipole_band(self):
        spec = sample_empirical(MODEL, 50, SeedSpec(5, 0))
        l, alpha = 17, 2.7
        for k in (0, 1, 2):
            expected = math.log(l) ** k * spec.values[l - 1] * l**alpha
            got = g_hat_k(spec, alpha, k=k, band=Band(l, l))
            assert got == pytest.approx(expected, rel=1e-12)

    def test_matches_brute_force_double_loop(self):
        spec = sample_empirical(MODEL, 100, SeedSpec(6, 0))
        alpha, band = 3.0, Band(1, 100)
        num = 0.0
        den = 0.0
        for l in range(1, 101):
            w = 2 * l + 1
            num += w * math.log(l) * spec.values[l - 1] * float(l) ** alpha
            den += w
        assert g_hat_k(spec, alpha, k=1, band=band) == pytest.approx(num / den, rel=1e-12)


class TestObjective:
    def test_jensen_equality_minimum(self):
        spec = exact_spectrum(2.0, 3.0, 500)
        r0 = objective(spec, 3.0)
        for delta in (-0.5, -0.01, 0.01, 0.5):
            assert objective(spec, 3.0 + delta) > r0

    def test_shift_matches_analytic_limit(self):
        # R(alpha0+1) - R(alpha0) approaches (1.5 - log 1.5 - 1) for large bands
        spec = exact_spectrum(1.0, 3.0, 10_000)
        diff = objective(spec, 4.0) - objective(spec, 3.0)
        limit = 1.5 - math.log(1.5) - 1.0
        assert diff == pytest.approx(limit, rel=0.02)

    def test_single_multipole_constant_in_alpha(self):
        spec = sample_empirical(MODEL, 30, SeedSpec(7, 0))
        band = Band(12, 12)
        base = math.log(spec.values[11])
        for alpha in (2.1, 3.0, 5.5, 9.9):
            assert objective(spec, alpha, band) == pytest.approx(base, rel=1e-12)

    def test_nonpositive_amplitude_raised(self):
        values = np.ones(50)
        values[-1] = -30.0
        spec = EmpiricalSpectrum(values, debiased=True)
        # large alpha weights the negative top multipole most
        with pytest.raises(NonPositiveAmplitude):
            objective(spec, 9.0)


class TestJointObjective:
    def test_concentration_first_order_condition(self):
        # locate the g-profile minimum as the zero of its central-difference
        # slope; a value-comparison search stalls at the g*sqrt(eps) floor
        spec = sample_empirical(MODEL, 150, SeedSpec(8, 0))
        for alpha in (2.5, 3.0, 4.0):
            ghat = g_hat_k(spec, alpha, k=0)

            def central(g: float, h: float, alpha=alpha) -> float:
                return (
                    joint_objective(spec, alpha, g + h)
                    - joint_objective(spec, alpha, g - h)
                ) / (2 * h)

            def slope(g: float) -> float:
                # Richardson-extrapolated central difference: kills the h^2
                # truncation term that otherwise floors the root near 1e-10
                h = g * 1e-4
                return (4 * central(g, h / 2) - central(g, h)) / 3

            g_star = optimize.brentq(slope, ghat * 0.5, ghat * 2.0, xtol=1e-14)
            assert abs(g_star - ghat) < 1e-10

    def test_joint_argmin_matches_concentrated(self):
        spec = sample_empirical(MODEL, 300, SeedSpec(9, 0))
        result = estimate(spec, full_band(300), SearchBox())
        alphas = np.arange(result.alpha_hat - 0.05, result.alpha_hat + 0.05, 1e-3)
        joint_profile = []
        for alpha in alphas:
            ghat = g_hat_k(spec, float(alpha), k=0)
            joint_profile.append(joint_objective(spec, float(alpha), ghat))
        best = alphas[int(np.argmin(joint_profile))]
        assert abs(best - result.alpha_hat) <= 1e-3

    def test_perfect_fit_value(self):
        l_max = 120
        spec = exact_spectrum(2.0, 3.0, l_max)
        total = sum(2 * l + 1 for l in range(1, l_max + 1))
        assert joint_objective(spec, 3.0, 2.0) == pytest.approx(total, rel=1e-12)
        assert total == l_max * (l_max + 2)

    def test_positive_values_required(self):
        spec = EmpiricalSpectrum(np.array([1.0, -1.0, 1.0]), debiased=True)
        from sphwhittle import NonPositiveValue

        with pytest.raises(NonPositiveValue):
            joint_objective(spec, 3.0, 1.0)


class TestScoreCurvature:
    def test_stationarity_at_interior_minimum(self):
        box = SearchBox()
        for i in range(5):
            spec = sample_empirical(MODEL, 400, SeedSpec(10, i))
            result = estimate(spec, full_band(400), box)
            assert not result.boundary_hit
            s = score(spec, result.alpha_hat)
            q = curvature(spec, result.alpha_hat)
            assert abs(s) < 10 * box.tol * abs(q)

    def test_score_is_derivative_of_objective(self):
        spec = sample_empirical(MODEL, 250, SeedSpec(11, 0))
        h = 1e-5
        for alpha in (2.4, 3.0, 3.7, 5.0):
            fd = (objective(spec, alpha + h) - objective(spec, alpha - h)) / (2 * h)
            assert abs(score(spec, alpha) - fd) <= 1e-6 * (1 + abs(score(spec, alpha)))

    def test_curvature_is_derivative_of_score(self):
        spec = sample_empirical(MODEL, 250, SeedSpec(11, 1))
        h = 1e-5
        for alpha in (2.4, 3.0, 4.2):
            fd = (score(spec, alpha + h) - score(spec, alpha - h)) / (2 * h)
            assert abs(curvature(spec, alpha) - fd) <= 1e-6 * (1 + abs(curvature(spec, alpha)))

    def test_curvature_limit_quarter(self):
        spec = exact_spectrum(1.0, 3.0, 10_000)
        assert curvature(spec, 3.0) == pytest.approx(0.25, rel=0.02)


class TestEstimate:
    def test_deterministic_recovery(self):
        spec = exact_spectrum(2.0, 3.0, 1000)
        result = estimate(spec, full_band(1000), SearchBox(2.01, 8.0))
        assert abs(result.alpha_hat - 3.0) <= 1e-6
        assert abs(result.g_hat - 2.0) <= 1e-6
        assert result.converged
        assert not result.boundary_hit
        assert result.band == Band(1, 1000)
        assert result.evaluations <= 200

    def test_matches_grid_search(self):
        spec = sample_empirical(MODEL, 2000, SeedSpec(12, 0))
        result = estimate(spec, full_band(2000), SearchBox())
        coarse = np.arange(2.01, 10.0, 1e-2)
        vals = [objective(spec, float(a)) for a in coarse]
        a0 = float(coarse[int(np.argmin(vals))])
        fine = np.arange(a0 - 2e-2, a0 + 2e-2, 1e-4)
        vals = [objective(spec, float(a)) for a in fine]
        best = float(fine[int(np.argmin(vals))])
        assert abs(result.alpha_hat - best) <= 2e-4

    def test_degenerate_band_rejected(self):
        spec = sample_empirical(MODEL, 50, SeedSpec(13, 0))
        with pytest.raises(DegenerateBand):
            estimate(spec, Band(20, 20), SearchBox())

    def test_boundary_snap_at_lower_edge(self):
        spec = exact_spectrum(2.0, 3.0, 500)
        result = estimate(spec, full_band(500), SearchBox(4.0, 10.0))
        assert result.boundary_hit
        assert result.alpha_hat == pytest.approx(4.0, abs=1e-6)

    def test_noise_dominated_hits_upper_boundary(self):
        # gamma < alpha0 - 1: the debiased objective favors the box edge
        noise = NoiseModel(1.0, 1.0)
        box = SearchBox()
        divergent = 0
        for i in range(30):
            spec = sample_observed_debiased(MODEL, noise, 500, SeedSpec(14, i))
            try:
                result = estimate(spec, full_band(500), box)
            except NonPositiveAmplitude:
                divergent += 1
                continue
            if result.boundary_hit and result.alpha_hat > box.alpha_max - 0.1:
                divergent += 1
        assert divergent > 15

    def test_result_objective_consistent(self):
        spec = sample_empirical(MODEL, 300, SeedSpec(15, 0))
        result = estimate(spec, full_band(300), SearchBox())
        assert result.objective == pytest.approx(
            objective(spec, result.alpha_hat), rel=1e-12
        )
        assert result.g_hat == pytest.approx(
            g_hat_k(spec, result.alpha_hat, k=0), rel=1e-12
        )


@settings(max_examples=25, deadline=None)
@given(
    scale=st.floats(1e-4, 1e4),
    stream=st.integers(0, 50),
)
def test_scale_equivariance(scale, stream):
    spec = sample_empirical(MODEL, 200, SeedSpec(16, stream))
    scaled = EmpiricalSpectrum(spec.values * scale)
    r1 = estimate(spec, full_band(200), SearchBox())
    r2 = estimate(scaled, full_band(200), SearchBox())
    assert abs(r1.alpha_hat - r2.alpha_hat) < 1e-8
    assert r2.g_hat == pytest.approx(r1.g_hat * scale, rel=1e-8)
    assert r2.objective - r1.objective == pytest.approx(math.log(scale), abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(
    l_lo=st.integers(1, 350),
    width=st.integers(3, 60),
    alpha0=st.floats(2.2, 6.0),
)
def test_jensen_equality_any_band(l_lo, width, alpha0):
    l_hi = l_lo + width - 1
    spec = exact_spectrum(1.5, alpha0, l_hi)
    result = estimate(spec, Band(l_lo, l_hi), SearchBox(2.01, 8.0))
    assert abs(result.alpha_hat - alpha0) < 1e-7


class TestCorrectionFactor:
    def test_two_term_value(self):
        assert correction_factor(2) == 0.5

    def test_reference_values(self):
        assert correction_factor(1000) == pytest.approx(0.86, abs=0.005)
        assert correction_factor(2000) == pytest.approx(0.87, abs=0.005)
        assert correction_factor(4000) == pytest.approx(0.88, abs=0.005)

    def test_increasing_and_bounded(self):
        values = [correction_factor(l) for l in range(3, 200)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(v < 1 for v in values)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            correction_factor(1)


class TestNormalizationFactor:
    def test_fullband_uncorrected(self):
        factor = normalization_factor(FullBand(l_max=2000, corrected=False))
        assert factor == pytest.approx(math.sqrt(2) * 2000 / 4, rel=1e-14)
        assert factor == pytest.approx(707.10678, abs=1e-4)

    def test_fullband_corrected(self):
        factor = normalization_factor(FullBand(l_max=2000, corrected=True))
        expected = math.sqrt(2) * 2000 / (4 * correction_factor(2000))
        assert factor == pytest.approx(expected, rel=1e-14)

    def test_narrowband(self):
        factor = normalization_factor(NarrowBand(l_max=2000, g=0.075))
        assert factor == pytest.approx(2000 * math.sqrt(0.075**3) / math.sqrt(12), rel=1e-13)
        assert factor == pytest.approx(11.858, abs=1e-3)

    def test_rate(self):
        factor = normalization_factor(Rate(l_max=2000))
        assert factor == pytest.approx(2000 / (4 * correction_factor(2000)), rel=1e-14)

    def test_noise_regime_below(self):
        scheme = NoiseSub(l_max=1000, alpha0=3.0, gamma=5.0, g0=2.0, g_n=1.0)
        assert normalization_factor(scheme) == pytest.approx(math.sqrt(2) * 1000 / 4, rel=1e-14)

    def test_noise_regime_equal(self):
        scheme = NoiseSub(l_max=1000, alpha0=3.0, gamma=3.0, g0=2.0, g_n=1.0)
        expected = math.sqrt(2) * 1000 / 4 * (1 + 0.5) ** 2
        assert normalization_factor(scheme) == pytest.approx(expected, rel=1e-14)

    def test_noise_regime_intermediate(self):
        u = 0.5
        scheme = NoiseSub(l_max=1000, alpha0=3.0, gamma=2.5, g0=2.0, g_n=1.0)
        expected = (
            1000 ** (1 - u)
            * math.sqrt(2)
            / (4 * math.sqrt(noise_variance_constant(u)))
            * 2.0
        )
        assert normalization_factor(scheme) == pytest.approx(expected, rel=1e-14)

    def test_noise_regime_unsupported(self):
        scheme = NoiseSub(l_max=1000, alpha0=3.0, gamma=1.0, g0=2.0, g_n=1.0)
        with pytest.raises(UnsupportedRegime):
            normalization_factor(scheme)

    def test_all_factors_positive(self):
        schemes = [
            FullBand(l_max=100, corrected=True),
            NarrowBand(l_max=100, g=0.3),
            Rate(l_max=100),
            NoiseSub(l_max=100, alpha0=3.0, gamma=2.6, g0=1.0, g_n=0.5),
        ]
        for scheme in schemes:
            assert normalization_factor(scheme) > 0

    def test_plug_in_wrapper(self):
        spec = sample_empirical(MODEL, 300, SeedSpec(17, 0))
        result = estimate(spec, full_band(300), SearchBox())
        scheme = noise_scheme_from_estimate(result, gamma=2.5, g_n=1.0, l_max=300)
        assert scheme.alpha0 == result.alpha_hat
        assert scheme.g0 == result.g_hat
        assert normalization_factor(scheme) > 0


class TestNoiseConstants:
    def test_noise_h_values(self):
        assert noise_h(0.0) == pytest.approx(7 / 4, rel=1e-15)
        assert noise_h(0.5) == pytest.approx(0.685185185, abs=1e-9)
        assert noise_h(1.0) == pytest.approx(0.375, rel=1e-15)

    def test_variance_constant(self):
        assert noise_variance_constant(0.0) == pytest.approx(1.0, rel=1e-15)
        assert noise_variance_constant(0.5) == pytest.approx(1.25 / 3.375, rel=1e-14)

    def test_debiased_variance_ratio(self):
        assert debiased_variance_ratio(50, 1.0) == pytest.approx(2 / 101, rel=1e-15)
        assert debiased_variance_ratio(1, 2.0, 2.0) == pytest.approx(8 / 3, rel=1e-15)
