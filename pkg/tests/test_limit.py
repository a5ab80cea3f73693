"""Tests for the limit laws of X_t / t.

Closed-form oracle values are checked exactly where small algebra permits
(discriminant, edge factors, skew terms at x = 0), the densities are checked
against independent inline reimplementations and independent adaptive
quadrature, and the cumulative machinery is exercised for monotonicity,
symmetry and gap flatness.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from qwalk import (
    LimitLaw,
    UnsupportedParameterError,
    approximate_pmf,
    density_envelope,
    discriminant,
    gapless_density,
    gapped_density,
    inner_edge_factor,
    limit_cdf,
    limit_density,
    limit_law,
    make_initial_coin,
    make_parameters,
    outer_edge_factor,
    skew_term,
    support_geometry,
)

from conftest import random_coin

ROOT2 = np.sqrt(2.0)
ROOT3 = np.sqrt(3.0)


def gapped_angles():
    """Angles strictly away from the gapless pair and from pi/2."""
    margin = 0.05
    bands = [
        (margin, np.pi / 4 - margin),
        (np.pi / 4 + margin, np.pi / 2 - margin),
        (np.pi / 2 + margin, 3 * np.pi / 4 - margin),
        (3 * np.pi / 4 + margin, np.pi - margin),
    ]
    return st.one_of(*(
        st.floats(min_value=a, max_value=b, allow_nan=False) for a, b in bands
    )).map(make_parameters)


def _lobe_integral(dens, lo, hi):
    """Adaptive integral over (lo, hi) with inverse-sqrt edge singularities.

    Substitutes x = lo + v^2 and x = hi - v^2 on the two halves so scipy's
    quadrature sees smooth integrands. Independent of the package internals.
    """
    mid = 0.5 * (lo + hi)
    left, _ = quad(lambda v: dens(lo + v * v) * 2.0 * v,
                   0.0, np.sqrt(mid - lo), epsabs=1e-10, epsrel=1e-10, limit=200)
    right, _ = quad(lambda v: dens(hi - v * v) * 2.0 * v,
                    0.0, np.sqrt(hi - mid), epsabs=1e-10, epsrel=1e-10, limit=200)
    return left + right


class TestSupportGeometry:
    def test_gapless_angles_have_no_gap(self):
        for theta in (np.pi / 4, 3 * np.pi / 4):
            geom = support_geometry(make_parameters(theta))
            assert geom.inner == 0.0
            assert geom.outer == pytest.approx(ROOT2, abs=1e-15)
            assert not geom.has_gap

    def test_pi_sixth_endpoints(self):
        geom = support_geometry(make_parameters(np.pi / 6))
        assert geom.inner == pytest.approx(np.sqrt(1.0 - ROOT3 / 2.0), abs=1e-15)
        assert geom.outer == pytest.approx(np.sqrt(1.0 + ROOT3 / 2.0), abs=1e-15)
        assert geom.inner == pytest.approx(0.366025, abs=1e-6)
        assert geom.outer == pytest.approx(1.366025, abs=1e-6)
        assert geom.has_gap

    def test_gap_widens_as_theta_leaves_the_diagonal(self):
        inner_pi8 = support_geometry(make_parameters(np.pi / 8)).inner
        inner_pi6 = support_geometry(make_parameters(np.pi / 6)).inner
        assert inner_pi8 > inner_pi6

    @given(gapped_angles())
    def test_endpoints_are_ordered_and_bounded(self, params):
        geom = support_geometry(params)
        assert 0.0 < geom.inner < geom.outer < ROOT2
        # the two lobe endpoints always satisfy inner^2 + outer^2 = 2
        assert geom.inner ** 2 + geom.outer ** 2 == pytest.approx(2.0, abs=1e-14)


class TestDiscriminant:
    def test_quarter_turn_reduces_to_quadratic(self):
        params = make_parameters(np.pi / 4)
        xs = np.linspace(-2.0, 2.0, 41)
        np.testing.assert_allclose(discriminant(xs, params), xs ** 2 / 4.0,
                                   rtol=0.0, atol=1e-15)

    def test_pi_sixth_value_at_one(self):
        params = make_parameters(np.pi / 6)
        assert discriminant(1.0, params) == pytest.approx(7.0 / 16.0, abs=1e-15)

    @given(gapped_angles(), st.floats(-3.0, 3.0, allow_nan=False))
    def test_even_and_nonnegative(self, params, x):
        d = discriminant(x, params)
        assert d == discriminant(-x, params)
        assert d >= 0.0


class TestEdgeFactors:
    def test_zero_at_their_respective_edges(self):
        for theta in (np.pi / 6, np.pi / 8, 2 * np.pi / 5, 3 * np.pi / 5):
            params = make_parameters(theta)
            geom = support_geometry(params)
            assert inner_edge_factor(geom.inner, params) == pytest.approx(0.0, abs=1e-13)
            assert outer_edge_factor(geom.outer, params) == pytest.approx(0.0, abs=1e-13)

    def test_pi_sixth_inner_factor_at_one(self):
        params = make_parameters(np.pi / 6)
        expected = -2.0 * (1.0 - ROOT3 / 2.0) + (1.0 - ROOT3 / 4.0) + np.sqrt(7.0 / 16.0)
        value = inner_edge_factor(1.0, params)
        assert value == pytest.approx(expected, abs=1e-14)
        assert value > 0.0

    @given(gapped_angles(), st.floats(1e-3, 1.0 - 1e-3))
    def test_positive_strictly_inside_the_lobe(self, params, frac):
        geom = support_geometry(params)
        x = geom.inner + frac * (geom.outer - geom.inner)
        assert inner_edge_factor(x, params) > 0.0
        assert outer_edge_factor(x, params) > 0.0


class TestDensityEnvelope:
    def test_matches_independent_reimplementation(self):
        # same algebra assembled separately, agreement to near machine level
        for theta in (np.pi / 6, np.pi / 8, 2 * np.pi / 5, 3 * np.pi / 5):
            params = make_parameters(theta)
            geom = support_geometry(params)
            x = np.linspace(geom.inner + 1e-3, geom.outer - 1e-3, 10_000)
            m = abs(params.c) * params.s
            d = np.sqrt(1.0 - 4.0 * m * m + m * m * x * x)
            wp = -2.0 * (1.0 - 2.0 * m) + (1.0 - m) * x * x + x * d
            wm = 2.0 * (1.0 + 2.0 * m) - (1.0 + m) * x * x - x * d
            expected = (x + 2.0 * d) ** 2 / (
                2.0 * np.pi * (4.0 - x * x) * d * np.sqrt(wp) * np.sqrt(wm))
            np.testing.assert_allclose(density_envelope(x, params), expected,
                                       rtol=0.0, atol=1e-12)

    def test_positive_on_dense_interior_grid(self):
        params = make_parameters(np.pi / 6)
        geom = support_geometry(params)
        x = np.linspace(geom.inner + 1e-6, geom.outer - 1e-6, 10_000)
        assert np.all(density_envelope(x, params) > 0.0)

    def test_inner_edge_divergence_rate(self):
        # f(x) * sqrt(W+(x)) extends continuously to the inner edge, so f
        # itself blows up exactly like W+^{-1/2}
        params = make_parameters(np.pi / 6)
        geom = support_geometry(params)
        edge = geom.inner
        d_edge = np.sqrt(discriminant(edge, params))
        limit_value = (edge + 2.0 * d_edge) ** 2 / (
            2.0 * np.pi * (4.0 - edge ** 2) * d_edge
            * np.sqrt(outer_edge_factor(edge, params)))
        ratios = []
        for eps in (1e-2, 1e-4, 1e-6):
            x = edge + eps
            ratios.append(density_envelope(x, params)
                          * np.sqrt(inner_edge_factor(x, params)))
        assert ratios[0] == pytest.approx(limit_value, rel=1e-1)
        assert ratios[2] == pytest.approx(limit_value, rel=1e-4)
        # the envelope itself grows without bound approaching the edge
        assert (density_envelope(edge + 1e-6, params)
                > density_envelope(edge + 1e-4, params)
                > density_envelope(edge + 1e-2, params))

    def test_rejects_points_outside_the_open_lobe(self):
        params = make_parameters(np.pi / 6)
        geom = support_geometry(params)
        for bad in (0.0, geom.inner, geom.outer, geom.outer + 0.5, -1.0):
            with pytest.raises(ValueError, match="inside"):
                density_envelope(bad, params)


class TestSkewTerm:
    def test_symmetric_coin_has_no_skew(self, symmetric_coin, params_pi6):
        x = np.linspace(-1.3, 1.3, 101)
        np.testing.assert_array_equal(skew_term(x, symmetric_coin, params_pi6, +1),
                                      np.zeros_like(x))
        np.testing.assert_array_equal(skew_term(x, symmetric_coin, params_pi6, -1),
                                      np.zeros_like(x))

    def test_up_coin_at_origin(self):
        coin = make_initial_coin(1.0, 0.0)
        for theta in (np.pi / 6, np.pi / 8):
            params = make_parameters(theta)
            root_d = np.sqrt(1.0 - 4.0 * (params.c * params.s) ** 2)
            denom = 2.0 * params.c ** 2 - 1.0
            assert skew_term(0.0, coin, params, +1) == pytest.approx(
                -root_d / denom, abs=1e-12)
            assert skew_term(0.0, coin, params, -1) == pytest.approx(
                +root_d / denom, abs=1e-12)

    def test_lobe_weights_stay_subunit_for_random_coins(self, params_pi6, params_pi8):
        # nonnegativity of the density is exactly 1 - nu >= 0 on the lobe
        rng = np.random.default_rng(61)
        for params in (params_pi6, params_pi8):
            geom = support_geometry(params)
            x = np.linspace(geom.inner + 1e-9, geom.outer - 1e-9, 512)
            for _ in range(100):
                coin = random_coin(rng)
                # right lobe carries 1 - nu_+(x), left lobe 1 - nu_-(-x)
                assert np.all(1.0 - skew_term(x, coin, params, +1) >= -1e-12)
                assert np.all(1.0 - skew_term(-x, coin, params, -1) >= -1e-12)

    def test_rejected_in_gapless_regime(self, symmetric_coin, params_pi4):
        with pytest.raises(UnsupportedParameterError):
            skew_term(0.5, symmetric_coin, params_pi4)

    def test_rejects_bad_sign(self, symmetric_coin, params_pi6):
        with pytest.raises(ValueError, match="sign"):
            skew_term(0.5, symmetric_coin, params_pi6, 0)


class TestGappedDensity:
    def test_vanishes_identically_on_the_gap(self, symmetric_coin, params_pi6):
        geom = support_geometry(params_pi6)
        x = np.linspace(-geom.inner, geom.inner, 201)
        np.testing.assert_array_equal(
            gapped_density(x, symmetric_coin, params_pi6), np.zeros_like(x))

    def test_vanishes_outside_the_outer_edge(self, symmetric_coin, params_pi6):
        geom = support_geometry(params_pi6)
        for x in (geom.outer, -geom.outer, 1.5, -2.0):
            assert gapped_density(x, symmetric_coin, params_pi6) == 0.0

    def test_symmetric_coin_gives_even_density(self, symmetric_coin, params_pi6):
        x = np.linspace(0.4, 1.3, 200)
        np.testing.assert_array_equal(
            gapped_density(x, symmetric_coin, params_pi6),
            gapped_density(-x, symmetric_coin, params_pi6))

    def test_two_sided_sum_recovers_twice_the_envelope(self, params_pi6):
        # the skew terms at x and -x cancel, so chi(x) + chi(-x) = 2 f(|x|)
        rng = np.random.default_rng(62)
        geom = support_geometry(params_pi6)
        x = np.linspace(geom.inner + 1e-4, geom.outer - 1e-4, 400)
        envelope = density_envelope(x, params_pi6)
        for _ in range(25):
            coin = random_coin(rng)
            total = (gapped_density(x, coin, params_pi6)
                     + gapped_density(-x, coin, params_pi6))
            np.testing.assert_allclose(total, 2.0 * envelope, rtol=0.0, atol=1e-12)

    def test_normalization_by_independent_quadrature(self, symmetric_coin):
        rng = np.random.default_rng(63)
        coins = [symmetric_coin, make_initial_coin(1.0, 0.0), random_coin(rng)]
        for theta in (np.pi / 6, 3 * np.pi / 5):
            params = make_parameters(theta)
            geom = support_geometry(params)
            for coin in coins:
                dens = lambda y: gapped_density(y, coin, params)
                total = (_lobe_integral(dens, geom.inner, geom.outer)
                         + _lobe_integral(dens, -geom.outer, -geom.inner))
                assert total == pytest.approx(1.0, abs=1e-6)

    def test_rejected_in_gapless_regime(self, symmetric_coin, params_pi4):
        with pytest.raises(UnsupportedParameterError):
            gapped_density(0.5, symmetric_coin, params_pi4)

    def test_scalar_input_gives_scalar_output(self, symmetric_coin, params_pi6):
        value = gapped_density(1.0, symmetric_coin, params_pi6)
        assert isinstance(value, float)
        assert value > 0.0


class TestGaplessDensity:
    def test_center_value_for_symmetric_coin(self, symmetric_coin):
        assert gapless_density(0.0, symmetric_coin) == pytest.approx(
            1.0 / (2.0 * np.pi), abs=1e-15)

    def test_vanishes_outside_support(self, symmetric_coin):
        for x in (ROOT2, -ROOT2, 1.5, -3.0):
            assert gapless_density(x, symmetric_coin) == 0.0

    def test_edge_divergence_rate(self, symmetric_coin):
        # chi(x) * sqrt(2 - x^2) tends to sqrt(2)/pi at the right edge
        target = ROOT2 / np.pi
        for eps, rel in ((1e-3, 1e-2), (1e-6, 1e-5)):
            x = ROOT2 - eps
            scaled = gapless_density(x, symmetric_coin) * np.sqrt(2.0 - x * x)
            assert scaled == pytest.approx(target, rel=rel)

    def test_normalization_by_independent_quadrature(self, symmetric_coin):
        for coin in (symmetric_coin, make_initial_coin(np.sqrt(0.5), np.sqrt(0.5))):
            dens = lambda y: gapless_density(y, coin)
            assert _lobe_integral(dens, -ROOT2, ROOT2) == pytest.approx(1.0, abs=1e-6)

    def test_matches_rescaled_single_coin_walk_density(self, symmetric_coin):
        # for a driftless coin the density is the classic single-coin walk
        # limit law stretched by a factor of two in space:
        #   chi(x) = w(x/2) / 2,  w(y) = 1 / (pi (1 - y^2) sqrt(1 - 2 y^2))
        x = np.linspace(-1.35, 1.35, 41)
        y = x / 2.0
        w = 1.0 / (np.pi * (1.0 - y ** 2) * np.sqrt(1.0 - 2.0 * y ** 2))
        np.testing.assert_allclose(gapless_density(x, symmetric_coin), w / 2.0,
                                   rtol=0.0, atol=1e-12)

    def test_cross_term_variants_differ_only_with_coin_drift(self, symmetric_coin):
        x = np.linspace(-1.3, 1.3, 101)
        # zero cross term: the two coefficient variants coincide
        np.testing.assert_array_equal(
            gapless_density(x, symmetric_coin),
            gapless_density(x, symmetric_coin, doubled_cross_term=True))
        # nonzero cross term: they are genuinely different densities
        tilted = make_initial_coin(np.sqrt(0.5), np.sqrt(0.5))
        single = gapless_density(x, tilted)
        doubled = gapless_density(x, tilted, doubled_cross_term=True)
        assert np.max(np.abs(single - doubled)) > 0.05
        # both normalize: the extra term is odd
        for flag in (False, True):
            dens = lambda y: gapless_density(y, tilted, doubled_cross_term=flag)
            assert _lobe_integral(dens, -ROOT2, ROOT2) == pytest.approx(1.0, abs=1e-6)


class TestLimitDensityRouting:
    def test_routes_by_angle(self, symmetric_coin, params_pi4, params_pi6):
        assert limit_density(0.5, symmetric_coin, params_pi4) == gapless_density(
            0.5, symmetric_coin)
        assert limit_density(0.5, symmetric_coin, params_pi6) == gapped_density(
            0.5, symmetric_coin, params_pi6)

    def test_regime_continuity_toward_the_gapless_angle(self, symmetric_coin):
        # reported, not asserted: the gapped density approaches the gapless
        # one pointwise on a compact interior set as theta -> pi/4
        xs = np.array([0.5, 0.8, 1.1])
        reference = gapless_density(xs, symmetric_coin)
        print("\n[report] sup |gapped - gapless| on {0.5, 0.8, 1.1}:")
        for offset in (0.15, 0.08, 0.04, 0.02, 0.01):
            params = make_parameters(np.pi / 4 + offset)
            gap = gapped_density(xs, symmetric_coin, params)
            diff = float(np.max(np.abs(gap - reference)))
            print(f"  theta = pi/4 + {offset:<5}: {diff:.3e}")
            assert np.all(np.isfinite(gap)) and np.all(gap > 0.0)


class TestLimitLaw:
    def test_regime_labels(self, symmetric_coin, params_pi4, params_pi6):
        assert LimitLaw(params_pi4, symmetric_coin).regime == "gapless"
        assert LimitLaw(params_pi6, symmetric_coin).regime == "gapped"

    def test_total_mass_is_one(self, symmetric_coin):
        rng = np.random.default_rng(64)
        for theta in (np.pi / 6, np.pi / 8, 2 * np.pi / 5, 3 * np.pi / 5, np.pi / 4):
            for coin in (symmetric_coin, random_coin(rng)):
                law = LimitLaw(make_parameters(theta), coin)
                assert law.total_mass == pytest.approx(1.0, abs=1e-6)

    def test_zeroth_moment_is_one(self, symmetric_coin, params_pi6, params_pi4):
        for params in (params_pi6, params_pi4):
            law = LimitLaw(params, symmetric_coin)
            assert law.moment(0) == pytest.approx(1.0, abs=1e-9)

    def test_first_moment_vanishes_for_symmetric_coin(self, symmetric_coin, params_pi6):
        law = LimitLaw(params_pi6, symmetric_coin)
        assert law.moment(1) == pytest.approx(0.0, abs=1e-9)

    def test_moment_rejects_negative_order(self, symmetric_coin, params_pi6):
        with pytest.raises(ValueError, match="order"):
            LimitLaw(params_pi6, symmetric_coin).moment(-1)

    def test_factory_caches_instances(self, symmetric_coin, params_pi6):
        assert limit_law(params_pi6, symmetric_coin) is limit_law(
            params_pi6, symmetric_coin)

    @settings(max_examples=12, deadline=None)
    @given(gapped_angles())
    def test_gapped_law_properties(self, params):
        coin = make_initial_coin(np.sqrt(0.5), 1j * np.sqrt(0.5))
        law = LimitLaw(params, coin)
        geom = law.support
        assert law.total_mass == pytest.approx(1.0, abs=1e-6)
        grid = np.linspace(-1.5, 1.5, 301)
        cdf = law.cdf(grid)
        assert np.all(np.diff(cdf) >= -1e-10)
        assert np.all(law.density(grid) >= 0.0)
        inside_gap = np.abs(grid) < geom.inner
        np.testing.assert_array_equal(law.density(grid[inside_gap]), 0.0)


class TestLimitCdf:
    def test_clamped_outside_support(self, symmetric_coin, params_pi6):
        geom = support_geometry(params_pi6)
        assert limit_cdf(-geom.outer - 1e-9, symmetric_coin, params_pi6) == 0.0
        assert limit_cdf(-5.0, symmetric_coin, params_pi6) == 0.0
        assert limit_cdf(geom.outer + 1e-9, symmetric_coin, params_pi6) == 1.0
        assert limit_cdf(5.0, symmetric_coin, params_pi6) == 1.0

    def test_symmetric_coin_median_at_origin(self, symmetric_coin,
                                             params_pi6, params_pi4):
        for params in (params_pi6, params_pi4):
            assert limit_cdf(0.0, symmetric_coin, params) == pytest.approx(
                0.5, abs=1e-8)

    def test_flat_across_the_gap(self, symmetric_coin, params_pi6):
        geom = support_geometry(params_pi6)
        x = np.linspace(-geom.inner + 1e-9, geom.inner - 1e-9, 101)
        values = limit_cdf(x, symmetric_coin, params_pi6)
        assert np.ptp(values) == 0.0
        # the plateau height is the left lobe's mass
        assert values[0] == pytest.approx(0.5, abs=1e-8)

    def test_monotone_on_fine_grid(self, params_pi6):
        rng = np.random.default_rng(65)
        coin = random_coin(rng)
        x = np.linspace(-1.6, 1.6, 2001)
        values = limit_cdf(x, coin, params_pi6)
        assert np.all(np.diff(values) >= -1e-10)
        assert np.all((values >= 0.0) & (values <= 1.0))

    def test_scalar_and_vector_forms_agree(self, symmetric_coin, params_pi6):
        xs = np.array([-1.2, -0.2, 0.0, 0.7, 1.2])
        vector = limit_cdf(xs, symmetric_coin, params_pi6)
        scalars = [limit_cdf(float(x), symmetric_coin, params_pi6) for x in xs]
        np.testing.assert_array_equal(vector, np.asarray(scalars))


class TestApproximatePmf:
    def test_exact_zeros_on_gap_positions(self, symmetric_coin, params_pi6):
        t = 100
        x = np.arange(-36, 37)  # inner * t is about 36.6
        np.testing.assert_array_equal(
            approximate_pmf(x, t, symmetric_coin, params_pi6), 0.0)

    def test_exact_zeros_outside_support(self, symmetric_coin, params_pi6, params_pi4):
        assert approximate_pmf(137, 100, symmetric_coin, params_pi6) == 0.0
        assert approximate_pmf(-71, 50, symmetric_coin, params_pi4) == 0.0

    def test_quarter_turn_matches_rational_closed_form(self, params_pi4):
        # (1/t) chi(x/t) collapses to an explicit rational-and-root formula
        coin = make_initial_coin(np.sqrt(0.5), np.sqrt(0.5))
        kappa = 1.0  # |a|^2 - |b|^2 + 2 Re(a conj(b)) for this coin
        t = 50
        x = np.arange(-60, 61, dtype=float)
        expected = (2.0 * ROOT2 * t * t
                    / (np.pi * (4.0 * t * t - x * x) * np.sqrt(2.0 * t * t - x * x))
                    * (1.0 - kappa * x / (2.0 * t)))
        np.testing.assert_allclose(approximate_pmf(x, t, coin, params_pi4),
                                   expected, rtol=0.0, atol=1e-12)

    def test_window_mass_matches_cdf_increment(self, symmetric_coin, params_pi6):
        # on a window away from the singular edges the lattice sum is a
        # midpoint rule for the density, so it reproduces the cdf increment
        t = 500
        x = np.arange(300, 601)  # x/t in [0.6, 1.2], strictly inside the lobe
        window_mass = approximate_pmf(x, t, symmetric_coin, params_pi6).sum()
        increment = (limit_cdf((x[-1] + 0.5) / t, symmetric_coin, params_pi6)
                     - limit_cdf((x[0] - 0.5) / t, symmetric_coin, params_pi6))
        assert window_mass == pytest.approx(increment, abs=1e-6)

    def test_even_in_position_for_symmetric_coin(self, symmetric_coin, params_pi6):
        t = 200
        x = np.arange(1, 2 * t + 1)
        np.testing.assert_array_equal(
            approximate_pmf(x, t, symmetric_coin, params_pi6),
            approximate_pmf(-x, t, symmetric_coin, params_pi6))

    def test_rejects_nonpositive_time(self, symmetric_coin, params_pi6):
        with pytest.raises(ValueError, match="t must be"):
            approximate_pmf(0, 0, symmetric_coin, params_pi6)
