"""Cross-validated evaluation of p(t, z) and the Mittag-Leffler function.

The central frozen oracle: for a 1-d Gaussian kernel under a 1/2-stable
time change,
    p(1, 0) = int_0^inf (4 pi s)**-0.5 * exp(-s^2/4)/sqrt(pi) ds
            = Gamma(1/4) / (4**0.75 * pi) = 0.40802446954913144...
(recomputed here from the Gamma integral; equivalently 1/(2 Gamma(3/4))).
"""

import math

import numpy as np
import pytest
from scipy import special

from fracheat import (DomainError, ExactCauchy, ExactGaussian, GaussianBump,
                      RngStream, Stable, SubordinatorModel,
                      caputo_weak_residual, density_fourier,
                      density_monte_carlo, density_quadrature, mass_residual,
                      mittag_leffler)

P_ONE_ZERO = math.gamma(0.25) / (4.0 ** 0.75 * math.pi)


@pytest.fixture(scope="module")
def half():
    return SubordinatorModel(Stable(0.5))


@pytest.fixture(scope="module")
def gauss():
    return ExactGaussian(1)


@pytest.fixture(scope="module")
def cauchy():
    return ExactCauchy(1)


class TestQuadrature:
    def test_frozen_oracle(self, gauss, half):
        est = density_quadrature(gauss, half, 1.0, 0.0)
        assert est.converged
        assert est.value == pytest.approx(P_ONE_ZERO, abs=1e-8)
        assert P_ONE_ZERO == pytest.approx(1.0 / (2.0 * math.gamma(0.75)), rel=1e-15)

    def test_time_scaling(self, gauss, half):
        est = density_quadrature(gauss, half, 16.0, 0.0)
        assert est.value == pytest.approx(P_ONE_ZERO * 16.0 ** -0.25, rel=1e-7)

    def test_panel_matches_adaptive(self, gauss, cauchy, half):
        cases = {gauss: ((1.0, 0.0), (0.1, 1.0), (10.0, 3.0), (1.0, 30.0)),
                 cauchy: ((1.0, 0.3), (0.1, 1.0), (10.0, 3.0), (1.0, 30.0))}
        for kernel, points in cases.items():
            for t, z in points:
                a = density_quadrature(kernel, half, t, z).value
                b = density_quadrature(kernel, half, t, z, method="panel").value
                assert b == pytest.approx(a, rel=1e-7)

    def test_cauchy_on_diagonal_diverges(self, cauchy, half):
        with pytest.raises(DomainError):
            density_quadrature(cauchy, half, 1.0, 0.0)

    def test_positivity_and_monotonicity(self, gauss, cauchy, half):
        for t in (0.1, 1.0, 10.0):
            vals = [density_quadrature(cauchy, half, t, z).value
                    for z in (0.2, 0.5, 1.0, 2.0, 8.0)]
            vals += [density_quadrature(gauss, half, t, z).value
                     for z in (0.0, 0.5, 1.0, 2.0, 8.0)]
            assert all(v > 0 for v in vals)
            assert all(a >= b for a, b in zip(vals[:5], vals[1:5]))
            assert all(a >= b for a, b in zip(vals[5:], vals[6:]))

    def test_self_similar_collapse(self, gauss, half):
        # p(t, z) = t**(-1/4) P(z t**(-1/4)) for the 1/2-stable Gaussian case
        zetas = (0.0, 0.5, 1.5, 3.0)
        profiles = []
        for t in (0.1, 1.0, 10.0):
            row = [density_quadrature(gauss, half, t, zeta * t ** 0.25).value
                   * t ** 0.25 for zeta in zetas]
            profiles.append(row)
        profiles = np.asarray(profiles)
        spread = np.abs(profiles / profiles[1] - 1.0)
        assert spread.max() < 1e-6

    def test_degenerate_time_change_limit(self, gauss):
        # beta -> 1: E_t -> t so p approaches the plain kernel
        model = SubordinatorModel(Stable(0.999))
        for t, z in ((1.0, 0.0), (1.0, 1.0)):
            est = density_quadrature(gauss, model, t, z)
            assert est.value == pytest.approx(gauss.q(t, z), rel=0.01)

    def test_mixture_quadrature_against_mc(self, cauchy):
        from fracheat import StableMixture
        mix = SubordinatorModel(StableMixture(((1.0, 0.3), (1.0, 0.7))))
        est = density_quadrature(cauchy, mix, 1.0, 1.0)
        mc = density_monte_carlo(cauchy, mix, 1.0, 1.0, 20_000, RngStream(61, 0))
        assert abs(est.value - mc.value) < 4.0 * mc.error

    def test_domain(self, gauss, half):
        with pytest.raises(DomainError):
            density_quadrature(gauss, half, 0.0, 0.0)
        with pytest.raises(DomainError):
            density_quadrature(gauss, half, 1.0, -1.0)


class TestMonteCarlo:
    def test_matches_oracle(self, gauss, half):
        est = density_monte_carlo(gauss, half, 1.0, 0.0, 200_000, RngStream(77, 0))
        assert abs(est.value - P_ONE_ZERO) < 3.0 * est.error

    def test_matches_quadrature_cauchy(self, cauchy, half):
        quad = density_quadrature(cauchy, half, 1.0, 1.0).value
        est = density_monte_carlo(cauchy, half, 1.0, 1.0, 200_000, RngStream(78, 0))
        assert abs(est.value - quad) < 3.0 * est.error

    def test_error_shrinks_like_sqrt_n(self, gauss, half):
        small = density_monte_carlo(gauss, half, 1.0, 1.0, 1_000, RngStream(79, 0))
        large = density_monte_carlo(gauss, half, 1.0, 1.0, 100_000, RngStream(79, 1))
        assert large.error < small.error / 5.0

    def test_deterministic(self, gauss, half):
        a = density_monte_carlo(gauss, half, 1.0, 0.5, 1_000, RngStream(80, 4))
        b = density_monte_carlo(gauss, half, 1.0, 0.5, 1_000, RngStream(80, 4))
        assert a.value == b.value

    def test_min_samples(self, gauss, half):
        with pytest.raises(DomainError):
            density_monte_carlo(gauss, half, 1.0, 0.0, 10, RngStream(0, 0))


class TestMittagLeffler:
    def test_identity_half(self):
        for x in np.linspace(0.0, 50.0, 101):
            assert mittag_leffler(0.5, float(x)) == pytest.approx(
                float(special.erfcx(x)), abs=1e-10, rel=1e-10)

    def test_at_zero(self):
        for beta in (0.1, 0.5, 0.9):
            assert mittag_leffler(beta, 0.0) == 1.0

    def test_named_values(self):
        assert mittag_leffler(0.5, 1.0) == pytest.approx(
            math.e * special.erfc(1.0), rel=1e-11)
        assert mittag_leffler(0.5, 100.0) == pytest.approx(
            float(special.erfcx(100.0)), rel=1e-9)

    @pytest.mark.parametrize("beta", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_branch_overlap(self, beta):
        from fracheat.solution import _ml_asymptotic, _ml_integral, _ml_series
        assert abs(_ml_series(beta, 1.0) - _ml_integral(beta, 1.0)) < 1e-10
        assert abs(_ml_integral(beta, 50.0) - _ml_asymptotic(beta, 50.0)) < 1e-10

    def test_monotone_decreasing(self):
        xs = np.geomspace(0.01, 200.0, 60)
        vals = [mittag_leffler(0.35, float(x)) for x in xs]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            mittag_leffler(1.0, 1.0)
        with pytest.raises(DomainError):
            mittag_leffler(0.5, -1.0)


class TestFourierOracle:
    def test_frozen_oracle(self):
        assert density_fourier(0.5, 2, 1.0, 0.0) == pytest.approx(P_ONE_ZERO, abs=1e-7)

    def test_against_quadrature(self, gauss, cauchy):
        for beta in (0.3, 0.5, 0.7):
            model = SubordinatorModel(Stable(beta))
            for alpha, kernel in ((2, gauss), (1, cauchy)):
                for t in (0.1, 1.0, 10.0):
                    for z in (0.0, 1.0, 10.0):
                        if z == 0.0 and alpha == 1:
                            continue
                        pq = density_quadrature(kernel, model, t, z).value
                        pf = density_fourier(beta, alpha, t, z)
                        assert abs(pq - pf) <= max(2e-4 * pq, 1e-7), \
                            f"beta={beta} alpha={alpha} t={t} z={z}"

    def test_classical_limit(self, gauss):
        got = density_fourier(0.999, 2, 1.0, 0.0)
        assert got == pytest.approx((4.0 * math.pi) ** -0.5, rel=0.01)

    def test_on_diagonal_cauchy_diverges(self):
        with pytest.raises(DomainError):
            density_fourier(0.5, 1, 1.0, 0.0)


class TestMass:
    def test_spot(self, gauss, half):
        assert mass_residual(gauss, half, 1.0) < 1e-6

    def test_needs_exact_kernel(self, half):
        from fracheat import JumpSurrogate, PowerLaw
        with pytest.raises(DomainError):
            mass_residual(JumpSurrogate(PowerLaw(1.0), PowerLaw(1.0)), half, 1.0)


class TestWeakForm:
    def test_residual_small_grid(self):
        f = GaussianBump()
        g = GaussianBump()
        rep = caputo_weak_residual(0.5, f, g, np.linspace(0.3, 1.5, 3),
                                   np.linspace(-8.0, 8.0, 129))
        assert rep.residual < 0.02
        assert rep.initial_error < 1e-6
        assert not rep.richardson_warning

    def test_disjoint_supports(self):
        f = GaussianBump(center=20.0)
        g = GaussianBump(center=-20.0)
        rep = caputo_weak_residual(0.5, f, g, np.array([0.2, 0.4]),
                                   np.linspace(-28.0, 28.0, 161))
        for _, lhs, rhs in rep.rows:
            assert abs(lhs) < 1e-8 and abs(rhs) < 1e-8

    def test_heat_evolution_closed_form(self):
        bump = GaussianBump(center=1.0, width=2.0, amplitude=0.5)
        xs = np.linspace(-3.0, 5.0, 7)
        r = 0.7
        w2 = 4.0 + 4.0 * r
        ref = 0.5 * 2.0 / math.sqrt(w2) * np.exp(-(xs - 1.0) ** 2 / w2)
        assert np.allclose(bump.heat_evolution(r, xs), ref, rtol=1e-13)

    def test_bump_second_derivative(self):
        bump = GaussianBump()
        xs = np.linspace(-2.0, 2.0, 9)
        h = 1e-5
        fd = (bump(xs + h) - 2.0 * bump(xs) + bump(xs - h)) / h ** 2
        assert np.allclose(bump.second_derivative(xs), fd, atol=1e-5)


def test_quadrature_config_validation():
    from fracheat import QuadratureConfig
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=2.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=5)
    cfg = QuadratureConfig()
    assert cfg.rel_tol == 1e-10 and cfg.max_subdivisions == 2000
