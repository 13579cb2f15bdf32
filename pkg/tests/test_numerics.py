import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from sombrero import ModelParams, TrialConfig, build_grid, build_trial, weighted_integral
from sombrero.numerics import GridError, panel_rule, weighted_integral_scaled
from sombrero.trialfn import s0


@pytest.fixture(scope="module")
def grid(analytic_params, analytic_cfg):
    return build_grid(analytic_params, analytic_cfg)


class TestPanelRule:
    def test_integration_operator(self):
        x, w, K, Kfull = panel_rule(16)
        assert np.allclose(Kfull, w, atol=1e-14)  # full-panel row is the GL rule
        assert np.allclose(K @ np.ones(16), x + 1.0, atol=1e-13)
        assert np.allclose(K @ x**3, (x**4 - 1.0) / 4.0, atol=1e-13)


class TestBuildGrid:
    def test_truncation_radius_rule(self, analytic_params, grid):
        p = analytic_params
        budget = grid.overflow_budget
        assert p.g * float(s0(grid.r_max, p)) >= budget
        assert p.g * float(s0(grid.r_max * (1.0 - 1e-3), p)) < budget
        # leading-order estimate r_max ~ (4*budget/g)^(1/4)
        assert abs(grid.r_max - (4.0 * budget / p.g) ** 0.25) < 0.2

    def test_node_structure(self, analytic_params, grid):
        assert np.all(np.diff(grid.nodes) > 0.0)
        assert np.all(grid.weights > 0.0)
        assert grid.nodes[0] >= 1e-5
        assert grid.nodes[-1] < grid.r_max == grid.panel_edges[-1]
        # the correction potential jumps at r0: it must be a panel edge
        p = analytic_params
        assert np.min(np.abs(grid.panel_edges - p.r0)) < 1e-12
        assert np.min(np.abs(grid.panel_edges - 2.0 * p.r0)) < 1e-12

    @pytest.mark.parametrize("n_dim", [2, 3, 4])
    def test_monomial_measure_integral(self, n_dim):
        p = ModelParams(n_dim=n_dim, g=1.0, a_shape=2.0)
        cfg = TrialConfig(a=2.0, params=p)
        g = build_grid(p, cfg)
        got = float(np.dot(g.weights, g.nodes ** (2.0 * p.k)))
        expect = g.r_max ** (2.0 * p.k + 1.0) / (2.0 * p.k + 1.0)
        assert np.isclose(got, expect, rtol=1e-8)

    def test_density_floor(self, analytic_params, analytic_cfg):
        with pytest.raises(GridError):
            build_grid(analytic_params, analytic_cfg, points_per_unit=32)

    def test_quadrature_self_convergence(self, analytic_params, analytic_cfg):
        tf = build_trial(analytic_cfg)
        vals = []
        for dens in (96, 192):
            g = build_grid(analytic_params, analytic_cfg, points_per_unit=dens)
            logw = 2.0 * tf.log_phi(g.nodes) + 2.0 * analytic_params.k * np.log(g.nodes)
            vals.append(weighted_integral(np.ones_like(g.nodes), g, logw))
        assert abs(vals[1] - vals[0]) <= 1e-9 * abs(vals[0])


class TestWeightedIntegral:
    def test_against_adaptive_quadrature(self, analytic_params, grid):
        # phi = exp(-r^4/4), N=3: integral of r^2 exp(-r^4/2)
        p = analytic_params
        logw = 2.0 * (-(grid.nodes**4) / 4.0) + 2.0 * p.k * np.log(grid.nodes)
        got = weighted_integral(np.ones_like(grid.nodes), grid, logw)
        oracle, err = quad(
            lambda r: r * r * np.exp(-(r**4) / 2.0), 0.0, grid.r_max,
            epsabs=1e-13, epsrel=1e-11, limit=200,
        )
        assert err < 1e-9
        assert np.isclose(got, oracle, rtol=1e-8)
        # closed form of the same integral
        assert np.isclose(got, 2.0 ** (-1.25) * math.gamma(0.75), rtol=1e-8)

    def test_zero_integrand(self, grid):
        logw = -grid.nodes
        assert weighted_integral(np.zeros_like(grid.nodes), grid, logw) == 0.0

    @settings(max_examples=25, deadline=None)
    @given(alpha=st.floats(-3.0, 3.0), beta=st.floats(-3.0, 3.0))
    def test_linearity(self, grid, alpha, beta):
        rng = np.random.default_rng(7)
        f = rng.standard_normal(len(grid.nodes))
        g2 = rng.standard_normal(len(grid.nodes))
        logw = -0.5 * grid.nodes**2
        lhs = weighted_integral(alpha * f + beta * g2, grid, logw)
        rhs = alpha * weighted_integral(f, grid, logw) + beta * weighted_integral(
            g2, grid, logw
        )
        assert np.isclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_rejects_all_underflowed_weights(self, grid):
        with pytest.raises(ValueError):
            weighted_integral(
                np.ones_like(grid.nodes), grid, np.full_like(grid.nodes, -np.inf)
            )

    def test_rejects_misaligned_samples(self, grid):
        with pytest.raises(ValueError):
            weighted_integral(np.ones(3), grid, np.zeros_like(grid.nodes))

    def test_overflow_budget_600_stays_finite(self):
        p = ModelParams(n_dim=3, g=1.0, a_shape=2.0)
        cfg = TrialConfig(a=2.0, params=p)
        g = build_grid(p, cfg, overflow_budget=600.0)
        tf = build_trial(cfg)
        logw = 2.0 * tf.log_phi(g.nodes) + 2.0 * p.k * np.log(g.nodes)
        with np.errstate(over="raise"):
            mant, scale = weighted_integral_scaled(np.ones_like(g.nodes), g, logw)
        assert np.isfinite(mant) and np.isfinite(scale)
