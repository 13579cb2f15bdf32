import numpy as np
import pytest

from sombrero import ModelParams, TrialConfig, build_grid, solve

# the five benchmark rows at N=3 with their reference converged energies
TABLE1 = [
    (0.5, 2.0, 1.3772),
    (1.0, 2.0, 2.1517),
    (2.0, 2.0, 4.1094),
    (1.0, 1.0, 1.8392),
    (1.0, 3.0, 2.4418),
]

EXACT_ENERGY_N3 = (5.0 / 3.0) ** 1.5


@pytest.fixture(scope="session")
def analytic_params():
    return ModelParams(n_dim=3, g=1.0, a_shape=2.0)


@pytest.fixture(scope="session")
def analytic_cfg(analytic_params):
    return TrialConfig(a=2.0, params=analytic_params)


@pytest.fixture(scope="session")
def analytic_grid(analytic_params, analytic_cfg):
    return build_grid(analytic_params, analytic_cfg)


@pytest.fixture(scope="session")
def analytic_report(analytic_cfg, analytic_grid):
    return solve(analytic_cfg, analytic_grid)


@pytest.fixture(scope="session")
def table1_reports():
    """Converged reports for the five benchmark rows at default settings."""
    out = {}
    for g, a_shape, _ in TABLE1:
        p = ModelParams(n_dim=3, g=g, a_shape=a_shape)
        cfg = TrialConfig(a=2.0, params=p)
        out[(g, a_shape)] = solve(cfg, tol=1e-8, max_iter=60)
    return out


def exact_psi(r):
    return np.exp(-np.asarray(r, dtype=float) ** 4 / 4.0)
