import numpy as np
import pytest

from iontomo import (
    CoverageError,
    StateSpec,
    epsilon_at,
    eval_coherent,
    state_at,
    wigner_analytic,
    wigner_cat_analytic,
    wigner_numeric,
)

X_WIDE = np.linspace(-9.0, 9.0, 1801)
BOX = np.linspace(-6.0, 6.0, 121)


class TestNumericTransform:
    def test_ground_gaussian(self):
        # Gaussian-integral oracle: W = 2 exp(-q^2 - p^2) under the
        # convention that integrates to 2 pi
        psi = eval_coherent(0.0, 1.0 + 0j, 1j, X_WIDE)
        wmap = wigner_numeric(psi, BOX, BOX)
        qm, pm = np.meshgrid(BOX, BOX, indexing="ij")
        expected = 2.0 * np.exp(-qm * qm - pm * pm)
        assert np.abs(wmap.values - expected).max() < 1e-8
        assert abs(wmap.values[60, 60] - 2.0) < 1e-10

    def test_odd_cat_reaches_negative_bound(self, traj_driven):
        psi = state_at(StateSpec("odd_cat", 1.0), traj_driven, 0.0, X_WIDE)
        wmap = wigner_numeric(psi, BOX, BOX)
        assert abs(wmap.values[60, 60] + 2.0) < 1e-4

    def test_wigner_bound(self, traj_driven):
        psi = state_at(StateSpec("even_cat", 1.0), traj_driven, 1.5, X_WIDE)
        wmap = wigner_numeric(psi, BOX, BOX)
        assert np.abs(wmap.values).max() <= 2.0 + 1e-8

    def test_normalization_convention(self, traj_driven):
        psi = state_at(StateSpec("even_cat", 1.5), traj_driven, 1.5,
                       np.linspace(-12.0, 12.0, 2401))
        wmap = wigner_numeric(psi, np.linspace(-8.0, 8.0, 161), BOX)
        assert abs(wmap.norm_constant - 1.0) < 1e-6

    def test_position_marginal(self, traj_driven):
        psi = state_at(StateSpec("even_cat", 1.0), traj_driven, 1.5, X_WIDE)
        p_grid = np.linspace(-8.0, 8.0, 321)
        wmap = wigner_numeric(psi, BOX, p_grid)
        idx = np.rint((BOX - X_WIDE[0]) / (X_WIDE[1] - X_WIDE[0])).astype(int)
        assert np.abs(wmap.position_marginal() - psi.density()[idx]).max() < 1e-5

    def test_imag_residue_recorded(self):
        psi = eval_coherent(0.3, 1.0 + 0j, 1j, X_WIDE)
        wmap = wigner_numeric(psi, BOX, BOX)
        assert wmap.imag_residue < 1e-8

    def test_misaligned_q_grid_rejected(self):
        psi = eval_coherent(0.0, 1.0 + 0j, 1j, X_WIDE)
        with pytest.raises(ValueError):
            wigner_numeric(psi, np.linspace(-5.003, 5.003, 101), BOX)

    def test_small_box_is_coverage_error(self, traj_driven):
        psi = state_at(StateSpec("even_cat", 1.0), traj_driven, 0.0, X_WIDE)
        with pytest.raises(CoverageError):
            wigner_numeric(psi, np.linspace(-2.0, 2.0, 41),
                           np.linspace(-2.0, 2.0, 41))


class TestAnalyticMaps:
    @pytest.mark.parametrize("kind,alpha", [
        ("coherent", 1.0),
        ("even_cat", 1.0),
        ("odd_cat", 1.0),
    ])
    @pytest.mark.parametrize("t", [0.0, 1.5])
    def test_matches_numeric_transform(self, traj_driven, kind, alpha, t):
        spec = StateSpec(kind, alpha)
        psi = state_at(spec, traj_driven, t, X_WIDE)
        eps, eps_dot = epsilon_at(traj_driven, t)
        numeric = wigner_numeric(psi, BOX, BOX)
        analytic = wigner_analytic(spec, eps, eps_dot, BOX, BOX, time=t)
        assert np.abs(numeric.values - analytic.values).max() < 1e-4

    def test_recorded_constant_near_one(self, traj_driven):
        eps, eps_dot = epsilon_at(traj_driven, 1.5)
        wmap = wigner_cat_analytic("even", 1.0, eps, eps_dot, BOX, BOX)
        assert abs(wmap.norm_constant - 1.0) < 1e-4
        assert abs(wmap.norm() - 1.0) < 1e-12

    def test_even_cat_alpha_zero_limit(self):
        wmap = wigner_cat_analytic("even", 1e-9, 1.0 + 0j, 1j, BOX, BOX)
        qm, pm = np.meshgrid(BOX, BOX, indexing="ij")
        assert np.abs(wmap.values - 2.0 * np.exp(-qm**2 - pm**2)).max() < 1e-6

    def test_odd_origin_value_exact(self):
        wmap = wigner_cat_analytic("odd", 0.7, 1.0 + 0j, 1j, BOX, BOX)
        assert abs(wmap.values[60, 60] + 2.0) < 1e-6
