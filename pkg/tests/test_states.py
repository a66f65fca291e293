import numpy as np
import pytest

from iontomo import (
    CoverageError,
    DegenerateStateError,
    StateSpec,
    TrapParams,
    epsilon_at,
    eval_cat,
    eval_coherent,
    solve_epsilon,
    state_at,
)

X = np.linspace(-10.0, 10.0, 2001)


class TestCoherent:
    def test_ground_packet_closed_form(self):
        psi = eval_coherent(0.0, 1.0 + 0j, 1j, X)
        expected = np.pi**-0.25 * np.exp(-X**2 / 2)
        assert np.abs(psi.values - expected).max() < 1e-14

    def test_norm_and_mean(self):
        psi = eval_coherent(1.0, 1.0 + 0j, 1j, X)
        assert abs(psi.norm() - 1.0) < 1e-8
        mean = np.trapezoid(X * psi.density(), X)
        assert abs(mean - np.sqrt(2.0)) < 1e-6

    def test_half_period_mirrors_density(self, traj_free):
        psi0 = state_at(StateSpec("coherent", 1.0), traj_free, 0.0, X)
        psi_pi = state_at(StateSpec("coherent", 1.0), traj_free, np.pi, X)
        assert np.abs(psi_pi.density() - psi0.density()[::-1]).max() < 1e-8

    def test_norm_at_driven_times(self, traj_driven):
        for t in (0.0, 1.5, 5.0):
            psi = state_at(StateSpec("coherent", 1.0 + 0.5j), traj_driven, t, X)
            assert abs(psi.norm() - 1.0) < 1e-8

    def test_phase_branch_continuous_through_half_period(self, traj_free):
        # principal-branch sqrt flips sign just past arg(eps) = pi; the
        # tracked branch must stay continuous in t
        before = state_at(StateSpec("coherent", 0.5), traj_free, np.pi - 1e-3, X)
        after = state_at(StateSpec("coherent", 0.5), traj_free, np.pi + 1e-3, X)
        assert np.abs(after.values - before.values).max() < 0.01

    def test_coverage_error_short_grid(self):
        with pytest.raises(CoverageError):
            eval_coherent(2.0, 1.0 + 0j, 1j, np.linspace(-4.0, 4.0, 801))

    def test_wronskian_precondition(self):
        with pytest.raises(ValueError):
            eval_coherent(0.0, 1.0 + 0j, 0.9j, X)


class TestCat:
    def test_odd_node_at_origin(self):
        psi = eval_cat("odd", 1.3, 1.0 + 0j, 1j, X)
        assert abs(psi.values[1000]) == 0.0  # X[1000] = 0 exactly

    def test_even_norm(self):
        psi = eval_cat("even", 1.5, 1.0 + 0j, 1j, X)
        assert abs(psi.norm() - 1.0) < 1e-8

    def test_even_small_alpha_is_ground(self):
        psi = eval_cat("even", 1e-8, 1.0 + 0j, 1j, X)
        ground = np.pi**-0.5 * np.exp(-(X**2))
        assert np.abs(psi.density() - ground).max() < 1e-6

    def test_odd_degenerate_alpha(self):
        with pytest.raises(DegenerateStateError):
            eval_cat("odd", 1e-8, 1.0 + 0j, 1j, X)
        with pytest.raises(DegenerateStateError):
            StateSpec("odd_cat", 0.0)

    @pytest.mark.parametrize("kind", ["even_cat", "odd_cat"])
    @pytest.mark.parametrize("t", [0.0, 1.5, 5.0])
    def test_norm_and_parity_preserved(self, traj_driven, kind, t):
        psi = state_at(StateSpec(kind, 1.0), traj_driven, t, X)
        assert abs(psi.norm() - 1.0) < 1e-8
        dens = psi.density()
        assert np.abs(dens - dens[::-1]).max() < 1e-10

    def test_even_odd_orthogonal(self, traj_driven):
        even = state_at(StateSpec("even_cat", 1.0), traj_driven, 1.5, X)
        odd = state_at(StateSpec("odd_cat", 1.0), traj_driven, 1.5, X)
        overlap = np.trapezoid(np.conj(even.values) * odd.values, X)
        assert abs(overlap) < 1e-8

    def test_bad_parity(self):
        with pytest.raises(ValueError):
            eval_cat("mixed", 1.0, 1.0 + 0j, 1j, X)


class TestSpec:
    def test_kind_validation(self):
        with pytest.raises(ValueError):
            StateSpec("squeezed", 1.0)

    def test_parity_attribute(self):
        assert StateSpec("even_cat", 1.0).parity == "even"
        assert StateSpec("odd_cat", 1.0).parity == "odd"
        assert StateSpec("coherent", 1.0).parity is None

    def test_evolved_against_reference_evaluation(self, traj_driven):
        # state_at must agree with a direct evaluation at epsilon_at values
        eps, eps_dot = epsilon_at(traj_driven, 2.0)
        psi_a = state_at(StateSpec("coherent", 1.0), traj_driven, 2.0, X)
        psi_b = eval_coherent(1.0, eps, eps_dot, X)
        assert np.abs(psi_a.density() - psi_b.density()).max() < 1e-12
