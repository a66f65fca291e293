import numpy as np
import pytest

from iontomo import TrapParams, solve_epsilon


@pytest.fixture(scope="session")
def traj_driven():
    """kappa=0.2, Omega=2 trajectory used throughout."""
    return solve_epsilon(TrapParams(0.2, 2.0), 6.0)


@pytest.fixture(scope="session")
def traj_free():
    """kappa=0: exact solution eps = exp(it)."""
    return solve_epsilon(TrapParams(0.0, 1.0), 21.0)


def rk4_reference(params, t_end, h):
    """Fixed-step classical RK4 on the first-order real system.

    Deliberately independent of the adaptive production integrator; used as
    the brute-force oracle.
    """
    def rhs(t, y):
        w2 = 1.0 + params.kappa**2 * np.sin(params.omega_mod * t) ** 2
        return np.array([y[2], y[3], -w2 * y[0], -w2 * y[1]])

    n = int(round(t_end / h))
    h = t_end / n
    y = np.array([1.0, 0.0, 0.0, 1.0])
    t = 0.0
    for _ in range(n):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y[0] + 1j * y[1], y[2] + 1j * y[3]
