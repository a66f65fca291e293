"""Classical complex trajectory of the parametrically driven trap.

The trap is an oscillator with periodically modulated frequency

    omega^2(t) = 1 + kappa^2 sin^2(Omega t)

(time in units of the unmodulated trap period, hbar = mass = 1).  Everything
downstream is built on the complex solution of

    eps''(t) + omega^2(t) eps(t) = 0,   eps(0) = 1,  eps'(0) = i,

whose Wronskian with its conjugate is conserved: Im(eps * conj(eps')) = -1.
For modulation frequencies inside a parametric-resonance zone |eps| grows
exponentially; that is physics, not failure, and the solver must report it
faithfully rather than error out.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _rk45
from .errors import IntegrationError  # noqa: F401  (re-exported for callers)

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12


@dataclass(frozen=True)
class TrapParams:
    """Modulation depth kappa >= 0 and modulation frequency omega_mod > 0."""

    kappa: float
    omega_mod: float

    def __post_init__(self):
        if not self.kappa >= 0.0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if not self.omega_mod > 0.0:
            raise ValueError(f"omega_mod must be > 0, got {self.omega_mod}")


def frequency_squared(params, t):
    """omega^2(t) = 1 + kappa^2 sin^2(omega_mod t); always >= 1."""
    s = np.sin(params.omega_mod * np.asarray(t, dtype=float))
    return 1.0 + params.kappa**2 * s * s


def wronskian_residual(eps, eps_dot):
    """Im(eps * conj(eps_dot)) + 1; zero for the exact flow."""
    return np.imag(eps * np.conj(eps_dot)) + 1.0


@dataclass(frozen=True)
class ComplexTrajectory:
    """Solution samples of the trajectory equation on [0, t_end].

    ``eps``/``eps_dot`` hold the complex state at the accepted solver nodes
    ``times``; ``eps_arg`` is the continuously unwrapped phase of eps
    (eps_arg[0] = 0), used to take the half-angle square root branch without
    jumps.  Instances are immutable and safe to share across threads.
    """

    times: np.ndarray
    eps: np.ndarray
    eps_dot: np.ndarray
    params: TrapParams
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    eps_arg: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.times[0] != 0.0:
            raise ValueError("trajectory must start at t=0")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        if self.eps[0] != 1.0 + 0.0j or self.eps_dot[0] != 1j:
            raise ValueError("initial conditions must be eps=1, eps_dot=i")
        if np.abs(self.eps).min() <= 0.0:
            raise ValueError("eps vanished on the grid; solution corrupt")
        if self.eps_arg is None:
            # per-step phase increments are < pi for tolerance-capped steps
            steps = np.angle(self.eps[1:] / self.eps[:-1])
            object.__setattr__(
                self, "eps_arg", np.concatenate(([0.0], np.cumsum(steps)))
            )

    @property
    def t_end(self):
        return self.times[-1]

    def wronskian_residual(self):
        return wronskian_residual(self.eps, self.eps_dot)


def _rhs(params):
    kappa2 = params.kappa**2
    om = params.omega_mod

    def rhs(t, y):
        s = np.sin(om * t)
        w2 = 1.0 + kappa2 * s * s
        return np.array([y[2], y[3], -w2 * y[0], -w2 * y[1]])

    return rhs


def solve_epsilon(params, t_end, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Solve the trajectory equation on [0, t_end] adaptively.

    The step size is additionally capped so the cubic dense output stays at
    the integration tolerance; see _rk45.dense_step_cap.  Raises
    IntegrationError on step underflow or non-finite state (carrying the
    offending time); parametric-resonance growth is returned, not raised.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not (rtol > 0 and atol > 0):
        raise ValueError("tolerances must be positive")
    cap = _rk45.dense_step_cap(rtol, (1.0 + params.kappa**2) ** 2)
    ts, ys, _ = _rk45.integrate(
        _rhs(params), 0.0, np.array([1.0, 0.0, 0.0, 1.0]), t_end, rtol, atol,
        max_step=cap,
    )
    eps = ys[:, 0] + 1j * ys[:, 1]
    eps_dot = ys[:, 2] + 1j * ys[:, 3]
    return ComplexTrajectory(
        times=ts, eps=eps, eps_dot=eps_dot, params=params, rtol=rtol, atol=atol
    )


def _state_nodes(traj):
    ys = np.column_stack(
        [traj.eps.real, traj.eps.imag, traj.eps_dot.real, traj.eps_dot.imag]
    )
    w2 = frequency_squared(traj.params, traj.times)
    fs = np.column_stack(
        [
            traj.eps_dot.real,
            traj.eps_dot.imag,
            -w2 * traj.eps.real,
            -w2 * traj.eps.imag,
        ]
    )
    return ys, fs


def epsilon_at(traj, t):
    """(eps(t), eps_dot(t)) by cubic Hermite dense output; exact at nodes.

    ``t`` may be scalar or array within [0, traj.t_end]; out-of-range times
    raise ValueError.
    """
    ys, fs = _state_nodes(traj)
    out = _rk45.hermite_eval(traj.times, ys, fs, t)
    if out.ndim == 1:
        return out[0] + 1j * out[1], out[2] + 1j * out[3]
    return out[:, 0] + 1j * out[:, 1], out[:, 2] + 1j * out[:, 3]


def epsilon_arg_at(traj, t):
    """Continuously unwrapped arg eps(t), anchored at arg eps(0) = 0."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0) or np.any(t_arr > traj.t_end):
        raise ValueError(f"time out of range [0, {traj.t_end}]")
    idx = np.clip(
        np.searchsorted(traj.times, t_arr, side="right") - 1, 0, len(traj.times) - 2
    )
    eps_t, _ = epsilon_at(traj, t_arr)
    eps_t = np.atleast_1d(eps_t)
    arg = traj.eps_arg[idx] + np.angle(eps_t / traj.eps[idx])
    return arg[0] if np.ndim(t) == 0 else arg
