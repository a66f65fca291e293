"""Classical-like time evolution of tomograms.

The tomograms of the driven trap obey the first-order equation

    dw/dt - mu dw/dnu + omega^2(t) nu dw/dmu = 0,

so w is constant along the characteristics

    dmu/ds = omega^2(s) nu,   dnu/ds = -mu,

while X and delta ride along untouched.  This module checks the equation by
central finite differences on sampled tomogram fields, and exploits it by
propagating tomograms backward along characteristics.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _rk45
from ._grids import grid_spacing
from .states import StateSpec
from .tomograms import ReferenceFrame, Tomogram
from .trajectory import (
    DEFAULT_ATOL,
    DEFAULT_RTOL,
    TrapParams,
    frequency_squared,
)

ORIGIN_EXCLUSION_RADIUS = 0.05


@dataclass(frozen=True)
class TomogramField:
    """w sampled on times x mu_grid x nu_grid x x_grid at fixed delta.

    All grids are uniform; the (mu, nu) lattice must stay outside the
    degenerate-frame disk of radius 0.05 around the origin.
    """

    times: np.ndarray
    mu_grid: np.ndarray
    nu_grid: np.ndarray
    x_grid: np.ndarray
    values: np.ndarray  # (n_t, n_mu, n_nu, n_x)
    params: TrapParams
    delta: float = 0.0
    spec: Optional[StateSpec] = None

    def __post_init__(self):
        expected = (len(self.times), len(self.mu_grid), len(self.nu_grid),
                    len(self.x_grid))
        if self.values.shape != expected:
            raise ValueError(
                f"field values shape {self.values.shape} != grids {expected}"
            )
        mm, nn = np.meshgrid(self.mu_grid, self.nu_grid, indexing="ij")
        r2_min = float((mm * mm + nn * nn).min())
        if r2_min < ORIGIN_EXCLUSION_RADIUS**2:
            raise ValueError(
                f"(mu, nu) lattice enters the degenerate disk: min radius "
                f"{np.sqrt(r2_min):.4f} < {ORIGIN_EXCLUSION_RADIUS}"
            )


def build_field(evaluate, times, mu_grid, nu_grid, x_grid, params, *,
                delta=0.0, spec=None):
    """Tabulate ``evaluate(t, frame) -> values`` over the field grids."""
    times = np.asarray(times, dtype=float)
    mu_grid = np.asarray(mu_grid, dtype=float)
    nu_grid = np.asarray(nu_grid, dtype=float)
    x_grid = np.asarray(x_grid, dtype=float)
    values = np.empty((len(times), len(mu_grid), len(nu_grid), len(x_grid)))
    for a, t in enumerate(times):
        for i, mu in enumerate(mu_grid):
            for j, nu in enumerate(nu_grid):
                values[a, i, j] = evaluate(t, ReferenceFrame(mu, nu, delta))
    return TomogramField(times, mu_grid, nu_grid, x_grid, values, params,
                         delta=delta, spec=spec)


def evolution_residual(field):
    """Max interior residual |dw/dt - mu dw/dnu + omega^2 nu dw/dmu|.

    Central differences on the native grid spacings; for fields built from
    the closed-form tomograms the residual is pure truncation, O(h^2) in each
    spacing, so halving the spacings shrinks it 4x.  Needs >= 3 samples per
    differenced axis.
    """
    for g, name in ((field.times, "times"), (field.mu_grid, "mu_grid"),
                    (field.nu_grid, "nu_grid")):
        if len(g) < 3:
            raise ValueError(f"{name} needs >= 3 points for central differences")
    h_t = grid_spacing(field.times, "times")
    h_mu = grid_spacing(field.mu_grid, "mu_grid")
    h_nu = grid_spacing(field.nu_grid, "nu_grid")
    w = field.values
    w_t = (w[2:, 1:-1, 1:-1] - w[:-2, 1:-1, 1:-1]) / (2.0 * h_t)
    w_mu = (w[1:-1, 2:, 1:-1] - w[1:-1, :-2, 1:-1]) / (2.0 * h_mu)
    w_nu = (w[1:-1, 1:-1, 2:] - w[1:-1, 1:-1, :-2]) / (2.0 * h_nu)
    om2 = frequency_squared(field.params, field.times[1:-1])[:, None, None, None]
    mu = field.mu_grid[1:-1][None, :, None, None]
    nu = field.nu_grid[1:-1][None, None, :, None]
    residual = w_t - mu * w_nu + om2 * nu * w_mu
    return float(np.abs(residual).max())


def _reversed_rhs(params, t1):
    kappa2 = params.kappa**2
    om = params.omega_mod

    def rhs(tau, z):
        s = np.sin(om * (t1 - tau))
        w2 = 1.0 + kappa2 * s * s
        return np.array([-w2 * z[1], z[0]])

    return rhs


def characteristic_origin(frame, t0, t1, params, *, rtol=DEFAULT_RTOL,
                          atol=DEFAULT_ATOL):
    """Backward characteristic foot: the frame at t0 whose characteristic
    reaches ``frame`` at t1.  Backward integration is done as forward
    integration of the time-reversed system (no negative steps).
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    if t1 == t0:
        return frame
    ts, ys, _ = _rk45.integrate(
        _reversed_rhs(params, t1), 0.0, np.array([frame.mu, frame.nu]),
        t1 - t0, rtol, atol,
    )
    return ReferenceFrame(float(ys[-1, 0]), float(ys[-1, 1]), frame.delta)


def propagate(w0, frame, t0, t1, params, *, rtol=DEFAULT_RTOL,
              atol=DEFAULT_ATOL):
    """Propagate a tomogram evaluator from t0 to t1 along characteristics.

    ``w0(frame_at_t0) -> Tomogram`` evaluates the known tomogram at time t0
    in an arbitrary frame.  The returned Tomogram carries the requested
    target frame and the values w0 takes on the backward characteristic
    foot; X and delta are untouched, so normalization is preserved exactly.
    """
    foot = characteristic_origin(frame, t0, t1, params, rtol=rtol, atol=atol)
    start = w0(foot)
    return Tomogram(frame, start.x_grid, start.values, float(t1), start.spec)


def flow_jacobian_determinant(frame, t0, t1, params, *, step=1e-3,
                              rtol=1e-11, atol=1e-13):
    """det of d(mu0, nu0)/d(mu, nu) by central differences of the flow map.

    The characteristic flow is linear and area preserving, so the exact value
    is 1; the finite-difference truncation vanishes (linear map) and what
    remains measures solver error.
    """

    def foot(mu, nu):
        f = characteristic_origin(ReferenceFrame(mu, nu, frame.delta), t0, t1,
                                  params, rtol=rtol, atol=atol)
        return np.array([f.mu, f.nu])

    d_mu = (foot(frame.mu + step, frame.nu) - foot(frame.mu - step, frame.nu))
    d_nu = (foot(frame.mu, frame.nu + step) - foot(frame.mu, frame.nu - step))
    jac = np.column_stack([d_mu, d_nu]) / (2.0 * step)
    return float(jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0])
