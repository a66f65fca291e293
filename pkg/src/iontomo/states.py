"""Time-dependent packet states of the driven trap and their Wigner maps.

Three pure-state families are supported, all built on the classical complex
trajectory eps(t):

* coherent packet
    psi_alpha(x) = pi^(-1/4) eps^(-1/2) exp(i eps' x^2 / (2 eps))
                   * exp(-|alpha|^2/2 - alpha^2 conj(eps)/(2 eps)
                         + sqrt(2) alpha x / eps)
* even / odd superpositions (cat states)
    psi^(+/-)(x) = 2 N^(+/-) psi_0(x)
                   * exp(-|alpha|^2/2 - conj(eps) alpha^2/(2 eps))
                   * cosh / sinh (sqrt(2) alpha x / eps)
    N^(+) = exp(|alpha|^2/2) / (2 sqrt(cosh |alpha|^2))
    N^(-) = exp(|alpha|^2/2) / (2 sqrt(sinh |alpha|^2))

Wigner convention: W(q,p) = int conj(psi(q+u/2)) psi(q-u/2) e^{ipu} du, so a
normalized state has integral W dq dp = 2*pi, |W| <= 2, and the ground packet
is W = 2 exp(-q^2 - p^2).  This is the convention that makes the tomogram
relation hold with no hidden constants.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._grids import grid_spacing
from .errors import CoverageError, DegenerateStateError
from .trajectory import epsilon_arg_at, epsilon_at, wronskian_residual

STATE_KINDS = ("coherent", "even_cat", "odd_cat")

WRONSKIAN_PRE_TOL = 1e-6
ODD_ALPHA_MIN = 1e-6
_PI4 = np.pi**-0.25


@dataclass(frozen=True)
class StateSpec:
    """Which state family (coherent / even_cat / odd_cat) and its label alpha."""

    kind: str
    alpha: complex

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ValueError(f"kind must be one of {STATE_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.kind == "odd_cat" and abs(self.alpha) <= ODD_ALPHA_MIN:
            raise DegenerateStateError(
                "odd_cat normalization diverges as alpha -> 0; "
                f"need |alpha| > {ODD_ALPHA_MIN}"
            )

    @property
    def parity(self):
        if self.kind == "even_cat":
            return "even"
        if self.kind == "odd_cat":
            return "odd"
        return None


@dataclass(frozen=True)
class WaveFunction:
    x_grid: np.ndarray
    values: np.ndarray
    time: float
    spec: StateSpec

    def norm(self):
        """Discrete L2 norm, trapezoid rule."""
        return np.trapezoid(np.abs(self.values) ** 2, self.x_grid)

    def density(self):
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class WignerMap:
    """Wigner samples on a rectangular (q, p) grid, values[i, j] = W(q_i, p_j).

    ``norm_constant`` records the raw discrete normalization
    (sum W dq dp / 2 pi) found before any rescale; ``imag_residue`` is the
    largest imaginary part discarded by the numerical transform (0 for
    analytic maps).
    """

    q_grid: np.ndarray
    p_grid: np.ndarray
    values: np.ndarray
    time: float
    spec: StateSpec
    norm_constant: float = 1.0
    imag_residue: float = 0.0

    def norm(self):
        return (
            np.trapezoid(np.trapezoid(self.values, self.p_grid, axis=1), self.q_grid)
            / (2.0 * np.pi)
        )

    def position_marginal(self):
        """Integral of W over p / (2 pi): recovers |psi(q)|^2."""
        return np.trapezoid(self.values, self.p_grid, axis=1) / (2.0 * np.pi)


def _check_wronskian(eps, eps_dot):
    res = abs(wronskian_residual(eps, eps_dot))
    if res > WRONSKIAN_PRE_TOL:
        raise ValueError(
            f"(eps, eps_dot) violate the Wronskian invariant by {res:.2e} "
            f"(allowed {WRONSKIAN_PRE_TOL})"
        )


def required_x_halfwidth(alpha, eps, n_sigma=6.0):
    """Coverage rule: density peaks sit at +-sqrt(2)|alpha||eps| with width
    |eps|/sqrt(2); the grid must extend n_sigma widths past the peaks."""
    return abs(eps) * (np.sqrt(2.0) * abs(alpha) + n_sigma / np.sqrt(2.0))


def _check_coverage(x_grid, alpha, eps, norm, norm_tol):
    need = required_x_halfwidth(alpha, eps)
    if x_grid[0] > -need or x_grid[-1] < need:
        raise CoverageError(
            f"x_grid [{x_grid[0]}, {x_grid[-1]}] does not reach the 6-sigma "
            f"coverage half-width {need:.3f}"
        )
    if abs(norm - 1.0) > norm_tol:
        raise CoverageError(
            f"norm deficit {abs(norm - 1.0):.2e} exceeds {norm_tol:.1e}; "
            "grid too short or too coarse for this packet"
        )


def _inv_sqrt_eps(eps, eps_arg):
    arg = np.angle(eps) if eps_arg is None else eps_arg
    return np.exp(-0.5j * arg) / np.sqrt(abs(eps))


def eval_coherent(alpha, eps, eps_dot, x_grid, *, eps_arg=None, time=0.0,
                  norm_tol=1e-6):
    """Coherent packet on x_grid for trajectory point (eps, eps_dot).

    ``eps_arg``: continuously unwrapped arg eps for the square-root branch;
    defaults to the principal value (densities and tomograms do not care, the
    overall phase of psi does).  Raises CoverageError when the grid misses
    the 6-sigma rule or the discrete norm falls short.
    """
    _check_wronskian(eps, eps_dot)
    alpha = complex(alpha)
    x = np.asarray(x_grid, dtype=float)
    chirp = np.exp(0.5j * eps_dot * x * x / eps)
    shift = np.exp(
        -0.5 * abs(alpha) ** 2
        - 0.5 * alpha**2 * np.conj(eps) / eps
        + np.sqrt(2.0) * alpha * x / eps
    )
    values = _PI4 * _inv_sqrt_eps(eps, eps_arg) * chirp * shift
    psi = WaveFunction(x, values, float(time), StateSpec("coherent", alpha))
    _check_coverage(x, alpha, eps, psi.norm(), norm_tol)
    return psi


def cat_norm_factor(parity, alpha):
    """N^(+/-); diverges for odd parity as alpha -> 0."""
    a2 = abs(complex(alpha)) ** 2
    if parity == "even":
        return np.exp(0.5 * a2) / (2.0 * np.sqrt(np.cosh(a2)))
    if abs(complex(alpha)) <= ODD_ALPHA_MIN:
        raise DegenerateStateError(
            f"odd-parity normalization degenerate for |alpha| <= {ODD_ALPHA_MIN}"
        )
    return np.exp(0.5 * a2) / (2.0 * np.sqrt(np.sinh(a2)))


def eval_cat(parity, alpha, eps, eps_dot, x_grid, *, eps_arg=None, time=0.0,
             norm_tol=1e-6):
    """Even/odd superposition packet on x_grid; parity in {'even', 'odd'}."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    _check_wronskian(eps, eps_dot)
    alpha = complex(alpha)
    norm_factor = cat_norm_factor(parity, alpha)
    x = np.asarray(x_grid, dtype=float)
    psi0 = _PI4 * _inv_sqrt_eps(eps, eps_arg) * np.exp(0.5j * eps_dot * x * x / eps)
    envelope = np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * np.conj(eps) * alpha**2 / eps)
    hyp = np.cosh if parity == "even" else np.sinh
    values = 2.0 * norm_factor * psi0 * envelope * hyp(np.sqrt(2.0) * alpha * x / eps)
    kind = "even_cat" if parity == "even" else "odd_cat"
    psi = WaveFunction(x, values, float(time), StateSpec(kind, alpha))
    _check_coverage(x, alpha, eps, psi.norm(), norm_tol)
    return psi


def evaluate_state(spec, eps, eps_dot, x_grid, *, eps_arg=None, time=0.0,
                   norm_tol=1e-6):
    """Dispatch on spec.kind."""
    if spec.kind == "coherent":
        return eval_coherent(spec.alpha, eps, eps_dot, x_grid, eps_arg=eps_arg,
                             time=time, norm_tol=norm_tol)
    return eval_cat(spec.parity, spec.alpha, eps, eps_dot, x_grid,
                    eps_arg=eps_arg, time=time, norm_tol=norm_tol)


def state_at(spec, traj, t, x_grid, *, norm_tol=1e-6):
    """State on x_grid at trajectory time t, with the phase branch tracked
    continuously from t=0."""
    eps, eps_dot = epsilon_at(traj, t)
    arg = epsilon_arg_at(traj, t)
    return evaluate_state(spec, eps, eps_dot, x_grid, eps_arg=arg, time=t,
                          norm_tol=norm_tol)


# --------------------------------------------------------------------------
# Wigner maps
# --------------------------------------------------------------------------


def _q_indices(x_grid, q_grid):
    dx = grid_spacing(x_grid, "x_grid")
    pos = (np.asarray(q_grid, dtype=float) - x_grid[0]) / dx
    idx = np.rint(pos).astype(np.int64)
    if np.any(np.abs(pos - idx) > 1e-6) or idx.min() < 0 or idx.max() >= len(x_grid):
        raise ValueError(
            "q_grid must lie on x_grid nodes (the transform reuses psi "
            "samples without interpolation)"
        )
    return idx, dx


def wigner_numeric(psi, q_grid, p_grid, *, imag_tol=1e-8, norm_tol=1e-6):
    """Numerical Wigner transform of a sampled wavefunction.

    Trapezoid in the relative coordinate u on the grid u = 2k dx matched to
    the x-grid spacing (u-range twice the x-range), kernel e^{ipu} exact per
    sample.  The imaginary residue must stay below ``imag_tol`` and the
    discrete normalization within ``norm_tol`` of 1, otherwise the grid does
    not cover the state (or a convention is broken) and CoverageError is
    raised.
    """
    q_grid = np.asarray(q_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    idx, dx = _q_indices(psi.x_grid, q_grid)
    w_complex = _kernels.wigner_sum(
        np.ascontiguousarray(psi.values, dtype=np.complex128), dx, idx, p_grid
    )
    imag_residue = float(np.abs(w_complex.imag).max())
    if imag_residue > imag_tol:
        raise CoverageError(
            f"imaginary residue {imag_residue:.2e} exceeds {imag_tol:.1e}"
        )
    values = np.ascontiguousarray(w_complex.real)
    wmap = WignerMap(q_grid, p_grid, values, psi.time, psi.spec,
                     norm_constant=1.0, imag_residue=imag_residue)
    raw = wmap.norm()
    if abs(raw - 1.0) > norm_tol:
        raise CoverageError(
            f"Wigner normalization residue {abs(raw - 1.0):.2e} exceeds "
            f"{norm_tol:.1e}; (q, p) box too small for the state"
        )
    return WignerMap(q_grid, p_grid, values, psi.time, psi.spec,
                     norm_constant=float(raw), imag_residue=imag_residue)


def _phase_space_mesh(q_grid, p_grid):
    return np.meshgrid(
        np.asarray(q_grid, dtype=float), np.asarray(p_grid, dtype=float),
        indexing="ij",
    )


def _normalized_map(q_grid, p_grid, values, time, spec):
    raw = WignerMap(q_grid, p_grid, values, time, spec).norm()
    return WignerMap(
        np.asarray(q_grid, dtype=float),
        np.asarray(p_grid, dtype=float),
        values / raw,
        float(time),
        spec,
        norm_constant=float(raw),
    )


def wigner_cat_analytic(parity, alpha, eps, eps_dot, q_grid, p_grid, *, time=0.0):
    """Closed-form cat-state Wigner map.

    Gaussian envelope exp(-|eps'|^2 q^2 - |eps|^2 p^2 + 2 Re(eps' conj(eps)) pq)
    times { e^{-2|alpha|^2} cosh(2 sqrt2 [p Im(alpha conj eps)
                                         - q Im(alpha conj eps')])
            +/- cos(2 sqrt2 [q Re(alpha conj eps') - p Re(alpha conj eps)]) },
    prefactor 4 |N^(+/-)|^2.  The map is rescaled to the package convention
    (integral = 2 pi on the box) and the constant found is recorded in
    ``norm_constant``; it sits at 1 up to box-truncation error.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    _check_wronskian(eps, eps_dot)
    alpha = complex(alpha)
    n2 = cat_norm_factor(parity, alpha) ** 2
    a2 = abs(alpha) ** 2
    qm, pm = _phase_space_mesh(q_grid, p_grid)
    envelope = np.exp(
        -np.abs(eps_dot) ** 2 * qm * qm
        - np.abs(eps) ** 2 * pm * pm
        + 2.0 * np.real(eps_dot * np.conj(eps)) * pm * qm
    )
    two_r2 = 2.0 * np.sqrt(2.0)
    hyp = np.cosh(
        two_r2 * (pm * np.imag(alpha * np.conj(eps))
                  - qm * np.imag(alpha * np.conj(eps_dot)))
    )
    osc = np.cos(
        two_r2 * (qm * np.real(alpha * np.conj(eps_dot))
                  - pm * np.real(alpha * np.conj(eps)))
    )
    sign = 1.0 if parity == "even" else -1.0
    values = 4.0 * n2 * envelope * (np.exp(-2.0 * a2) * hyp + sign * osc)
    kind = "even_cat" if parity == "even" else "odd_cat"
    return _normalized_map(q_grid, p_grid, values, time, StateSpec(kind, alpha))


def wigner_coherent_analytic(alpha, eps, eps_dot, q_grid, p_grid, *, time=0.0):
    """Closed-form coherent-packet Wigner map (displaced Gaussian):

        W = 2 exp(G(q,p) - 2|alpha|^2 + 2 sqrt2 [p Im(alpha conj eps)
                                                 - q Im(alpha conj eps')])
    with the same Gaussian envelope G as the cat map.
    """
    _check_wronskian(eps, eps_dot)
    alpha = complex(alpha)
    qm, pm = _phase_space_mesh(q_grid, p_grid)
    exponent = (
        -np.abs(eps_dot) ** 2 * qm * qm
        - np.abs(eps) ** 2 * pm * pm
        + 2.0 * np.real(eps_dot * np.conj(eps)) * pm * qm
        - 2.0 * abs(alpha) ** 2
        + 2.0 * np.sqrt(2.0) * (pm * np.imag(alpha * np.conj(eps))
                                - qm * np.imag(alpha * np.conj(eps_dot)))
    )
    values = 2.0 * np.exp(exponent)
    return _normalized_map(q_grid, p_grid, values, time,
                           StateSpec("coherent", alpha))


def wigner_analytic(spec, eps, eps_dot, q_grid, p_grid, *, time=0.0):
    """Dispatch on spec.kind."""
    if spec.kind == "coherent":
        return wigner_coherent_analytic(spec.alpha, eps, eps_dot, q_grid, p_grid,
                                        time=time)
    return wigner_cat_analytic(spec.parity, spec.alpha, eps, eps_dot,
                               q_grid, p_grid, time=time)
