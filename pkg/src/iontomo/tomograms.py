"""Marginal distributions of the symplectic observable X = mu q + nu p + delta.

The same tomogram is produced three independent ways, which is the backbone of
the verification suite:

1. closed form -- Gaussian law for the coherent packet, four-term law for the
   cat states (``marginal_gaussian`` / ``marginal_cat``);
2. forward transform of a Wigner map -- line integral of W along
   mu q + nu p = X - delta, weighted 1/(2 pi sqrt(mu^2+nu^2))
   (``forward_transform``);
3. frame quadrature of the wavefunction itself -- |<X|psi>|^2 through an
   oscillatory chirp integral, with an automatic switch to the momentum
   representation when |mu| > |nu| (``frame_quadrature``).

``inverse_transform`` maps a family of tomograms over a (mu, nu) grid back to
the Wigner function via

    W(q,p) = (1/2 pi) int w(X, mu, nu) exp(i(X - mu q - nu p)) dX dmu dnu.

Two corrections of the closed-form laws are deliberate and oracle-backed (the
uncorrected printed variants sit behind keyword switches so the verification
report can demonstrate that they fail):

* the variance cross term is mu nu Re(eps conj(eps')), not
  mu nu sqrt(|eps eps'|^2 + 1);
* the cat-peak shift coefficient is sqrt(2), not 2 sqrt(2), in both the real
  and imaginary shift terms.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from ._grids import centered_grid, grid_spacing, trapezoid_weights, uniform_grid
from .errors import CoverageError
from .states import (
    StateSpec,
    WaveFunction,
    WignerMap,
    cat_norm_factor,
    _check_wronskian,
)

SQRT2 = np.sqrt(2.0)

VARIANCE_FORMS = ("corrected", "printed")
SHIFT_FORMS = ("corrected", "printed")


@dataclass(frozen=True)
class ReferenceFrame:
    """Shifted / rotated / scaled frame: X = mu q + nu p + delta."""

    mu: float
    nu: float
    delta: float = 0.0

    def __post_init__(self):
        if self.mu == 0.0 and self.nu == 0.0:
            raise ValueError("degenerate frame: (mu, nu) = (0, 0)")

    @property
    def radius(self):
        return float(np.hypot(self.mu, self.nu))


@dataclass(frozen=True)
class Tomogram:
    frame: ReferenceFrame
    x_grid: np.ndarray
    values: np.ndarray
    time: float
    spec: Optional[StateSpec]

    def norm(self):
        return np.trapezoid(self.values, self.x_grid)


def _eta_bar(eps, eps_dot, frame):
    """conj(mu eps + nu eps'); |eta|^2 is twice the frame variance."""
    return frame.mu * np.conj(eps) + frame.nu * np.conj(eps_dot)


def gaussian_moments(alpha, eps, eps_dot, frame, *, variance_form="corrected"):
    """(mean, variance) of X for the coherent packet.

    mean = sqrt(2) Re(alpha (mu conj(eps) + nu conj(eps'))) + delta
    variance = (mu^2 |eps|^2 + nu^2 |eps'|^2)/2 + mu nu * cross

    cross is Re(eps conj(eps')) for the corrected form.  variance_form
    'printed' swaps in sqrt(|eps eps'|^2 + 1), the uncorrected published
    variant kept for diagnostics; it fails the quadrature oracle and can even
    go non-positive at mixed frames (ValueError).
    """
    if variance_form not in VARIANCE_FORMS:
        raise ValueError(f"variance_form must be in {VARIANCE_FORMS}")
    _check_wronskian(eps, eps_dot)
    alpha = complex(alpha)
    mean = SQRT2 * np.real(alpha * _eta_bar(eps, eps_dot, frame)) + frame.delta
    if variance_form == "corrected":
        cross = np.real(eps * np.conj(eps_dot))
    else:
        cross = np.sqrt(abs(eps * eps_dot) ** 2 + 1.0)
    variance = (
        0.5 * (frame.mu**2 * abs(eps) ** 2 + frame.nu**2 * abs(eps_dot) ** 2)
        + frame.mu * frame.nu * cross
    )
    if not variance > 0.0:
        raise ValueError(
            f"non-positive variance {variance!r} at frame "
            f"({frame.mu}, {frame.nu}); the '{variance_form}' cross term is "
            "inconsistent for this frame"
        )
    return float(mean), float(variance)


def _check_x_coverage(x_grid, lo_need, hi_need, what):
    if x_grid[0] > lo_need or x_grid[-1] < hi_need:
        raise CoverageError(
            f"x_grid [{x_grid[0]}, {x_grid[-1]}] does not cover the {what} "
            f"support [{lo_need:.3f}, {hi_need:.3f}]"
        )


def marginal_gaussian(alpha, eps, eps_dot, frame, x_grid, *,
                      variance_form="corrected", time=0.0, check_coverage=True):
    """Gaussian tomogram of the coherent packet on x_grid."""
    mean, var = gaussian_moments(alpha, eps, eps_dot, frame,
                                 variance_form=variance_form)
    x = np.asarray(x_grid, dtype=float)
    if check_coverage:
        half = 6.0 * np.sqrt(var)
        _check_x_coverage(x, mean - half, mean + half, "6-sigma")
    values = np.exp(-((x - mean) ** 2) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)
    return Tomogram(frame, x, values, float(time), StateSpec("coherent", alpha))


def marginal_cat(parity, alpha, eps, eps_dot, frame, x_grid, *,
                 shift_form="corrected", time=0.0, check_coverage=True):
    """Cat-state tomogram: two shifted Gaussians plus a damped interference
    fringe, all over the shared width 2 sigma_X = |mu eps + nu eps'|^2.

    With s = sqrt(2) Re(alpha eta_bar), c = sqrt(2) Im(alpha eta_bar),
    D = |eta|^2, eta_bar = mu conj(eps) + nu conj(eps'):

        w = |N|^2 / sqrt(pi D) * { e^{-(Y-s)^2/D} + e^{-(Y+s)^2/D}
              +/- 2 e^{-2|alpha|^2 + c^2/D} e^{-Y^2/D} cos(2 c Y / D) },
        Y = X - delta.

    The interference pair is combined analytically into envelope x cosine, so
    the values are manifestly real; they are nonnegative and integrate to 1
    exactly (up to roundoff) for the corrected shift.  shift_form 'printed'
    doubles s and c (uncorrected published variant, diagnostics only).
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if shift_form not in SHIFT_FORMS:
        raise ValueError(f"shift_form must be in {SHIFT_FORMS}")
    _check_wronskian(eps, eps_dot)
    alpha = complex(alpha)
    norm2 = cat_norm_factor(parity, alpha) ** 2
    etab = _eta_bar(eps, eps_dot, frame)
    big_d = abs(frame.mu * eps + frame.nu * eps_dot) ** 2
    coef = SQRT2 if shift_form == "corrected" else 2.0 * SQRT2
    s = coef * np.real(alpha * etab)
    c = coef * np.imag(alpha * etab)
    a2 = abs(alpha) ** 2
    x = np.asarray(x_grid, dtype=float)
    if check_coverage:
        half = abs(s) + 6.0 * np.sqrt(big_d / 2.0)
        _check_x_coverage(x, frame.delta - half, frame.delta + half, "cat")
    y = x - frame.delta
    sign = 1.0 if parity == "even" else -1.0
    values = (norm2 / np.sqrt(np.pi * big_d)) * (
        np.exp(-((y - s) ** 2) / big_d)
        + np.exp(-((y + s) ** 2) / big_d)
        + sign * 2.0 * np.exp(-2.0 * a2 + c * c / big_d)
        * np.exp(-(y * y) / big_d) * np.cos(2.0 * c * y / big_d)
    )
    kind = "even_cat" if parity == "even" else "odd_cat"
    return Tomogram(frame, x, values, float(time), StateSpec(kind, alpha))


def marginal_analytic(spec, eps, eps_dot, frame, x_grid, *, time=0.0,
                      check_coverage=True, variance_form="corrected",
                      shift_form="corrected"):
    """Dispatch on spec.kind."""
    if spec.kind == "coherent":
        return marginal_gaussian(spec.alpha, eps, eps_dot, frame, x_grid,
                                 variance_form=variance_form, time=time,
                                 check_coverage=check_coverage)
    return marginal_cat(spec.parity, spec.alpha, eps, eps_dot, frame, x_grid,
                        shift_form=shift_form, time=time,
                        check_coverage=check_coverage)


def suggest_x_grid(spec, eps, eps_dot, frame, n=501, n_sigma=8.0):
    """Uniform X grid covering the tomogram support: the shifted peaks plus
    n_sigma Gaussian widths, symmetric around delta."""
    eta = frame.mu * eps + frame.nu * eps_dot
    half = abs(eta) * (SQRT2 * abs(spec.alpha) + n_sigma / SQRT2)
    return uniform_grid(frame.delta - half, frame.delta + half, n)


def optical_slice(spec, eps, eps_dot, phi, x_grid, *, time=0.0,
                  check_coverage=True):
    """Homodyne special case: the tomogram at frame (cos phi, sin phi, 0).

    Pure convenience -- identical to calling the general marginal with that
    frame.
    """
    frame = ReferenceFrame(float(np.cos(phi)), float(np.sin(phi)), 0.0)
    return marginal_analytic(spec, eps, eps_dot, frame, x_grid, time=time,
                             check_coverage=check_coverage)


# --------------------------------------------------------------------------
# Forward transform: line integral of a Wigner map
# --------------------------------------------------------------------------


def forward_transform(wigner, frame, x_grid, *, boundary_tol=1e-10):
    """Tomogram from a WignerMap:

        w(X) = (1/2 pi) int W(q,p) delta(X - mu q - nu p - delta) dq dp,

    a line integral along mu q + nu p = X - delta divided by
    2 pi sqrt(mu^2+nu^2).  The line is sampled by bilinear interpolation at
    arc spacing min(dq, dp)/2 (second order, no FFT conventions).  If a line
    leaves the (q,p) box where |W| still exceeds ``boundary_tol`` the map box
    is too small: CoverageError.
    """
    x = np.asarray(x_grid, dtype=float)
    dq = grid_spacing(wigner.q_grid, "q_grid")
    dp = grid_spacing(wigner.p_grid, "p_grid")
    vals, edge = _kernels.line_integral_batch(
        np.ascontiguousarray(wigner.values, dtype=np.float64),
        float(wigner.q_grid[0]), dq, float(wigner.p_grid[0]), dp,
        frame.mu, frame.nu, frame.delta, x, 0.5 * min(dq, dp),
    )
    worst = float(edge.max()) if len(edge) else 0.0
    if worst > boundary_tol:
        raise CoverageError(
            f"integration line exits the Wigner box where |W| = {worst:.2e} "
            f"> {boundary_tol:.1e} (frame ({frame.mu}, {frame.nu}, "
            f"{frame.delta})); enlarge the (q, p) box"
        )
    return Tomogram(frame, x, vals, wigner.time, wigner.spec)


# --------------------------------------------------------------------------
# Frame quadrature of the wavefunction (independent oracle)
# --------------------------------------------------------------------------


def momentum_wavefunction(psi, p_grid=None):
    """Numeric Fourier transform psi~(p) = (2 pi)^(-1/2) int psi e^{-ipx} dx.

    When p_grid is omitted it is sized from the discrete second moment of
    -i d/dx (eight widths past the spread, twice the x-grid point count).
    """
    x = psi.x_grid
    if p_grid is None:
        dpsi = np.gradient(psi.values, x)
        p2 = float(np.trapezoid(np.abs(dpsi) ** 2, x))
        half = 8.0 * np.sqrt(p2) + 2.0
        p_grid = uniform_grid(-half, half, 2 * len(x) + 1)
    p_grid = np.asarray(p_grid, dtype=float)
    wts = trapezoid_weights(x)
    amp = _kernels.chirp_amplitude(
        np.ascontiguousarray(psi.values, dtype=np.complex128), x, wts, 0.0, p_grid
    )
    return WaveFunction(p_grid, amp / np.sqrt(2.0 * np.pi), psi.time, psi.spec)


def _chirp_tomogram(values, grid, frame, x_out):
    wts = trapezoid_weights(grid)
    chirp = frame.mu / (2.0 * frame.nu)
    freqs = (x_out - frame.delta) / frame.nu
    amp = _kernels.chirp_amplitude(
        np.ascontiguousarray(values, dtype=np.complex128), grid, wts, chirp, freqs
    )
    return np.abs(amp) ** 2 / (2.0 * np.pi * abs(frame.nu))


def frame_quadrature(psi, frame, x_grid, *, psi_momentum=None):
    """Direct tomogram of the wavefunction in an arbitrary frame.

    For |nu| >= |mu| the amplitude is the chirp integral

        <X|psi> ~ int psi(x) exp(i mu x^2/(2 nu)) exp(-i (X-delta) x / nu) dx
                  / sqrt(2 pi |nu|)

    and w = |<X|psi>|^2.  For |mu| > |nu| the same integral is evaluated in
    the momentum representation with frame (nu, -mu, delta), which keeps the
    dividing coefficient large and the integrand well resolved; at nu = 0
    with the output points landing on grid nodes the exact rescaled density
    |psi((X-delta)/mu)|^2 / |mu| is used directly.  Pass ``psi_momentum``
    (from :func:`momentum_wavefunction`) to reuse the transform across
    frames.
    """
    x_out = np.asarray(x_grid, dtype=float)
    if abs(frame.nu) >= abs(frame.mu):
        values = _chirp_tomogram(psi.values, psi.x_grid, frame, x_out)
        return Tomogram(frame, x_out, values, psi.time, psi.spec)
    if frame.nu == 0.0:
        mapped = (x_out - frame.delta) / frame.mu
        dx = grid_spacing(psi.x_grid, "x_grid")
        pos = (mapped - psi.x_grid[0]) / dx
        idx = np.rint(pos)
        aligned = (
            np.all(np.abs(pos - idx) < 1e-9)
            and idx.min() >= 0
            and idx.max() < len(psi.x_grid)
        )
        if aligned:
            dens = np.abs(psi.values[idx.astype(np.int64)]) ** 2
            return Tomogram(frame, x_out, dens / abs(frame.mu), psi.time, psi.spec)
    if psi_momentum is None:
        psi_momentum = momentum_wavefunction(psi)
    swapped = ReferenceFrame(frame.nu, -frame.mu, frame.delta)
    values = _chirp_tomogram(psi_momentum.values, psi_momentum.x_grid, swapped,
                             x_out)
    return Tomogram(frame, x_out, values, psi.time, psi.spec)


# --------------------------------------------------------------------------
# Tomogram families and the inverse transform
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TomogramFamily:
    """Tomograms on a regular (mu, nu) lattice sharing one X grid, delta = const.

    ``origin_index`` marks the lattice node at exactly (0, 0), which is a
    degenerate frame (the tomogram would be a delta spike); its value slab is
    ignored and the inversion substitutes the exact limit of the X-Fourier
    transform there, F = 1, forced by tomogram normalization.
    """

    mu_grid: np.ndarray
    nu_grid: np.ndarray
    x_grid: np.ndarray
    values: np.ndarray  # (n_mu, n_nu, n_x)
    delta: float = 0.0
    time: float = 0.0
    spec: Optional[StateSpec] = None
    origin_index: Optional[tuple] = None

    def __post_init__(self):
        expected = (len(self.mu_grid), len(self.nu_grid), len(self.x_grid))
        if self.values.shape != expected:
            raise ValueError(
                f"family values shape {self.values.shape} != grids {expected}"
            )


def family_grid(box_halfwidth, spacing):
    """Symmetric lattice axis for a family box [-M, M] at the given spacing.

    Built from integer indices so 0 and the +/- pairs are exact.
    """
    half = int(round(box_halfwidth / spacing))
    if not np.isclose(half * spacing, box_halfwidth, rtol=1e-9, atol=1e-12):
        raise ValueError(
            f"box half-width {box_halfwidth} is not an integer multiple of "
            f"spacing {spacing}"
        )
    if half < 1:
        raise ValueError("family box must contain more than the origin")
    return centered_grid(half, spacing)


def build_family(evaluate, mu_grid, nu_grid, x_grid, *, delta=0.0, time=0.0,
                 spec=None):
    """Tabulate ``evaluate(frame) -> values`` over the lattice.

    The (0,0) node, if present, is skipped and marked in ``origin_index``.
    """
    mu_grid = np.asarray(mu_grid, dtype=float)
    nu_grid = np.asarray(nu_grid, dtype=float)
    x_grid = np.asarray(x_grid, dtype=float)
    values = np.zeros((len(mu_grid), len(nu_grid), len(x_grid)))
    origin = None
    for i, mu in enumerate(mu_grid):
        for j, nu in enumerate(nu_grid):
            if mu == 0.0 and nu == 0.0:
                origin = (i, j)
                continue
            values[i, j] = evaluate(ReferenceFrame(mu, nu, delta))
    return TomogramFamily(mu_grid, nu_grid, x_grid, values, delta=delta,
                          time=time, spec=spec, origin_index=origin)


def family_from_analytic(spec, eps, eps_dot, mu_grid, nu_grid, x_grid, *,
                         delta=0.0, time=0.0):
    """Family of closed-form tomograms.  Coverage checks are off: family
    boxes are deliberately truncated and the inversion compensates."""

    def evaluate(frame):
        return marginal_analytic(spec, eps, eps_dot, frame, x_grid,
                                 time=time, check_coverage=False).values

    return build_family(evaluate, mu_grid, nu_grid, x_grid, delta=delta,
                        time=time, spec=spec)


def family_from_tomograms(tomograms):
    """Assemble a TomogramFamily from Tomogram objects.

    Validates the spec's family preconditions: a full regular (mu, nu)
    lattice, one shared X grid, and delta = 0 for every member.
    """
    tomograms = list(tomograms)
    if len(tomograms) < 2:
        raise ValueError("family needs more than one tomogram")
    x_grid = tomograms[0].x_grid
    for t in tomograms:
        if t.frame.delta != 0.0:
            raise ValueError("family members must have delta = 0")
        if len(t.x_grid) != len(x_grid) or not np.array_equal(t.x_grid, x_grid):
            raise ValueError("family members must share one X grid")
    mus = np.unique([t.frame.mu for t in tomograms])
    nus = np.unique([t.frame.nu for t in tomograms])
    grid_spacing(mus, "mu lattice")
    grid_spacing(nus, "nu lattice")
    values = np.zeros((len(mus), len(nus), len(x_grid)))
    seen = np.zeros((len(mus), len(nus)), dtype=bool)
    for t in tomograms:
        i = int(np.searchsorted(mus, t.frame.mu))
        j = int(np.searchsorted(nus, t.frame.nu))
        values[i, j] = t.values
        seen[i, j] = True
    origin = None
    if 0.0 in mus and 0.0 in nus:
        origin = (int(np.searchsorted(mus, 0.0)), int(np.searchsorted(nus, 0.0)))
        seen[origin] = True
    if not seen.all():
        raise ValueError("family lattice has holes; every (mu, nu) node needs "
                         "a tomogram")
    t0 = tomograms[0]
    return TomogramFamily(mus, nus, x_grid, values, delta=0.0, time=t0.time,
                          spec=t0.spec, origin_index=origin)


def _fourier_slices(family, tail_correction):
    """F(mu, nu) = int w(X, mu, nu) e^{iX} dX per lattice node.

    Trapezoid on the X grid; with ``tail_correction`` the analytic value of
    the two truncated oscillatory tails,

        int_a^inf g e^{iX} dX = e^{ia} (i g(a) - g'(a) - i g''(a)) + ...,

    is added from the endpoint samples (one-sided differences).  Without it,
    wide tomograms cut by the X window leave O(g(edge)) errors in F that
    wreck the reconstruction.
    """
    x = family.x_grid
    h = grid_spacing(x, "x_grid")
    w = family.values
    kern = np.exp(1j * x) * trapezoid_weights(x)
    f_tab = w.reshape(-1, len(x)).astype(complex) @ kern
    f_tab = f_tab.reshape(w.shape[0], w.shape[1])
    if tail_correction:
        ga = w[..., -1]
        gb = w[..., 0]
        gpa = (3.0 * w[..., -1] - 4.0 * w[..., -2] + w[..., -3]) / (2.0 * h)
        gpb = (-3.0 * w[..., 0] + 4.0 * w[..., 1] - w[..., 2]) / (2.0 * h)
        gppa = (2.0 * w[..., -1] - 5.0 * w[..., -2] + 4.0 * w[..., -3]
                - w[..., -4]) / h**2
        gppb = (2.0 * w[..., 0] - 5.0 * w[..., 1] + 4.0 * w[..., 2]
                - w[..., 3]) / h**2
        f_tab = f_tab + np.exp(1j * x[-1]) * (1j * ga - gpa - 1j * gppa)
        f_tab = f_tab + np.exp(1j * x[0]) * (-1j * gb + gpb + 1j * gppb)
    if family.origin_index is not None:
        f_tab[family.origin_index] = 1.0
    return f_tab


def inverse_transform(family, q_grid, p_grid, *, tail_correction=True):
    """Reconstruct the Wigner map from a tomogram family at delta = 0.

    Direct triple quadrature with trapezoid weights and the kernel
    e^{i(X - mu q - nu p)} evaluated exactly per sample (plus the oscillatory
    tail correction of the X integral, see _fourier_slices).  The result is
    renormalized to the package Wigner convention; the raw constant is kept
    in ``norm_constant`` and the largest imaginary part discarded in
    ``imag_residue``.
    """
    if not isinstance(family, TomogramFamily):
        family = family_from_tomograms(family)
    if family.delta != 0.0:
        raise ValueError("inversion requires a delta = 0 family")
    if len(family.mu_grid) < 2 or len(family.nu_grid) < 2:
        raise ValueError("inversion requires a 2-d (mu, nu) family")
    for g, name in ((family.mu_grid, "mu"), (family.nu_grid, "nu")):
        grid_spacing(g, f"{name} lattice")
        if abs(g[0] + g[-1]) > 1e-9 * max(1.0, abs(g[-1])):
            raise ValueError(f"{name} lattice must be symmetric around 0")

    q_grid = np.asarray(q_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    f_tab = _fourier_slices(family, tail_correction)
    w_complex = _kernels.phase_profile(
        f_tab, family.mu_grid, family.nu_grid,
        trapezoid_weights(family.mu_grid), trapezoid_weights(family.nu_grid),
        q_grid, p_grid,
    ) / (2.0 * np.pi)
    imag_residue = float(np.abs(w_complex.imag).max())
    values = np.ascontiguousarray(w_complex.real)
    raw = WignerMap(q_grid, p_grid, values, family.time, family.spec).norm()
    return WignerMap(q_grid, p_grid, values / raw, family.time, family.spec,
                     norm_constant=float(raw), imag_residue=imag_residue)
