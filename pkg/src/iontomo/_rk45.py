"""Adaptive Dormand-Prince 5(4) integrator with cubic-Hermite dense output.

The embedded pair advances with the 5th-order solution and controls the step
from the 4th-order error estimate (standard scaled-norm controller, safety
0.9, step factor clamped to [0.2, 5]).  Accepted nodes keep the state *and*
its derivative (FSAL stage), so dense evaluation between nodes is a cubic
Hermite interpolant at no extra cost.

The cubic interpolant is one order below the stepper, so callers that need
interpolated values at the integration tolerance must cap the step size; see
``dense_step_cap``.
"""

import numpy as np

from .errors import IntegrationError

# Dormand-Prince Butcher tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4: weights of the embedded error estimate
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def dense_step_cap(rtol, curvature_scale):
    """Step bound making the cubic Hermite error comparable to rtol.

    The interpolation error is ~ h^4 |y''''| / 384; with |y''''| ~
    curvature_scale * |y| the relative error stays below rtol for
    h <= (384 rtol / curvature_scale)^(1/4).
    """
    return _SAFETY * (384.0 * rtol / max(curvature_scale, 1e-300)) ** 0.25


def integrate(rhs, t0, y0, t_end, rtol, atol, max_step=np.inf):
    """Integrate y' = rhs(t, y) from t0 to t_end (t_end > t0).

    Returns (ts, ys, fs): accepted nodes, states and derivatives, with the
    endpoints landed exactly.  Raises IntegrationError on step underflow or
    non-finite state.
    """
    y = np.asarray(y0, dtype=float).copy()
    t = float(t0)
    t_end = float(t_end)
    if not t_end > t:
        raise ValueError("t_end must exceed t0")

    f = np.asarray(rhs(t, y), dtype=float)
    ts = [t]
    ys = [y.copy()]
    fs = [f.copy()]

    # initial step: conservative fraction of the span and of the cap
    h = min(1e-3 * (t_end - t0) + 1e-6, max_step, t_end - t0)
    k = np.empty((7, y.size))

    while t < t_end:
        h = min(h, t_end - t, max_step)
        if h < 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t!r}", time=t)

        k[0] = f
        for i in range(1, 7):
            yi = y + h * (_A[i] @ k[:i])
            k[i] = rhs(t + _C[i] * h, yi)
        y_new = y + h * (_B5 @ k)
        if not np.all(np.isfinite(y_new)):
            raise IntegrationError(f"non-finite state at t={t + h!r}", time=t + h)

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((h * (_E @ k) / scale) ** 2))

        if err <= 1.0:
            t = t + h
            y = y_new
            f = k[6].copy()  # FSAL: last stage is rhs(t+h, y_new)
            ts.append(t)
            ys.append(y.copy())
            fs.append(f.copy())
            factor = _MAX_FACTOR if err == 0.0 else _SAFETY * err ** -0.2
            h *= min(_MAX_FACTOR, max(1.0, factor))
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)

    return np.array(ts), np.array(ys), np.array(fs)


def hermite_eval(ts, ys, fs, t):
    """Cubic Hermite evaluation of the stored solution at times t.

    Exact at the nodes.  ``t`` may be a scalar or an array inside
    [ts[0], ts[-1]].
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < ts[0]) or np.any(t_arr > ts[-1]):
        raise ValueError(
            f"time out of range [{ts[0]}, {ts[-1]}]: {t_arr.min()}..{t_arr.max()}"
        )
    idx = np.clip(np.searchsorted(ts, t_arr, side="right") - 1, 0, len(ts) - 2)
    h = ts[idx + 1] - ts[idx]
    s = (t_arr - ts[idx]) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    out = (
        h00[:, None] * ys[idx]
        + (h * h10)[:, None] * fs[idx]
        + h01[:, None] * ys[idx + 1]
        + (h * h11)[:, None] * fs[idx + 1]
    )
    # nodes must come back bit-exact
    on_node = s == 0.0
    if np.any(on_node):
        out[on_node] = ys[idx[on_node]]
    end_node = t_arr == ts[-1]
    if np.any(end_node):
        out[end_node] = ys[-1]
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out
