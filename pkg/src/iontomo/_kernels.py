"""Hot numeric kernels, in numba and pure-numpy flavours.

Every kernel is written twice: ``*_numpy`` (vectorized fallback) and a numba
``@njit(parallel=...)`` version compiled lazily on first call.  The public
names (``wigner_sum``, ``line_integral_batch``, ``phase_profile``,
``chirp_amplitude``) are bound to one flavour according to
:mod:`iontomo._backend`.  Both flavours keep a fixed summation order per
output element, so each backend is individually deterministic.

benchmarks/bench_backends.py times the two flavours against each other.
"""

import numpy as np

from ._backend import USE_NUMBA

# --------------------------------------------------------------------------
# Wigner transform:  W(q_m, p) = 2*dx * sum_k wt_k conj(psi[m+k]) psi[m-k]
#                                      * exp(i p * 2 k dx)
# q points must sit on x-grid nodes (index array q_idx); trapezoid in k.
# --------------------------------------------------------------------------


def wigner_sum_numpy(psi, dx, q_idx, p):
    n = len(psi)
    out = np.empty((len(q_idx), len(p)), dtype=np.complex128)
    for a, m in enumerate(q_idx):
        k_max = min(m, n - 1 - m)
        k = np.arange(-k_max, k_max + 1)
        c = np.conj(psi[m + k]) * psi[m - k]
        wt = np.ones(2 * k_max + 1)
        if k_max > 0:
            wt[0] = wt[-1] = 0.5
        out[a] = np.exp(1j * np.outer(p, 2.0 * dx * k)) @ (c * wt) * (2.0 * dx)
    return out


# --------------------------------------------------------------------------
# Line-integral transform of a Wigner map along mu*q + nu*p = X - delta,
# bilinear interpolation, arc-length trapezoid at spacing hs.  Also returns
# |W| sampled at the two clipped segment endpoints (box-coverage diagnostic).
# --------------------------------------------------------------------------


def _clip_line(base_q, base_p, tq, tp, qlo, qhi, plo, phi_):
    s_min, s_max = -1e300, 1e300
    for pos, d, lo, hi in ((base_q, tq, qlo, qhi), (base_p, tp, plo, phi_)):
        if abs(d) < 1e-300:
            if pos < lo or pos > hi:
                return 1.0, 0.0
        else:
            s1 = (lo - pos) / d
            s2 = (hi - pos) / d
            if s1 > s2:
                s1, s2 = s2, s1
            s_min = max(s_min, s1)
            s_max = min(s_max, s2)
    return s_min, s_max


def _bilinear_numpy(w, qlo, dq, plo, dp, qq, pp):
    nq, np_ = w.shape
    fi = np.clip((qq - qlo) / dq, 0.0, nq - 1.000000001)
    fj = np.clip((pp - plo) / dp, 0.0, np_ - 1.000000001)
    i0 = fi.astype(np.int64)
    j0 = fj.astype(np.int64)
    fx = fi - i0
    fy = fj - j0
    return (
        w[i0, j0] * (1 - fx) * (1 - fy)
        + w[i0 + 1, j0] * fx * (1 - fy)
        + w[i0, j0 + 1] * (1 - fx) * fy
        + w[i0 + 1, j0 + 1] * fx * fy
    )


def line_integral_batch_numpy(w, qlo, dq, plo, dp, mu, nu, delta, x_vals, hs):
    nq, np_ = w.shape
    qhi = qlo + dq * (nq - 1)
    phi_ = plo + dp * (np_ - 1)
    r = np.hypot(mu, nu)
    nq_hat, np_hat = mu / r, nu / r
    tq, tp = -nu / r, mu / r
    vals = np.zeros(len(x_vals))
    edge = np.zeros(len(x_vals))
    for a, x in enumerate(x_vals):
        c = (x - delta) / r
        s_min, s_max = _clip_line(c * nq_hat, c * np_hat, tq, tp, qlo, qhi, plo, phi_)
        if s_min >= s_max:
            continue
        m = max(2, int(np.ceil((s_max - s_min) / hs)) + 1)
        s = np.linspace(s_min, s_max, m)
        samples = _bilinear_numpy(
            w, qlo, dq, plo, dp, c * nq_hat + s * tq, c * np_hat + s * tp
        )
        vals[a] = np.trapezoid(samples, dx=s[1] - s[0]) / (2.0 * np.pi * r)
        edge[a] = max(abs(samples[0]), abs(samples[-1]))
    return vals, edge


# --------------------------------------------------------------------------
# Oscillatory phase sums for the tomographic inversion:
#   out[a, b] = sum_ij wmu_i wnu_j F[i, j] exp(-i (mu_i q_a + nu_j p_b))
# factored through the intermediate G[i, b] (exact per-sample kernel, only
# the association order changes).
# --------------------------------------------------------------------------


def phase_profile_numpy(f_tab, mus, nus, wmu, wnu, q, p):
    g = (f_tab * wnu[None, :]) @ np.exp(-1j * np.outer(nus, p))
    return np.exp(-1j * np.outer(mus, q)).T @ (wmu[:, None] * g)


# --------------------------------------------------------------------------
# Chirp (fractional-Fourier) amplitude for the frame-quadrature oracle:
#   amp[a] = sum_k vals_k wt_k exp(i (chirp x_k^2 - freq_a x_k))
# --------------------------------------------------------------------------


def chirp_amplitude_numpy(vals, x, wts, chirp, freqs):
    ker = vals * wts * np.exp(1j * chirp * x * x)
    return np.exp(-1j * np.outer(freqs, x)) @ ker


if USE_NUMBA:
    from numba import njit, prange

    @njit(cache=True, parallel=True)
    def _wigner_sum_jit(psi, dx, q_idx, p):  # pragma: no cover - numba
        n = psi.shape[0]
        nq = q_idx.shape[0]
        np_ = p.shape[0]
        out = np.empty((nq, np_), dtype=np.complex128)
        for a in prange(nq):
            m = q_idx[a]
            k_max = min(m, n - 1 - m)
            for b in range(np_):
                acc_re = 0.0
                acc_im = 0.0
                for k in range(-k_max, k_max + 1):
                    c = np.conj(psi[m + k]) * psi[m - k]
                    wt = 1.0
                    if k_max > 0 and (k == -k_max or k == k_max):
                        wt = 0.5
                    th = p[b] * 2.0 * dx * k
                    cc = np.cos(th)
                    ss = np.sin(th)
                    acc_re += wt * (c.real * cc - c.imag * ss)
                    acc_im += wt * (c.real * ss + c.imag * cc)
                out[a, b] = complex(acc_re, acc_im) * (2.0 * dx)
        return out

    @njit(cache=True, parallel=True)
    def _line_integral_batch_jit(
        w, qlo, dq, plo, dp, mu, nu, delta, x_vals, hs
    ):  # pragma: no cover - numba
        nq, np_ = w.shape
        qhi = qlo + dq * (nq - 1)
        phi_ = plo + dp * (np_ - 1)
        r = np.hypot(mu, nu)
        nq_hat = mu / r
        np_hat = nu / r
        tq = -nu / r
        tp = mu / r
        nx = x_vals.shape[0]
        vals = np.zeros(nx)
        edge = np.zeros(nx)
        for a in prange(nx):
            c = (x_vals[a] - delta) / r
            bq = c * nq_hat
            bp = c * np_hat
            s_min = -1e300
            s_max = 1e300
            ok = True
            if abs(tq) < 1e-300:
                if bq < qlo or bq > qhi:
                    ok = False
            else:
                s1 = (qlo - bq) / tq
                s2 = (qhi - bq) / tq
                if s1 > s2:
                    s1, s2 = s2, s1
                s_min = max(s_min, s1)
                s_max = min(s_max, s2)
            if abs(tp) < 1e-300:
                if bp < plo or bp > phi_:
                    ok = False
            else:
                s1 = (plo - bp) / tp
                s2 = (phi_ - bp) / tp
                if s1 > s2:
                    s1, s2 = s2, s1
                s_min = max(s_min, s1)
                s_max = min(s_max, s2)
            if not ok or s_min >= s_max:
                continue
            m = int(np.ceil((s_max - s_min) / hs)) + 1
            if m < 2:
                m = 2
            step = (s_max - s_min) / (m - 1)
            acc = 0.0
            first = 0.0
            last = 0.0
            for idx in range(m):
                s = s_min + step * idx
                qq = bq + s * tq
                pp = bp + s * tp
                fi = (qq - qlo) / dq
                fj = (pp - plo) / dp
                if fi < 0.0:
                    fi = 0.0
                if fi > nq - 1.000000001:
                    fi = nq - 1.000000001
                if fj < 0.0:
                    fj = 0.0
                if fj > np_ - 1.000000001:
                    fj = np_ - 1.000000001
                i0 = int(fi)
                j0 = int(fj)
                fx = fi - i0
                fy = fj - j0
                val = (
                    w[i0, j0] * (1 - fx) * (1 - fy)
                    + w[i0 + 1, j0] * fx * (1 - fy)
                    + w[i0, j0 + 1] * (1 - fx) * fy
                    + w[i0 + 1, j0 + 1] * fx * fy
                )
                wt = 1.0
                if idx == 0 or idx == m - 1:
                    wt = 0.5
                acc += wt * val
                if idx == 0:
                    first = val
                if idx == m - 1:
                    last = val
            vals[a] = acc * step / (2.0 * np.pi * r)
            edge[a] = max(abs(first), abs(last))
        return vals, edge

    @njit(cache=True, parallel=True)
    def _phase_profile_jit(f_tab, mus, nus, wmu, wnu, q, p):  # pragma: no cover
        nmu = mus.shape[0]
        nnu = nus.shape[0]
        nq = q.shape[0]
        np_ = p.shape[0]
        g = np.empty((nmu, np_), dtype=np.complex128)
        for i in prange(nmu):
            for b in range(np_):
                acc_re = 0.0
                acc_im = 0.0
                for j in range(nnu):
                    th = -nus[j] * p[b]
                    cc = np.cos(th)
                    ss = np.sin(th)
                    fv = f_tab[i, j] * wnu[j]
                    acc_re += fv.real * cc - fv.imag * ss
                    acc_im += fv.real * ss + fv.imag * cc
                g[i, b] = complex(acc_re, acc_im)
        out = np.empty((nq, np_), dtype=np.complex128)
        for a in prange(nq):
            for b in range(np_):
                acc_re = 0.0
                acc_im = 0.0
                for i in range(nmu):
                    th = -mus[i] * q[a]
                    cc = np.cos(th)
                    ss = np.sin(th)
                    gv = g[i, b] * wmu[i]
                    acc_re += gv.real * cc - gv.imag * ss
                    acc_im += gv.real * ss + gv.imag * cc
                out[a, b] = complex(acc_re, acc_im)
        return out

    @njit(cache=True, parallel=True)
    def _chirp_amplitude_jit(vals, x, wts, chirp, freqs):  # pragma: no cover
        nx = x.shape[0]
        nf = freqs.shape[0]
        ker = np.empty(nx, dtype=np.complex128)
        for k in range(nx):
            th = chirp * x[k] * x[k]
            ker[k] = vals[k] * wts[k] * complex(np.cos(th), np.sin(th))
        out = np.empty(nf, dtype=np.complex128)
        for a in prange(nf):
            acc_re = 0.0
            acc_im = 0.0
            for k in range(nx):
                th = -freqs[a] * x[k]
                cc = np.cos(th)
                ss = np.sin(th)
                kv = ker[k]
                acc_re += kv.real * cc - kv.imag * ss
                acc_im += kv.real * ss + kv.imag * cc
            out[a] = complex(acc_re, acc_im)
        return out

    def wigner_sum(psi, dx, q_idx, p):
        return _wigner_sum_jit(
            np.ascontiguousarray(psi, dtype=np.complex128),
            float(dx),
            np.ascontiguousarray(q_idx, dtype=np.int64),
            np.ascontiguousarray(p, dtype=np.float64),
        )

    def line_integral_batch(w, qlo, dq, plo, dp, mu, nu, delta, x_vals, hs):
        return _line_integral_batch_jit(
            np.ascontiguousarray(w, dtype=np.float64),
            float(qlo),
            float(dq),
            float(plo),
            float(dp),
            float(mu),
            float(nu),
            float(delta),
            np.ascontiguousarray(x_vals, dtype=np.float64),
            float(hs),
        )

    def phase_profile_numba(f_tab, mus, nus, wmu, wnu, q, p):
        return _phase_profile_jit(
            np.ascontiguousarray(f_tab, dtype=np.complex128),
            np.ascontiguousarray(mus, dtype=np.float64),
            np.ascontiguousarray(nus, dtype=np.float64),
            np.ascontiguousarray(wmu, dtype=np.float64),
            np.ascontiguousarray(wnu, dtype=np.float64),
            np.ascontiguousarray(q, dtype=np.float64),
            np.ascontiguousarray(p, dtype=np.float64),
        )

    # the factored phase sum is two complex matmuls; BLAS beats the explicit
    # trig loop by ~25x here (see benchmarks/bench_backends.py), so the numpy
    # flavour is the production path on both backends
    phase_profile = phase_profile_numpy

    def chirp_amplitude(vals, x, wts, chirp, freqs):
        return _chirp_amplitude_jit(
            np.ascontiguousarray(vals, dtype=np.complex128),
            np.ascontiguousarray(x, dtype=np.float64),
            np.ascontiguousarray(wts, dtype=np.float64),
            float(chirp),
            np.ascontiguousarray(freqs, dtype=np.float64),
        )

else:
    wigner_sum = wigner_sum_numpy
    line_integral_batch = line_integral_batch_numpy
    phase_profile = phase_profile_numpy
    phase_profile_numba = None
    chirp_amplitude = chirp_amplitude_numpy
