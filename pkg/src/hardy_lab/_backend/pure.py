"""Pure numpy fallback for the compiled kernels in ``_native``.

Same functions, same semantics, chosen automatically when the extension is
not built (or when ``HARDY_LAB_PURE=1``).  The double-double arithmetic is
vectorised with error-free transforms; since numpy has no fused
multiply-add, Dekker splitting replaces the fma-based product.
"""

from __future__ import annotations

import math

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1

_P3H = 9.42477796076937935
_P3L = 3.6739403974420594e-16
_T2H = 6.283185307179586232
_T2L = 2.4492935982947064e-16
_INV_2PI = 0.15915494309189534561
_PI8 = 0.39269908169872415481


def _two_prod(a, b):
    p = a * b
    ca = _SPLIT * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLIT * b
    bh = cb - (cb - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def z_block(ts, theta_coefs, corr_flat, corr_off, corr_len, log_n, rsqrt_n, out):
    ts = np.asarray(ts)
    a = np.sqrt(ts / (2.0 * math.pi))
    N = np.floor(a).astype(np.int64)
    ti = 1.0 / ts
    ti2 = ti * ti
    acc = np.zeros_like(ts)
    for c in theta_coefs[::-1]:
        acc = acc * ti2 + c
    th = 0.5 * ts * np.log(ts / (2.0 * math.pi)) - 0.5 * ts - math.pi / 8.0 + acc * ti
    s = np.zeros_like(ts)
    nmax = int(N.max()) if len(N) else 0
    for n in range(1, nmax + 1):
        mask = N >= n
        s[mask] += rsqrt_n[n] * np.cos(th[mask] - ts[mask] * log_n[n])
    s *= 2.0
    q = (a - N) - 0.5
    corr = np.zeros_like(ts)
    ai = np.ones_like(ts)
    for j in range(5):
        lo, ln = int(corr_off[j]), int(corr_len[j])
        c = np.zeros_like(ts)
        for k in range(lo + ln - 1, lo - 1, -1):
            c = c * q + corr_flat[k]
        corr += c * ai
        ai = ai / a
    corr = np.where(N % 2 == 0, -corr, corr)
    out[:] = s + corr / np.sqrt(a)


def dirichlet_step(prev, out):
    prev = np.asarray(prev)
    n = len(prev)
    out[:] = 0
    for d in range(1, n + 1):
        out[d - 1 :: d] += prev[d - 1]


def expsum_cos(n0, weights):
    weights = np.asarray(weights)
    nd = n0 + np.arange(len(weights), dtype=np.float64)
    xh, xl = _two_prod(nd, nd)
    u = np.cbrt(xh)
    ph, pl = _two_prod(u, u)
    qh, ql = _two_prod(ph, u)
    ql = ql + pl * u
    rh, rl = _two_sum(qh, -xh)
    delta = (rh + (rl + ql - xl)) / (3.0 * ph)
    yh, yl = _two_sum(u, -delta)  # n^{2/3} = cbrt(n^2), Newton-polished
    th_h, th_l = _two_prod(_P3H, yh)
    th_l = th_l + _P3H * yl + _P3L * yh
    k = np.rint(th_h * _INV_2PI)
    sh, sl = _two_prod(_T2H, k)
    sl = sl + _T2L * k
    r_h, r_e = _two_sum(th_h, -sh)
    phase = r_h + (r_e + th_l - sl) + _PI8
    terms = weights * np.cos(phase)
    return math.fsum(terms)
