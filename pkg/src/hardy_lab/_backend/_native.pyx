# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: Riemann-Siegel evaluation of Z(t), the Dirichlet
convolution step of the divisor sieve, and the double-double phase
exponential sum.  The pure-numpy twin of this module is ``pure.py``; both
expose the same functions and must agree to rounding noise (see the
backend parity tests)."""

from libc.math cimport sqrt, log, cos, floor, fma, cbrt, nearbyint, M_PI


def z_block(double[::1] ts,
            double[::1] theta_coefs,
            double[::1] corr_flat,
            long long[::1] corr_off,
            long long[::1] corr_len,
            double[::1] log_n,
            double[::1] rsqrt_n,
            double[::1] out):
    """Hardy Z(t) for every t in ``ts`` (all >= 10, below the table limit).

    Main sum of length floor(sqrt(t/2pi)) plus the full five-term
    correction block evaluated from the Taylor tables in ``corr_*``.
    ``log_n``/``rsqrt_n`` must cover n up to the largest main-sum length.
    """
    cdef Py_ssize_t i, n, j, k, nterms, N
    cdef double t, a, th, s, p, q, corr, ai, acc, ti, ti2
    cdef double TWO_PI = 2.0 * M_PI
    cdef Py_ssize_t M = ts.shape[0]
    nterms = theta_coefs.shape[0]
    with nogil:
        for i in range(M):
            t = ts[i]
            a = sqrt(t / TWO_PI)
            N = <Py_ssize_t>floor(a)
            p = a - N
            ti = 1.0 / t
            ti2 = ti * ti
            acc = 0.0
            for j in range(nterms - 1, -1, -1):
                acc = acc * ti2 + theta_coefs[j]
            th = 0.5 * t * log(t / TWO_PI) - 0.5 * t - M_PI / 8.0 + acc * ti
            s = 0.0
            for n in range(1, N + 1):
                s += cos(th - t * log_n[n]) * rsqrt_n[n]
            s *= 2.0
            q = p - 0.5
            corr = 0.0
            ai = 1.0
            for j in range(5):
                acc = 0.0
                for k in range(corr_off[j] + corr_len[j] - 1, corr_off[j] - 1, -1):
                    acc = acc * q + corr_flat[k]
                corr += acc * ai
                ai /= a
            if (N & 1) == 0:
                corr = -corr
            out[i] = s + corr / sqrt(a)


def dirichlet_step(long long[::1] prev, long long[::1] out):
    """out[m-1] = sum over divisors d of m of prev[d-1], for m = 1..len."""
    cdef Py_ssize_t N = prev.shape[0]
    cdef Py_ssize_t d, m
    cdef long long v
    with nogil:
        for m in range(N):
            out[m] = 0
        for d in range(1, N + 1):
            v = prev[d - 1]
            m = d - 1
            while m < N:
                out[m] += v
                m += d


cdef inline double _two_sum(double a, double b, double *err) nogil:
    cdef double s = a + b
    cdef double bb = s - a
    err[0] = (a - (s - bb)) + (b - bb)
    return s


def expsum_cos(long long n0, double[::1] weights):
    """sum_i weights[i] * cos(3 pi (n0+i)^{2/3} + pi/8), double-double phase.

    The cube root of n^2 is refined by one Newton step in double-double
    arithmetic and the phase is reduced mod 2 pi before the cosine, so the
    argument is accurate to ~1e-20 even at n = 1e8.  Accumulation is
    Neumaier-compensated and strictly sequential, which makes the result
    independent of any outer blocking.
    """
    cdef Py_ssize_t i, M = weights.shape[0]
    cdef double nd, xh, xl, u, ph, pl, qh, ql, rh, rl, delta
    cdef double yh, yl, th_h, th_l, k, sh, sl, r_h, r_e, phase, w, term
    cdef double total = 0.0, comp = 0.0, tnew
    # 3 pi and 2 pi as double-doubles
    cdef double P3H = 9.42477796076937935
    cdef double P3L = 3.6739403974420594e-16
    cdef double T2H = 6.283185307179586232
    cdef double T2L = 2.4492935982947064e-16
    cdef double INV_2PI = 0.15915494309189534561
    cdef double PI8 = 0.39269908169872415481
    with nogil:
        for i in range(M):
            nd = <double>(n0 + i)
            xh = nd * nd
            xl = fma(nd, nd, -xh)
            u = cbrt(xh)
            ph = u * u
            pl = fma(u, u, -ph)
            qh = ph * u
            ql = fma(ph, u, -qh) + pl * u
            rh = _two_sum(qh, -xh, &rl)
            delta = (rh + (rl + ql - xl)) / (3.0 * ph)
            yh = _two_sum(u, -delta, &yl)  # n^{2/3} = cbrt(n^2), Newton-polished
            th_h = P3H * yh
            th_l = fma(P3H, yh, -th_h) + P3H * yl + P3L * yh
            k = nearbyint(th_h * INV_2PI)
            sh = T2H * k
            sl = fma(T2H, k, -sh) + T2L * k
            r_h = _two_sum(th_h, -sh, &r_e)
            phase = r_h + (r_e + th_l - sl) + PI8
            w = weights[i]
            term = w * cos(phase)
            tnew = total + term
            if (total if total >= 0 else -total) >= (term if term >= 0 else -term):
                comp += (total - tnew) + term
            else:
                comp += (term - tnew) + total
            total = tnew
    return total + comp
