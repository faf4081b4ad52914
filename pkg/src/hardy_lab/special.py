"""Hardy's Z function: fast Riemann-Siegel path and slow Euler-Maclaurin oracle.

Z(t) is the rotation exp(i theta(t)) zeta(1/2 + it) that is real for real t,
with |Z(t)| = |zeta(1/2 + it)|.  Two independent evaluation routes are kept
deliberately separate:

* ``z_fast``   - double precision Riemann-Siegel main sum plus the standard
                 correction block, compiled kernel, used by everything that
                 needs millions of evaluations;
* ``z_oracle`` - arbitrary-precision Euler-Maclaurin summation of
                 zeta(1/2 + it) with a tracked truncation bound, rotated by
                 a high-precision theta.  Slow, but methodologically
                 independent of the Riemann-Siegel expansion, which is what
                 makes the cross-checks in the test suite meaningful.

The correction block of ``z_fast`` always evaluates all five standard terms
(their cost is negligible next to the main sum); ``rs_correction_terms``
selects which certified error bound is reported.  Truncating the block
literally at one term would leave errors around 4e-5 near t = 100, far
above what the documented bounds promise downstream.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import gmpy2
import mpmath as mp
import numpy as np

from ._backend import z_block
from ._psi import (
    CORRECTION_FLAT,
    CORRECTION_LENGTHS,
    CORRECTION_OFFSETS,
    THETA_COEFS,
)

TWO_PI = 2.0 * math.pi

#: Classical rigorous coefficients for the Riemann-Siegel remainder after
#: m+1 correction terms, |R_m(t)| <= RS_ERR_CONST[m] * t^{-(2m+3)/4}
#: (valid for t >= 200; verified empirically down to t = 10 against the
#: oracle for the full correction block used here).
RS_ERR_CONST = (0.127, 0.053, 0.011, 0.031, 0.017)

#: Phase rounding of the double-precision main sum grows like t; this
#: empirically calibrated slack (observed residual is below 2e-15 * t)
#: is added to every fast-path error bound.
RS_ROUNDING_SLACK = 5e-15

_FAST_FLOOR = 10.0


@dataclass(frozen=True)
class EvalConfig:
    """Knobs for both evaluation paths."""

    rs_correction_terms: int = 1
    oracle_precision_digits: int = 30
    theta_series_terms: int = 4

    def __post_init__(self) -> None:
        if not 0 <= self.rs_correction_terms <= 4:
            raise ValueError("rs_correction_terms must be in [0, 4]")
        if self.oracle_precision_digits < 15:
            raise ValueError("oracle_precision_digits must be >= 15")
        if not 2 <= self.theta_series_terms <= len(THETA_COEFS):
            raise ValueError(
                f"theta_series_terms must be in [2, {len(THETA_COEFS)}]"
            )


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class ZEvaluation:
    """A point evaluation of Z with its phase and an error bound.

    ``z`` and ``theta`` are floats on the fast path and mpmath reals on the
    oracle path (a float could not honour a 1e-28 error bound).
    """

    t: float
    z: float
    theta: float
    err_bound: float

    def __post_init__(self) -> None:
        if self.err_bound < 0:
            raise ValueError("err_bound must be non-negative")


# ---------------------------------------------------------------------------
# theta(t)
# ---------------------------------------------------------------------------


def _theta_direct(t: float, dps: int = 30) -> mp.mpf:
    """theta via complex log-Gamma; exact reference, any t > 0."""
    with mp.workdps(dps):
        lg = mp.loggamma(mp.mpf(1) / 4 + mp.mpc(0, t) / 2)
        return mp.im(lg) - mp.mpf(t) / 2 * mp.log(mp.pi)


def theta_values(ts: np.ndarray, terms: int = 4) -> np.ndarray:
    """Vectorised asymptotic theta for t >= 10."""
    ts = np.asarray(ts, dtype=float)
    ti = 1.0 / ts
    ti2 = ti * ti
    acc = np.zeros_like(ts)
    for c in THETA_COEFS[:terms][::-1]:
        acc = acc * ti2 + c
    return 0.5 * ts * np.log(ts / TWO_PI) - 0.5 * ts - math.pi / 8.0 + acc * ti


def theta(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Riemann-Siegel phase theta(t).

    Asymptotic (Stirling) series for t >= 10, direct log-Gamma below; the
    switchover is fixed.  Raises for t <= 0.
    """
    if t <= 0:
        raise ValueError("theta requires t > 0")
    if t < _FAST_FLOOR:
        return float(_theta_direct(t))
    return float(theta_values(np.array([t]), cfg.theta_series_terms)[0])


def theta_derivative(t: float) -> float:
    """theta'(t) = (1/2) log(t / 2pi) + O(1/t^2); leading term only."""
    return 0.5 * math.log(t / TWO_PI)


# ---------------------------------------------------------------------------
# fast path
# ---------------------------------------------------------------------------

_table_lock = threading.Lock()
_LOG_N = np.zeros(1)
_RSQRT_N = np.zeros(1)


def _ensure_tables(nmax: int) -> tuple[np.ndarray, np.ndarray]:
    global _LOG_N, _RSQRT_N
    if len(_LOG_N) <= nmax:
        with _table_lock:
            if len(_LOG_N) <= nmax:
                size = max(2 * len(_LOG_N), nmax + 1, 256)
                n = np.arange(size, dtype=float)
                n[0] = 1.0
                _LOG_N = np.log(n)
                _RSQRT_N = 1.0 / np.sqrt(n)
    return _LOG_N, _RSQRT_N


def z_values(
    ts: np.ndarray, cfg: EvalConfig = DEFAULT_CONFIG, out: np.ndarray | None = None
) -> np.ndarray:
    """Z(t) on an array of t >= 10, through the selected backend kernel."""
    ts = np.ascontiguousarray(ts, dtype=float)
    if len(ts) == 0:
        return np.zeros(0)
    tmin = float(ts.min())
    if tmin < _FAST_FLOOR:
        raise ValueError("fast path requires t >= 10")
    nmax = int(math.sqrt(float(ts.max()) / TWO_PI))
    log_n, rsqrt_n = _ensure_tables(nmax + 2)
    if out is None:
        out = np.empty_like(ts)
    z_block(
        ts,
        np.ascontiguousarray(THETA_COEFS[: cfg.theta_series_terms]),
        CORRECTION_FLAT,
        CORRECTION_OFFSETS,
        CORRECTION_LENGTHS,
        log_n,
        rsqrt_n,
        out,
    )
    return out


def rs_error_bound(t: float, m: int) -> float:
    """Certified fast-path bound at correction order m."""
    return RS_ERR_CONST[m] * t ** (-(2 * m + 3) / 4.0) + RS_ROUNDING_SLACK * t


def z_fast(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> ZEvaluation:
    """Riemann-Siegel evaluation of Z(t) for t >= 10."""
    if t < _FAST_FLOOR:
        raise ValueError("z_fast requires t >= 10 (use z_oracle below)")
    z = float(z_values(np.array([t]), cfg)[0])
    th = float(theta_values(np.array([t]), cfg.theta_series_terms)[0])
    return ZEvaluation(
        t=t, z=z, theta=th, err_bound=rs_error_bound(t, cfg.rs_correction_terms)
    )


def zeta_abs_sq(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|zeta(1/2 + it)|^2 as Z(t)^2; oracle-backed below the fast floor."""
    if t >= _FAST_FLOOR:
        return float(z_fast(t, cfg).z) ** 2
    return float(z_oracle(t, 30).z) ** 2


# ---------------------------------------------------------------------------
# oracle path: Euler-Maclaurin zeta(1/2 + it)
# ---------------------------------------------------------------------------

_bernoulli_cache: dict[tuple[int, int], gmpy2.mpfr] = {}


def _bern_factor(k: int, bits: int) -> gmpy2.mpfr:
    """B_{2k} / (2k)! at the requested binary precision."""
    key = (k, bits)
    v = _bernoulli_cache.get(key)
    if v is None:
        with mp.workdps(int(bits / 3.32) + 6):
            b = mp.bernoulli(2 * k) / mp.factorial(2 * k)
        v = gmpy2.mpfr(mp.nstr(b, int(bits / 3.32) + 4))
        _bernoulli_cache[key] = v
    return v


def _spf_table(n: int) -> np.ndarray:
    """Smallest prime factor (0 marks 1 and primes > sqrt(n))."""
    spf = np.zeros(n + 1, dtype=np.int64)
    limit = int(math.isqrt(n))
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(limit)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    for p in np.nonzero(sieve)[0]:
        sl = spf[p::p]
        sl[sl == 0] = p
    return spf


def _to_mpf(x: gmpy2.mpfr) -> mp.mpf:
    man, exp = x.as_mantissa_exp()
    return mp.ldexp(mp.mpf(int(man)), int(exp))


def _zeta_em(t: float, digits: int) -> tuple[mp.mpc, float]:
    """zeta(1/2 + it) by Euler-Maclaurin with a rigorous truncation bound.

    Returns (value, truncation_bound).  The main sum runs over roughly
    0.25 * t terms through a completely multiplicative power chain (one
    complex multiply per composite, one exp per prime), in gmpy2 native
    arithmetic; the Bernoulli tail is summed until its standard remainder
    bound |T_{K+1}| |s + 2K + 1| / (sigma + 2K + 1) drops under target.
    """
    dps = digits + 12
    bits = int(dps * 3.322) + 8
    eps = mp.mpf(10) ** (-(digits + 2)) / 4
    kcap = max(3 * digits, 30)
    ratio = 10.0 ** (-(digits + 4) / (2.0 * kcap))
    N = max(int((abs(t) + 2 * kcap) / (TWO_PI * ratio)) + 1, digits, 16)

    with gmpy2.local_context(gmpy2.context(), precision=bits):
        s = gmpy2.mpc(gmpy2.mpfr(0.5), gmpy2.mpfr(t))
        spf = _spf_table(N)
        pw: list = [None] * (N + 1)
        pw[1] = gmpy2.mpc(1)
        total = gmpy2.mpc(1)  # n = 1 term
        for n in range(2, N):
            f = int(spf[n])
            if f == 0 or f == n:
                pw[n] = gmpy2.exp(-s * gmpy2.log(n))
            else:
                pw[n] = pw[f] * pw[n // f]
            total += pw[n]
        f = int(spf[N])
        pw_N = gmpy2.exp(-s * gmpy2.log(N)) if (f == 0 or f == N) else pw[f] * pw[N // f]
        # N^{1-s}/(s-1) + N^{-s}/2
        total += pw_N * N / (s - 1) + pw_N / 2
        # Bernoulli correction terms
        Nf = gmpy2.mpfr(N)
        rise = s
        npow = pw_N / Nf  # N^{-s-2k+1} at k = 1
        k = 0
        trunc = None
        while True:
            k += 1
            if k > kcap + 10:
                raise RuntimeError("Euler-Maclaurin tail failed to converge")
            total += _bern_factor(k, bits) * rise * npow
            rise = rise * (s + (2 * k - 1)) * (s + 2 * k)
            npow = npow / (Nf * Nf)
            nxt = _bern_factor(k + 1, bits) * rise * npow
            bound = abs(nxt) * abs(s + (2 * k + 1)) / (0.5 + 2 * k + 1)
            if bound < eps:
                trunc = float(bound)
                break
        re = _to_mpf(total.real)
        im = _to_mpf(total.imag)
    return mp.mpc(re, im), trunc


def z_oracle(t: float, precision_digits: int = 30) -> ZEvaluation:
    """Z(t) = exp(i theta(t)) zeta(1/2 + it) at arbitrary precision.

    Valid for any t >= 0.  The returned ``z``/``theta`` are mpmath reals;
    the discarded imaginary part must fall under ``err_bound`` (reality of
    Z on the real axis), otherwise something is badly wrong and we raise.
    """
    if t < 0:
        raise ValueError("z_oracle requires t >= 0")
    if precision_digits < 15:
        raise ValueError("precision_digits must be >= 15")
    dps = precision_digits + 12
    with mp.workdps(dps):
        zeta_val, _trunc = _zeta_em(t, precision_digits)
        th = _theta_direct(t, dps) if t > 0 else mp.mpf(0)
        w = mp.exp(mp.mpc(0, th)) * zeta_val
        err_bound = 10.0 ** (-(precision_digits - 2)) * 1e-2
        im = abs(mp.im(w))
        if im > err_bound:
            raise RuntimeError(
                f"oracle self-check failed at t={t}: |Im| = {float(im):.3e} "
                f"exceeds err_bound = {err_bound:.3e}"
            )
        return ZEvaluation(t=float(t), z=mp.re(w), theta=th, err_bound=err_bound)


def z_oracle_values(ts: np.ndarray, precision_digits: int = 30) -> np.ndarray:
    """Oracle Z over an array, returned as floats (for quadrature below t=10)."""
    return np.array([float(z_oracle(float(t), precision_digits).z) for t in ts])
