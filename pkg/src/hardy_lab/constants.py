"""Euler's constant and the random-matrix moment constants.

The 2m-th moment of |zeta| on the critical line is conjectured to be
(c + o(1)) T (log T)^{m^2} with

    c = a * g / Gamma(1 + m^2),
    a = prod_p (1 - 1/p)^{(m-1)^2} P_m(1/p),
    g = (m^2)! prod_{j=0}^{m-1} j! / (j + m)!,

where P_m(x) = sum_k C(m-1, k)^2 x^k sums the local series
sum_j d_m(p^j)^2 p^{-j} = P_m(1/p) / (1 - 1/p)^{2m-1} in closed form
(d_m(p^j) = C(j+m-1, m-1)).

Indexing note: the constants are stored against the half-moment index m
(moment exponent k = 2m), the normalization that reproduces the two
classically proven cases c = 1 (second moment) and c = 1/(2 pi^2)
(fourth moment).  Emitted tables carry this normalization tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np


@dataclass(frozen=True)
class MomentConstant:
    m: int
    a: float
    g: float
    c: float
    prime_cutoff: int
    tail_bound: float

    normalization: str = "c against T (log T)^{m^2}, moment exponent k = 2m"

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.g > 0 and self.c > 0):
            raise ValueError("moment constants must be positive")


def euler_constant(precision_digits: int = 30) -> mp.mpf:
    """Euler's constant C0 = -Gamma'(1) by harmonic-sum Euler-Maclaurin.

    H_N - log N - 1/(2N) + sum_k B_{2k} / (2k N^{2k}), summed until the
    next term falls below target; independent of mpmath's own constant.
    """
    if precision_digits < 15:
        raise ValueError("precision_digits must be >= 15")
    with mp.workdps(precision_digits + 10):
        N = max(2 * precision_digits, 30)
        target = mp.mpf(10) ** (-(precision_digits + 4))
        harmonic = mp.fsum(mp.mpf(1) / n for n in range(1, N + 1))
        total = harmonic - mp.log(N) - mp.mpf(1) / (2 * N)
        npow = mp.mpf(N) ** 2
        k = 1
        while True:
            term = mp.bernoulli(2 * k) / (2 * k * npow)
            total += term
            if abs(term) < target:
                break
            npow *= N * N
            k += 1
            if k > 4 * precision_digits:
                raise RuntimeError("Euler constant series failed to converge")
        return +total


def local_factor_poly(m: int) -> np.ndarray:
    """P_m(x) = sum_k C(m-1, k)^2 x^k, ascending coefficients."""
    return np.array([math.comb(m - 1, k) ** 2 for k in range(m)], dtype=float)


def local_factor(m: int, x: float) -> float:
    """(1 - x)^{(m-1)^2} P_m(x): the per-prime factor of a at x = 1/p."""
    p = local_factor_poly(m)
    return (1.0 - x) ** ((m - 1) ** 2) * float(np.polyval(p[::-1], x))


def local_factor_series(m: int, x: float, jmax: int = 80) -> float:
    """Truncated (1-x)^{m^2} sum_j d_m(p^j)^2 x^j; oracle for the closed form."""
    s = sum(math.comb(j + m - 1, m - 1) ** 2 * x**j for j in range(jmax + 1))
    return (1.0 - x) ** (m * m) * s


def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def _tail_slope(m: int) -> float:
    """C with |log local_factor(m, x)| <= C x^2 on (0, 1/2]; grid supremum."""
    xs = np.linspace(1e-4, 0.5, 2000)
    vals = np.array([abs(math.log(local_factor(m, float(x)))) / x**2 for x in xs])
    return float(vals.max()) * 1.25


def g_factor(m: int) -> Fraction:
    """(m^2)! prod_{j<m} j!/(j+m)! as an exact rational."""
    g = Fraction(math.factorial(m * m))
    for j in range(m):
        g *= Fraction(math.factorial(j), math.factorial(j + m))
    return g


def ks_constant(m: int, prime_cutoff: int = 1_000_000) -> MomentConstant:
    """Moment constant at half-index m from the Euler product to ``prime_cutoff``."""
    if not 1 <= m <= 4:
        raise ValueError("m must be in [1, 4] (overflow guard)")
    if prime_cutoff < 1_000:
        raise ValueError("prime_cutoff must be >= 1000")
    if m == 1:
        a = 1.0  # every local factor is identically 1
        tail = 0.0
    else:
        primes = _primes_upto(prime_cutoff)
        x = 1.0 / primes
        e2 = (m - 1) ** 2
        poly = local_factor_poly(m)[::-1]
        logs = e2 * np.log1p(-x) + np.log(np.polyval(poly, x))
        a = math.exp(math.fsum(logs))
        # primes beyond the cutoff: sum_{p > P} x^2 < 1/P
        tail = a * (math.exp(_tail_slope(m) / prime_cutoff) - 1.0)
    g = g_factor(m)
    c = a * float(g) / math.factorial(m * m)
    return MomentConstant(
        m=m, a=a, g=float(g), c=c, prime_cutoff=prime_cutoff, tail_bound=tail
    )


def conjectured_moment(m: int, T: float) -> float:
    """Predicted int_0^T |zeta(1/2+it)|^{2m} dt = c T (log T)^{m^2}.

    Only m = 1, 2 are backed by proven asymptotics; higher m is rejected.
    """
    if m not in (1, 2):
        raise ValueError("conjectured_moment is checkable only for m in {1, 2}")
    if T <= 1:
        raise ValueError("T must exceed 1")
    c = ks_constant(m).c
    return c * T * math.log(T) ** (m * m)
