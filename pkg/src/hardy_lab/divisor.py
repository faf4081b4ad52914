"""Divisor functions d_k(n) and the pure exponential sums built on them.

d_k(n) counts ordered factorisations of n into k factors (the Dirichlet
coefficients of zeta^k).  Two sieve routes are kept:

* ``convolution``   - k-1 iterated Dirichlet convolutions with 1, a tight
                      O(N log N) accumulation in the compiled backend;
                      the default.
* ``factorization`` - multiplicativity per prime power,
                      d_k(p^e) = C(e+k-1, k-1), over a segmented numpy
                      sweep; retained as the test oracle.

The exponential sums sum d_k(n) n^{-1/6} cos(3 pi n^{2/3} + pi/8) lose
the phase to double rounding long before the sieve capacity is reached,
so n^{2/3} and the reduction mod 2 pi are carried in double-double
arithmetic inside the backend (about 31 significant digits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from ._backend import dirichlet_step, expsum_cos

#: Hard sieve capacity; above this the arrays would not fit sane memory.
SIEVE_CAPACITY = 100_000_000

_CHUNK = 1 << 20


class CapacityError(ValueError):
    """Requested range exceeds the sieve capacity."""


@dataclass(frozen=True)
class DivisorTable:
    k: int
    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if len(self.values) != self.hi - self.lo + 1:
            raise ValueError("values length must match [lo, hi]")

    def dk(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise KeyError(n)
        return int(self.values[n - self.lo])


def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def _sieve_convolution(k: int, hi: int) -> np.ndarray:
    values = np.ones(hi, dtype=np.int64)
    out = np.empty(hi, dtype=np.int64)
    for _ in range(k - 1):
        dirichlet_step(values, out)
        values, out = out, values
    return values


def _sieve_factorization(k: int, lo: int, hi: int) -> np.ndarray:
    primes = _primes_upto(int(math.isqrt(hi)))
    result = np.empty(hi - lo + 1, dtype=np.int64)
    for c0 in range(lo, hi + 1, _CHUNK):
        c1 = min(c0 + _CHUNK - 1, hi)
        n = np.arange(c0, c1 + 1, dtype=np.int64)
        rem = n.copy()
        val = np.ones(len(n), dtype=np.int64)
        for p in primes:
            if p * p > c1:
                break
            first = ((c0 + p - 1) // p) * p
            idx = np.arange(first - c0, c1 - c0 + 1, p)
            if len(idx) == 0:
                continue
            e = np.zeros(len(idx), dtype=np.int64)
            sub = rem[idx]
            div = sub % p == 0
            while div.any():
                sub[div] //= p
                e[div] += 1
                div = sub % p == 0
            rem[idx] = sub
            # d_k(p^e) = C(e + k - 1, k - 1)
            mult = np.ones(len(idx), dtype=np.int64)
            for j in range(1, k):
                mult = mult * (e + j) // j
            val[idx] *= mult
        val[rem > 1] *= k
        result[c0 - lo : c1 - lo + 1] = val
    return result


def sieve_dk(k: int, lo: int, hi: int, method: str = "convolution") -> DivisorTable:
    """d_k(n) for n in [lo, hi]."""
    if not 1 <= k <= 8:
        raise ValueError("k must be in [1, 8]")
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi")
    if hi > SIEVE_CAPACITY:
        raise CapacityError(f"hi = {hi} exceeds sieve capacity {SIEVE_CAPACITY}")
    if k == 1:
        values = np.ones(hi - lo + 1, dtype=np.int64)
    elif method == "convolution":
        values = _sieve_convolution(k, hi)[lo - 1 :]
    elif method == "factorization":
        values = _sieve_factorization(k, lo, hi)
    else:
        raise ValueError(f"unknown sieve method {method!r}")
    return DivisorTable(k=k, lo=lo, hi=hi, values=np.ascontiguousarray(values))


def dk_bruteforce(k: int, n: int) -> int:
    """Ordered k-factorisations of n by direct recursion; tiny-n oracle."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k == 1:
        return 1
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += dk_bruteforce(k - 1, n // d)
    return total


def pure_exponential_sum(k: int, N: int, table: DivisorTable | None = None) -> float:
    """sum_{N <= n <= 2N} d_k(n) n^{-1/6} cos(3 pi n^{2/3} + pi/8).

    Both endpoints are included.  Phase in double-double, accumulation
    compensated and sequential: block splits reassociate to the same
    value to ~1e-9.
    """
    if not 1 <= k <= 8:
        raise ValueError("k must be in [1, 8]")
    if N < 1:
        raise ValueError("N must be >= 1")
    lo, hi = N, 2 * N
    if table is None:
        table = sieve_dk(k, lo, hi)
    elif table.k != k or table.lo > lo or table.hi < hi:
        raise ValueError("supplied table does not cover [N, 2N]")
    return phase_weighted_sum(lo, hi, table)


def phase_weighted_sum(lo: int, hi: int, table: DivisorTable) -> float:
    """sum over [lo, hi] of d_k(n) n^{-1/6} cos(3 pi n^{2/3} + pi/8)."""
    if hi < lo:
        return 0.0
    n = np.arange(lo, hi + 1, dtype=np.float64)
    w = table.values[lo - table.lo : hi - table.lo + 1] * n ** (-1.0 / 6.0)
    return float(expsum_cos(lo, np.ascontiguousarray(w)))


def cubic_moment_range(T: float) -> tuple[int, int]:
    """Integer summation range [ceil((T/2pi)^{3/2}), floor((T/pi)^{3/2})].

    Endpoints are resolved at 30 digits so a value landing within float
    rounding of an integer is classified correctly (endpoints included
    when integral).
    """
    with mp.workdps(30):
        lo = mp.ceil((mp.mpf(T) / (2 * mp.pi)) ** mp.mpf(1.5))
        hi = mp.floor((mp.mpf(T) / mp.pi) ** mp.mpf(1.5))
    return int(lo), int(hi)


def cubic_moment_rhs(T: float, table: DivisorTable | None = None) -> float:
    """Divisor-sum side of the cubic-moment identity over [T, 2T].

    2 pi sqrt(2/3) sum_{(T/2pi)^{3/2} <= n <= (T/pi)^{3/2}}
        d_3(n) n^{-1/6} cos(3 pi n^{2/3} + pi/8).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    lo, hi = cubic_moment_range(T)
    if hi < lo:
        return 0.0
    if hi > SIEVE_CAPACITY:
        raise CapacityError(f"cubic range reaches {hi} > {SIEVE_CAPACITY}")
    if table is None:
        table = sieve_dk(3, lo, hi)
    return TWO_PI_SQRT23 * phase_weighted_sum(lo, hi, table)


TWO_PI_SQRT23 = 2.0 * math.pi * math.sqrt(2.0 / 3.0)


def expsum_reference(k: int, N: int, dps: int = 50) -> float:
    """Naive mpmath summation at ``dps`` digits; the slow phase oracle."""
    table = sieve_dk(k, N, 2 * N)
    with mp.workdps(dps):
        total = mp.mpf(0)
        for n in range(N, 2 * N + 1):
            nn = mp.mpf(n)
            total += (
                int(table.dk(n))
                * nn ** (-mp.mpf(1) / 6)
                * mp.cos(3 * mp.pi * nn ** (mp.mpf(2) / 3) + mp.pi / 8)
            )
        return float(total)
