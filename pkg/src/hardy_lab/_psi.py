"""Coefficient tables for the Riemann-Siegel expansion.

Two families of constants are built here, once, at import time:

* the asymptotic series for the phase function theta(t),
      theta(t) = (t/2) log(t/2pi) - t/2 - pi/8 + sum_n  c_n t^{1-2n},
  whose coefficients c_n = (1 - 2^{1-2n}) |B_{2n}| / (4n(2n-1)) come from
  the Stirling series for log Gamma(1/4 + it/2);

* the correction-term polynomials C_0..C_4 of the Riemann-Siegel formula.
  Each C_j is a fixed combination of derivatives of
      Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p),
  which is entire (the poles of the denominator are removable).  Writing
  q = p - 1/2 gives
      Psi(1/2 + q) = -(cos(2 pi q^2) cos(5 pi/8)
                       + sin(2 pi q^2) sin(5 pi/8)) / cos(2 pi q),
  an even power series in q whose coefficients we obtain by exact series
  division at 60 digits.  Truncation at degree 56 leaves the series below
  1e-29 on the whole strip |q| <= 1/2, far under double rounding.

The combinations of Psi derivatives entering C_1..C_4 are the classical
ones (Haselgrove's tables); they are validated against an independent
high-precision oracle in the test suite.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

_PSI_DEGREE = 56
_THETA_MAX_TERMS = 8


def _theta_series_coefficients() -> np.ndarray:
    coefs = []
    with mp.workdps(40):
        for n in range(1, _THETA_MAX_TERMS + 1):
            c = (1 - mp.mpf(2) ** (1 - 2 * n)) * abs(mp.bernoulli(2 * n))
            c /= 4 * n * (2 * n - 1)
            coefs.append(float(c))
    return np.asarray(coefs)


def _psi_taylor_coefficients(degree: int = _PSI_DEGREE) -> np.ndarray:
    """Taylor coefficients of Psi(1/2 + q) about q = 0, exact series algebra."""
    with mp.workdps(60):
        cos_q2 = [mp.mpf(0)] * (degree + 1)
        sin_q2 = [mp.mpf(0)] * (degree + 1)
        k = 0
        while 4 * k <= degree:
            cos_q2[4 * k] = (-1) ** k * (2 * mp.pi) ** (2 * k) / mp.factorial(2 * k)
            k += 1
        k = 0
        while 4 * k + 2 <= degree:
            sin_q2[4 * k + 2] = (
                (-1) ** k * (2 * mp.pi) ** (2 * k + 1) / mp.factorial(2 * k + 1)
            )
            k += 1
        cos_q = [mp.mpf(0)] * (degree + 1)
        k = 0
        while 2 * k <= degree:
            cos_q[2 * k] = (-1) ** k * (2 * mp.pi) ** (2 * k) / mp.factorial(2 * k)
            k += 1
        # sec(2 pi q) by series inversion
        sec = [mp.mpf(0)] * (degree + 1)
        sec[0] = 1 / cos_q[0]
        for n in range(1, degree + 1):
            acc = mp.mpf(0)
            for i in range(1, n + 1):
                acc += cos_q[i] * sec[n - i]
            sec[n] = -acc / cos_q[0]
        c58 = mp.cos(5 * mp.pi / 8)
        s58 = mp.sin(5 * mp.pi / 8)
        num = [-(c58 * c + s58 * s) for c, s in zip(cos_q2, sin_q2)]
        psi = [mp.mpf(0)] * (degree + 1)
        for i, a in enumerate(num):
            if a == 0:
                continue
            for j, b in enumerate(sec):
                if i + j > degree:
                    break
                psi[i + j] += a * b
        return np.asarray([float(c) for c in psi])


def _poly_derivative(coefs: np.ndarray, order: int) -> np.ndarray:
    c = np.asarray(coefs, dtype=float)
    for _ in range(order):
        c = c[1:] * np.arange(1, len(c))
    return c


def _correction_polynomials(psi: np.ndarray) -> list[np.ndarray]:
    """C_0..C_4 as polynomials in q = p - 1/2 (Haselgrove combinations)."""
    pi = math.pi

    def d(order: int) -> np.ndarray:
        return _poly_derivative(psi, order)

    def combine(*terms: tuple[float, np.ndarray]) -> np.ndarray:
        out = np.zeros(max(len(c) for _, c in terms))
        for w, c in terms:
            out[: len(c)] += w * c
        return out

    c0 = combine((1.0, d(0)))
    c1 = combine((-1.0 / (96 * pi**2), d(3)))
    c2 = combine((1.0 / (64 * pi**2), d(2)), (1.0 / (18432 * pi**4), d(6)))
    c3 = combine(
        (-1.0 / (64 * pi**2), d(1)),
        (-1.0 / (3840 * pi**4), d(5)),
        (-1.0 / (5308416 * pi**6), d(9)),
    )
    c4 = combine(
        (1.0 / (128 * pi**2), d(0)),
        (19.0 / (24576 * pi**4), d(4)),
        (11.0 / (5898240 * pi**6), d(8)),
        (1.0 / (2038431744 * pi**8), d(12)),
    )
    return [c0, c1, c2, c3, c4]


THETA_COEFS: np.ndarray = _theta_series_coefficients()

PSI_TAYLOR: np.ndarray = _psi_taylor_coefficients()

CORRECTION_POLYS: list[np.ndarray] = _correction_polynomials(PSI_TAYLOR)

# Flattened layout consumed by the evaluation backends.
CORRECTION_FLAT: np.ndarray = np.ascontiguousarray(
    np.concatenate(CORRECTION_POLYS)
)
CORRECTION_OFFSETS: np.ndarray = np.asarray(
    np.cumsum([0] + [len(c) for c in CORRECTION_POLYS[:-1]]), dtype=np.int64
)
CORRECTION_LENGTHS: np.ndarray = np.asarray(
    [len(c) for c in CORRECTION_POLYS], dtype=np.int64
)


def psi_value(p: float) -> float:
    """Psi(p) for p in [0, 1], via the Taylor table."""
    q = p - 0.5
    acc = 0.0
    for c in PSI_TAYLOR[::-1]:
        acc = acc * q + c
    return acc
