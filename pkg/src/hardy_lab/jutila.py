"""Leading-term decomposition of the primitive F(T) of Hardy's function.

Writing sqrt(T/2pi) = L + frac with integer L and frac in [0,1), the
primitive F(T) = int_0^T Z dt is, up to O(T^{1/6} log T) and a
near-edge term, the step-modulated quarter-power

    F1(T) = (T/2pi)^{1/4} (-1)^L K(frac),

where K is 0 on [0,1/4) and (3/4,1], 2pi on (1/4,3/4), with boundary
values 4pi/3 and 2pi/3 at exactly 1/4 and 3/4.  The fractional part is
called ``frac`` throughout (the classical letter for it collides with the
Riemann-Siegel phase).

The periodic extension u(x) = (-1)^[x] K({x}) is odd with period 2; its
Fourier sine series has coefficients a(n)/n supported on odd n with
a(n) = +-sqrt(2) by residue of n mod 8, which yields a closed-form series
for int_0^T F1 with quadratically decaying terms.  The piecewise-exact
antiderivative of F1 (plain quarter-power segments) serves as the
independent oracle for that series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class JutilaDecomposition:
    """F(T)'s predicted main term and the two error scales at T."""

    T: float
    L: int
    frac: float
    theta0: float
    main: float
    error_scale: float
    near_edge_scale: float


def k_step(x: float) -> float:
    """The 0 / 2pi step on [0,1], with the exact boundary constants."""
    if not 0 <= x <= 1:
        raise ValueError("k_step requires x in [0, 1]")
    if x == 0.25:
        return 4.0 * math.pi / 3.0
    if x == 0.75:
        return 2.0 * math.pi / 3.0
    if 0.25 < x < 0.75:
        return TWO_PI
    return 0.0


def _split(T: float) -> tuple[int, float]:
    a = math.sqrt(T / TWO_PI)
    L = int(math.floor(a))
    return L, a - L


def f1(T: float) -> float:
    """F1(T) = (T/2pi)^{1/4} (-1)^L K(frac)."""
    if T <= 0:
        raise ValueError("f1 requires T > 0")
    L, frac = _split(T)
    return (T / TWO_PI) ** 0.25 * (-1) ** L * k_step(frac)


def predict_F(T: float) -> JutilaDecomposition:
    """Full decomposition at T; rejects the degenerate edge frac in {1/4, 3/4}."""
    if T < 10:
        raise ValueError("predict_F requires T >= 10")
    L, frac = _split(T)
    theta0 = min(abs(frac - 0.25), abs(frac - 0.75))
    if theta0 == 0.0:
        raise ValueError("theta0 = 0: error scales undefined exactly on the edge")
    return JutilaDecomposition(
        T=T,
        L=L,
        frac=frac,
        theta0=theta0,
        main=f1(T),
        error_scale=T ** (1.0 / 6.0) * math.log(T),
        near_edge_scale=min(T**0.25, T**0.125 * theta0**-0.75),
    )


def fourier_a(n: int | np.ndarray) -> np.ndarray:
    """a(n): sqrt2 for n = 1,7 (mod 8), -sqrt2 for 3,5 (mod 8), 0 for even n."""
    n = np.asarray(n)
    r = n % 8
    out = np.where((r == 1) | (r == 7), math.sqrt(2.0), 0.0)
    out = np.where((r == 3) | (r == 5), -math.sqrt(2.0), out)
    return np.where(n % 2 == 0, 0.0, out)


def u_fourier(x: float, terms: int = 10_000) -> float:
    """Partial Fourier sum of u(x); converges to (-1)^[x] K({x}) off the edges."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    n = 2 * np.arange(1, terms + 1) - 1
    return float(np.sum(4.0 * fourier_a(n) / n * np.sin(math.pi * n * x)))


def u_direct(x: float) -> float:
    """(-1)^[x] K({x}), the pointwise limit of the Fourier series."""
    fl = math.floor(x)
    return (-1) ** int(fl) * k_step(x - fl)


def int_f1_closed_form(T: float, terms: int = 1000) -> float:
    """Closed-form series for int_0^T F1(t) dt.

    -16 (T/2pi)^{3/4} sum_k a(2k-1)/(2k-1)^2 cos(pi (2k-1) sqrt(T/2pi)),
    absolutely convergent; the truncation tail is reported separately by
    :func:`int_f1_tail_bound`.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    n = 2 * np.arange(1, terms + 1) - 1
    root = math.sqrt(T / TWO_PI)
    series = np.sum(fourier_a(n) / n**2 * np.cos(math.pi * n * root))
    return float(-16.0 * (T / TWO_PI) ** 0.75 * series)


def int_f1_tail_bound(T: float, terms: int = 1000) -> float:
    """Bound on the dropped tail: 16 (T/2pi)^{3/4} sqrt2 sum_{k>terms} (2k-1)^{-2}."""
    tail = 0.5 / terms  # sum_{k > terms} (2k-1)^{-2} < 1/(2 terms)
    return 16.0 * (T / TWO_PI) ** 0.75 * math.sqrt(2.0) * tail


def int_f1_piecewise(T: float) -> float:
    """Piecewise-exact int_0^T F1(t) dt; the oracle for the closed form.

    F1 is (-1)^j 2pi (t/2pi)^{1/4} on the band sqrt(t/2pi) in (j+1/4, j+3/4)
    and zero elsewhere, so each band contributes an exact difference of
    (16 pi^2/5) (j + u)^{5/2} endpoints.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    root = math.sqrt(T / TWO_PI)
    coef = 16.0 * math.pi**2 / 5.0
    total = 0.0
    j = 0
    parts = []
    while j + 0.25 < root:
        u_hi = min(j + 0.75, root)
        lo = (j + 0.25) ** 2.5
        hi = u_hi**2.5
        parts.append((-1) ** j * coef * (hi - lo))
        j += 1
    total = math.fsum(parts)
    return total
