"""Zero-aware adaptive quadrature for integrals of g(Z(t)).

Panels are aligned to the zeros of Z, so integrands with an absolute
value (|Z|, |Z|^3, |Z|^k) stay smooth inside every panel; long zero gaps
are further split to keep the panel width below the local oscillation
scale 2pi/log(b/2pi).  Fixed-order Gauss-Legendre 16 is used per panel
and adaptivity is purely by bisection, with the embedded estimate
|whole - two halves| driving acceptance against a per-width share of the
global budget tol * (b - a).

Below t = 10 the integrand routes to the 30-digit oracle; that segment
is a fixed constant per integrand kind and is cached process-wide.

Panel results are reduced with math.fsum after sorting by panel origin,
which makes the reported value independent of evaluation order and hence
of the worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .special import DEFAULT_CONFIG, EvalConfig, TWO_PI, z_oracle_values, z_values
from .zeros import ZeroTable, find_zeros

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

_FAST_FLOOR = 10.0
_ORACLE_DIGITS = 30

INTEGRAND_KINDS = ("z", "abs_z", "z2", "z3", "abs_z3", "z4", "abs_pow")


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_est: float
    panels: int
    evals: int
    error_is_lower_bound: bool = False

    def __post_init__(self) -> None:
        if self.abs_error_est < 0 or self.panels < 1 or self.evals < self.panels:
            raise ValueError("inconsistent quadrature result")


@dataclass(frozen=True)
class SignPartition:
    """Maximal sign-constant subintervals of Z on [a, b]."""

    interval: tuple[float, float]
    breakpoints: np.ndarray
    signs: np.ndarray
    suspect: tuple[tuple[float, float], ...] = field(default=())

    def measures(self) -> tuple[float, float]:
        """(measure of + intervals, measure of - intervals)."""
        a, b = self.interval
        edges = np.concatenate([[a], self.breakpoints, [b]])
        widths = np.diff(edges)
        plus = float(widths[self.signs > 0].sum())
        minus = float(widths[self.signs < 0].sum())
        return plus, minus


def integrand(kind: str, power: float | None = None):
    """Vectorised g applied to Z values."""
    if kind == "z":
        return lambda z: z
    if kind == "abs_z":
        return np.abs
    if kind == "z2":
        return lambda z: z * z
    if kind == "z3":
        return lambda z: z * z * z
    if kind == "z4":
        return lambda z: (z * z) ** 2
    if kind == "abs_z3":
        return lambda z: np.abs(z) ** 3
    if kind == "abs_pow":
        if power is None:
            raise ValueError("abs_pow requires a power")
        return lambda z: np.abs(z) ** power
    raise ValueError(f"unknown integrand kind {kind!r}")


def _split_segments(edges: np.ndarray, wmax: float) -> tuple[np.ndarray, np.ndarray]:
    x0s, x1s = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0:
            continue
        pieces = max(1, int(math.ceil((b - a) / wmax)))
        cuts = np.linspace(a, b, pieces + 1)
        x0s.append(cuts[:-1])
        x1s.append(cuts[1:])
    if not x0s:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(x0s), np.concatenate(x1s)


def _adaptive_panels(
    x0: np.ndarray,
    x1: np.ndarray,
    g,
    evaluate,
    tol_per_unit: float,
    max_waves: int = 24,
):
    """Bisection-adaptive GL16 over the given panels.

    A panel is accepted when its embedded estimate |whole - halves| meets
    its width-proportional share of the budget, or when splitting has
    stopped shrinking the estimate at anywhere near the GL16 rate: past
    that point the estimate is measuring the Z-evaluation noise floor,
    which no amount of splitting can reduce.  Noise-floor acceptances
    keep their honest (larger) estimate in the error sum.

    Returns (list of (x0, x1, value, err), eval count).  ``evaluate`` maps
    an array of abscissas to Z values.
    """
    accepted: list[tuple[float, float, float, float]] = []
    evals = 0
    prev_err = np.full(len(x0), np.inf)
    for _ in range(max_waves):
        if len(x0) == 0:
            break
        h = x1 - x0
        mid = 0.5 * (x0 + x1)
        # whole panel, left half, right half: 16 nodes each
        nodes = np.concatenate(
            [
                (x0[:, None] + 0.5 * h[:, None] * (_GL_NODES + 1.0)),
                (x0[:, None] + 0.25 * h[:, None] * (_GL_NODES + 1.0)),
                (mid[:, None] + 0.25 * h[:, None] * (_GL_NODES + 1.0)),
            ],
            axis=1,
        )
        vals = g(evaluate(np.ascontiguousarray(nodes.ravel()))).reshape(nodes.shape)
        evals += nodes.size
        vw = 0.5 * h * (vals[:, :16] @ _GL_WEIGHTS)
        vl = 0.25 * h * (vals[:, 16:32] @ _GL_WEIGHTS)
        vr = 0.25 * h * (vals[:, 32:] @ _GL_WEIGHTS)
        vh = vl + vr
        err = np.abs(vw - vh)
        ok = (err <= tol_per_unit * h) | (err > 0.25 * prev_err)
        for i in np.nonzero(ok)[0]:
            accepted.append((float(x0[i]), float(x1[i]), float(vh[i]), float(err[i])))
        bad = ~ok
        half_err = 0.5 * err[bad]
        x0 = np.concatenate([x0[bad], mid[bad]])
        x1 = np.concatenate([mid[bad], x1[bad]])
        prev_err = np.concatenate([half_err, half_err])
    if len(x0):
        # depth exhausted: accept the whole-panel value with a width share
        h = x1 - x0
        nodes = x0[:, None] + 0.5 * h[:, None] * (_GL_NODES + 1.0)
        vals = g(evaluate(np.ascontiguousarray(nodes.ravel()))).reshape(nodes.shape)
        evals += nodes.size
        vw = 0.5 * h * (vals @ _GL_WEIGHTS)
        for i in range(len(x0)):
            accepted.append(
                (float(x0[i]), float(x1[i]), float(vw[i]), float(tol_per_unit * h[i]))
            )
    return accepted, evals


_low_segment_cache: dict[tuple, tuple[float, float, int]] = {}


def _low_segment(kind: str, power: float | None, a: float, b: float, tol: float):
    """Oracle-backed integral over [a, b] below the fast floor; cached."""
    key = (kind, power, round(a, 12), round(b, 12), tol)
    hit = _low_segment_cache.get(key)
    if hit is not None:
        return hit
    g = integrand(kind, power)
    x0, x1 = _split_segments(np.array([a, b]), 1.0)
    panels, evals = _adaptive_panels(
        x0, x1, g, lambda xs: z_oracle_values(xs, _ORACLE_DIGITS), tol, max_waves=12
    )
    value = math.fsum(p[2] for p in panels)
    err = math.fsum(p[3] for p in panels)
    _low_segment_cache[key] = (value, err, evals)
    return value, err, evals


def _zero_edges(
    a: float, b: float, table: ZeroTable | None, cfg: EvalConfig, workers: int,
) -> tuple[np.ndarray, tuple[tuple[float, float], ...]]:
    if table is None:
        table = find_zeros(a, b, 1e-9, cfg, workers=workers)
    else:
        table = table.restricted(a, b)
    inner = table.ordinates[(table.ordinates > a) & (table.ordinates < b)]
    return np.concatenate([[a], inner, [b]]), table.suspect


def integrate(
    kind: str,
    a: float,
    b: float,
    tol: float = 1e-9,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
    workers: int = 1,
    power: float | None = None,
) -> QuadResult:
    """Integral of g(Z(t)) over [a, b] with error target tol * (b - a)."""
    if not (0 <= a < b):
        raise ValueError("need 0 <= a < b")
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = integrand(kind, power)
    pieces: list[tuple[float, float, float]] = []  # (x0, value, err)
    evals = 0
    panels = 0
    flagged = False
    if a < _FAST_FLOOR:
        lo_hi = min(b, _FAST_FLOOR)
        v, e, n = _low_segment(kind, power, a, lo_hi, tol)
        pieces.append((a, v, e))
        evals += n
        panels += 1
    fa = max(a, _FAST_FLOOR)
    if fa < b:
        edges, suspect = _zero_edges(fa, b, table, cfg, workers)
        flagged = bool(suspect)
        wmax = TWO_PI / math.log(b / TWO_PI)
        x0, x1 = _split_segments(edges, wmax)
        acc, n = _adaptive_panels(
            x0, x1, g, lambda xs: z_values(xs, cfg), tol
        )
        evals += n
        panels += len(acc)
        acc.sort(key=lambda p: p[0])
        pieces.extend((p[0], p[2], p[3]) for p in acc)
    value = math.fsum(p[1] for p in pieces)
    err = math.fsum(p[2] for p in pieces)
    return QuadResult(
        value=value,
        abs_error_est=err,
        panels=max(panels, 1),
        evals=max(evals, panels, 1),
        error_is_lower_bound=flagged,
    )


def integrate_prefix(
    kind: str,
    checkpoints: np.ndarray,
    tol: float = 1e-9,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
    workers: int = 1,
    power: float | None = None,
    start: float = 0.0,
) -> tuple[np.ndarray, float, int, int]:
    """Cumulative integral from ``start`` to each checkpoint, one pass.

    Checkpoints must be increasing.  Panels never straddle a checkpoint,
    so every prefix is an exact partial sum of panel results.
    Returns (values, total_error_est, panels, evals).
    """
    cks = np.asarray(checkpoints, dtype=float)
    if len(cks) == 0:
        return np.zeros(0), 0.0, 0, 0
    if np.any(np.diff(cks) <= 0) or cks[0] <= start:
        raise ValueError("checkpoints must be increasing and above start")
    b = float(cks[-1])
    g = integrand(kind, power)
    pieces: list[tuple[float, float, float]] = []
    evals = 0
    if start < _FAST_FLOOR:
        for lo, hi in zip(
            np.concatenate([[start], cks[cks < _FAST_FLOOR]]),
            np.concatenate([cks[cks < _FAST_FLOOR], [min(b, _FAST_FLOOR)]]),
        ):
            if hi > lo:
                v, e, n = _low_segment(kind, power, float(lo), float(hi), tol)
                pieces.append((float(lo), v, e))
                evals += n
    fa = max(start, _FAST_FLOOR)
    flagged = False
    if fa < b:
        edges, suspect = _zero_edges(fa, b, table, cfg, workers)
        flagged = bool(suspect)
        edges = np.unique(np.concatenate([edges, cks[cks > fa]]))
        wmax = TWO_PI / math.log(b / TWO_PI)
        x0, x1 = _split_segments(edges, wmax)
        acc, n = _adaptive_panels(x0, x1, g, lambda xs: z_values(xs, cfg), tol)
        evals += n
        acc.sort(key=lambda p: p[0])
        pieces.extend((p[0], p[2], p[3]) for p in acc)
    pieces.sort(key=lambda p: p[0])
    starts = np.array([p[0] for p in pieces])
    vals = np.array([p[1] for p in pieces], dtype=np.longdouble)
    cum = np.cumsum(vals)
    idx = np.searchsorted(starts, cks, side="left") - 1
    prefix = np.where(idx >= 0, cum[np.maximum(idx, 0)], 0.0).astype(float)
    err = math.fsum(p[2] for p in pieces)
    if flagged:
        err = max(err, np.finfo(float).tiny)
    return prefix, err, len(pieces), evals


def sign_partition(
    a: float,
    b: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
    workers: int = 1,
) -> SignPartition:
    """Decompose [a, b] into maximal sign-constant subintervals of Z."""
    if not (_FAST_FLOOR <= a < b):
        raise ValueError("need 10 <= a < b")
    edges, suspect = _zero_edges(a, b, table, cfg, workers)
    mids = 0.5 * (edges[:-1] + edges[1:])
    signs = np.sign(z_values(mids, cfg)).astype(np.int64)
    return SignPartition(
        interval=(a, b),
        breakpoints=edges[1:-1],
        signs=signs,
        suspect=suspect,
    )
