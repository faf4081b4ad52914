"""Value-distribution functionals of Z on dyadic windows [T, 2T].

Signed one-sided integrals I+/I-, positivity measures, the alternating
zero-gap identity for the positivity measure, the small-|zeta| level-set
measure, one-sided cubic integrals, and a seeded sampler for the
log|Z| central limit statistic.

Everything here rides on the zero table and the zero-aligned quadrature;
one-sided integrals are exact partial sums of per-gap panel integrals,
so the +/- decompositions reproduce the two-sided integrals to
quadrature accuracy by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .reports import MomentReport
from .special import DEFAULT_CONFIG, EvalConfig, TWO_PI, z_values
from .zeros import ZeroTable, find_zeros
from . import quad as _quad

__all__ = [
    "MomentReport",
    "CltSample",
    "i_plus_minus",
    "j_measures",
    "alternating_gap_identity",
    "small_values_measure",
    "one_sided_cubic",
    "selberg_clt_sample",
]


def _window_table(
    T: float, cfg: EvalConfig, table: ZeroTable | None, lo: float | None = None,
) -> ZeroTable:
    lo = 10.0 if lo is None else lo
    if table is not None and table.lo <= lo and table.hi >= 2 * T:
        return table
    return find_zeros(lo, 2 * T, 1e-9, cfg)


def _signed_gap_integrals(
    kind: str, T: float, tol: float, cfg: EvalConfig, table: ZeroTable, workers: int,
) -> tuple[float, float, float]:
    """(sum over + gaps, sum over - gaps, error estimate) of g(Z) on [T, 2T]."""
    part = _quad.sign_partition(T, 2 * T, cfg, table=table, workers=workers)
    edges = np.concatenate([[T], part.breakpoints, [2 * T]])
    prefix, err, _, _ = _quad.integrate_prefix(
        kind, edges[1:], tol, cfg, table=table, workers=workers, start=T
    )
    pieces = np.diff(np.concatenate([[0.0], prefix]))
    plus = math.fsum(pieces[part.signs > 0])
    minus = math.fsum(pieces[part.signs < 0])
    return plus, minus, err


def i_plus_minus(
    T: float,
    tol: float = 1e-9,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
    workers: int = 1,
) -> tuple[float, float]:
    """I+ and I-: the integral of Z over its positivity/negativity sets."""
    if T < 10:
        raise ValueError("T must be >= 10")
    table = _window_table(T, cfg, table)
    return _signed_gap_integrals("z", T, tol, cfg, table, workers)[:2]


def j_measures(
    T: float,
    tol: float = 1e-9,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
    workers: int = 1,
) -> tuple[float, float]:
    """Lebesgue measures of {Z > 0} and {Z < 0} on (T, 2T]."""
    if T < 10:
        raise ValueError("T must be >= 10")
    table = _window_table(T, cfg, table)
    part = _quad.sign_partition(T, 2 * T, cfg, table=table, workers=workers)
    return part.measures()


def alternating_gap_identity(
    T: float,
    tol: float = 1e-9,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
    workers: int = 1,
) -> MomentReport:
    """Positivity measure versus the alternating zero-gap sum on (T, 2T].

    Z is negative before its first zero, so it is positive exactly on the
    odd-to-even gaps (gamma_{2n-1}, gamma_{2n}) with global 1-based
    indexing anchored at the bottom of the zero table (t = 10; there are
    no zeros below).  The two sides agree up to boundary gaps.
    """
    if T < 10:
        raise ValueError("T must be >= 10")
    table = _window_table(T, cfg, table)
    if table.lo > 10.0:
        raise ValueError("parity needs a table anchored at t = 10")
    measure_plus, _ = j_measures(T, tol, cfg, table, workers)
    g = table.ordinates
    even_idx = np.arange(2, len(g) + 1, 2)  # global indices 2, 4, ...
    sel = even_idx[(g[even_idx - 1] > T) & (g[even_idx - 1] <= 2 * T)]
    predicted = math.fsum(g[sel - 1] - g[sel - 2])
    return MomentReport(
        T=T,
        value=measure_plus,
        predicted=predicted,
        normalization="measure{Z>0 on (T,2T]} vs sum of (gamma_2n - gamma_2n-1)",
    )


def small_values_measure(
    T: float,
    c: float,
    tol: float = 1e-9,
    cfg: EvalConfig = DEFAULT_CONFIG,
    workers: int = 1,
) -> MomentReport:
    """Measure of {t in (10, T] : |Z(t)| <= c}, against the main term T/2.

    Dense sampling at step 0.01/log T with bisection refinement of the
    level-crossing boundaries (same tolerance as zero refinement).
    """
    if T < 100:
        raise ValueError("T must be >= 100")
    if c <= 0:
        raise ValueError("c must be positive")
    lo = 10.0
    step = 0.01 / math.log(T)
    n = int(math.ceil((T - lo) / step))
    grid = np.linspace(lo, T, n + 1)
    inside = np.zeros(len(grid), dtype=bool)
    chunk = 1 << 20
    for i in range(0, len(grid), chunk):
        zs = z_values(grid[i : i + chunk], cfg)
        inside[i : i + chunk] = np.abs(zs) <= c
    flips = np.nonzero(inside[:-1] != inside[1:])[0]
    crossings = _refine_level_crossings(grid, flips, c, tol, cfg)
    edges = np.concatenate([[lo], crossings, [T]])
    # segments between crossings carry a constant indicator, alternating
    # from the state at the left endpoint
    state = bool(inside[0])
    measure = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if state:
            measure += b - a
        state = not state
    return MomentReport(
        T=T,
        value=measure,
        predicted=T / 2.0,
        normalization=f"measure of small values |Z| <= {c:g} on (10, T]",
    )


def _refine_level_crossings(grid, flips, c, tol, cfg) -> np.ndarray:
    if len(flips) == 0:
        return np.zeros(0)
    a = grid[flips].copy()
    b = grid[flips + 1].copy()
    fa = np.abs(z_values(a.copy(), cfg)) - c
    steps = max(1, int(math.ceil(math.log2(float(np.max(b - a)) / max(tol, 1e-13)))))
    for _ in range(steps):
        m = 0.5 * (a + b)
        fm = np.abs(z_values(m, cfg)) - c
        same = np.sign(fm) == np.sign(fa)
        a = np.where(same, m, a)
        fa = np.where(same, fm, fa)
        b = np.where(same, b, m)
    return 0.5 * (a + b)


def one_sided_cubic(
    T: float,
    tol: float = 1e-9,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
    workers: int = 1,
) -> tuple[MomentReport, MomentReport]:
    """int of Z^3 over {Z > 0} and {Z < 0} on [T, 2T].

    Each side is predicted by half of int |Z|^3, computed independently
    by the zero-aligned quadrature.
    """
    if T < 10:
        raise ValueError("T must be >= 10")
    table = _window_table(T, cfg, table)
    plus, minus, _ = _signed_gap_integrals("z3", T, tol, cfg, table, workers)
    abs_cubic = _quad.integrate(
        "abs_z3", T, 2 * T, tol, cfg, table=table, workers=workers
    ).value
    tag = "one-sided cubic vs half of int |Z|^3 on [T, 2T]"
    return (
        MomentReport(T=T, value=plus, predicted=0.5 * abs_cubic, normalization=tag),
        MomentReport(T=T, value=minus, predicted=-0.5 * abs_cubic, normalization=tag),
    )


@dataclass(frozen=True)
class CltSample:
    """Empirical sample of the normalised log|Z| statistic on [T, 2T]."""

    T: float
    seed: int
    samples: np.ndarray
    ks_distance: float

    def histogram(self, bins: int = 50, lo: float = -5.0, hi: float = 5.0):
        return np.histogram(self.samples, bins=bins, range=(lo, hi))


def _std_normal_cdf(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.vectorize(math.erf)(x / math.sqrt(2.0)))


def selberg_clt_sample(
    T: float,
    n_samples: int,
    rng_seed: int,
    cfg: EvalConfig = DEFAULT_CONFIG,
    table: ZeroTable | None = None,
) -> CltSample:
    """X = log|Z(t)| / sqrt((1/2) log log T) at uniform t in [T, 2T].

    Counter-based generator (Philox) keyed by the seed: reproducible
    bit-for-bit under any scheduling.  Draws landing within 1e-6 of a
    zero are redrawn (log|Z| would be -inf there).
    """
    if T < 1e3:
        raise ValueError("T must be >= 1e3")
    if n_samples < 1e3:
        raise ValueError("n_samples must be >= 1e3")
    table = _window_table(T, cfg, table)
    zeros_sorted = table.ordinates
    gen = np.random.Generator(np.random.Philox(key=rng_seed))
    ts = gen.uniform(T, 2 * T, n_samples)
    for _ in range(64):
        pos = np.searchsorted(zeros_sorted, ts)
        left = np.abs(ts - zeros_sorted[np.clip(pos - 1, 0, len(zeros_sorted) - 1)])
        right = np.abs(zeros_sorted[np.clip(pos, 0, len(zeros_sorted) - 1)] - ts)
        bad = np.minimum(left, right) < 1e-6
        if not bad.any():
            break
        ts[bad] = gen.uniform(T, 2 * T, int(bad.sum()))
    scale = math.sqrt(0.5 * math.log(math.log(T)))
    xs = np.log(np.abs(z_values(ts, cfg))) / scale
    s = np.sort(xs)
    cdf = _std_normal_cdf(s)
    i = np.arange(1, len(s) + 1)
    ks = float(np.max(np.maximum(cdf - (i - 1) / len(s), i / len(s) - cdf)))
    return CltSample(T=T, seed=rng_seed, samples=xs, ks_distance=ks)
