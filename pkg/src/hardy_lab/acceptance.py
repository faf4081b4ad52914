"""The acceptance suite: one callable per criterion, shared heavy artifacts.

Every criterion returns a :class:`CriterionResult`; the runner prints one
pass/fail line each.  Criteria 1-9 are hard gates.  The distribution
probes of criterion 10 concern open problems with very slow convergence:
a miss by under 2x downgrades to a warning, a miss by 2x or more fails.

``quick`` mode runs exactly the desk scales the criteria state; ``full``
extends the heaviest grids one decade (hours, documented in the README).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import distribution as dist
from . import divisor as dv
from . import jutila as jt
from . import meansq as ms
from . import quad as qd
from . import zeros as zr
from .constants import euler_constant, ks_constant
from .special import DEFAULT_CONFIG, EvalConfig, z_oracle, z_values
from .zeros import ZeroTable, find_zeros


@dataclass
class CriterionResult:
    cid: int
    name: str
    status: str  # "pass" | "fail" | "warn"
    elapsed_s: float
    budget_s: float
    details: dict = field(default_factory=dict)

    @property
    def line(self) -> str:
        mark = {"pass": "PASS", "fail": "FAIL", "warn": "WARN"}[self.status]
        info = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"[{mark}] criterion {self.cid}: {self.name} ({self.elapsed_s:.1f}s) {info}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


@dataclass
class AcceptanceContext:
    """Shared artifacts, built lazily and reused across criteria."""

    cfg: EvalConfig = DEFAULT_CONFIG
    workers: int = 1
    quick: bool = True
    _table: ZeroTable | None = None
    _trace: ms.ETrace | None = None

    @property
    def top(self) -> float:
        return 1e5 if self.quick else 1e6

    def table(self, hi: float) -> ZeroTable:
        if self._table is None or self._table.hi < hi:
            self._table = find_zeros(10.0, hi, 1e-9, self.cfg, workers=self.workers)
        return self._table

    def trace(self, T: float) -> ms.ETrace:
        if self._trace is None or self._trace.T < T:
            self._trace = ms.get_etrace(T, cfg=self.cfg)
        return self._trace


def _result(cid, name, budget, t0, passed, details, warn=False) -> CriterionResult:
    status = "pass" if passed else ("warn" if warn else "fail")
    return CriterionResult(
        cid=cid,
        name=name,
        status=status,
        elapsed_s=time.time() - t0,
        budget_s=budget,
        details=details,
    )


def criterion_1_oracle_agreement(ctx: AcceptanceContext) -> CriterionResult:
    """Fast path vs 30-digit oracle on 1e3 random t in [100, 1e5]."""
    t0 = time.time()
    rng = np.random.Generator(np.random.Philox(key=20260101))
    ts = np.sort(rng.uniform(100.0, 1e5, 1000))
    fast = z_values(ts, EvalConfig(rs_correction_terms=1))
    worst = 0.0
    worst_t = 0.0
    for t, zf in zip(ts, fast):
        zo = float(z_oracle(float(t), 30).z)
        d = abs(zf - zo)
        if d > worst:
            worst, worst_t = d, float(t)
    passed = worst < 1e-6
    return _result(
        1, "fast-vs-oracle agreement", 120, t0, passed,
        {"max_abs_diff": worst, "at_t": worst_t, "tolerance": 1e-6},
    )


def criterion_2_zero_table(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    tab = find_zeros(10.0, 100.0, 1e-9, ctx.cfg)
    n_low = len(tab)
    first_oracle = zr._bisect_oracle(14.0, 14.3, 1e-9, 20)
    big = ctx.table(1e4).restricted(10.0, 1e4)
    expected = (zr.theta(1e4) - zr.theta(10.0)) / math.pi
    count_dev = abs(len(big) - expected)
    passed = (
        n_low == 29
        and first_oracle is not None
        and abs(first_oracle - 14.134725) <= 1e-6
        and count_dev <= 3
    )
    return _result(
        2, "zero tables", 300, t0, passed,
        {
            "zeros_10_100": n_low,
            "first_zero": first_oracle,
            "count_dev_1e4": count_dev,
        },
    )


def _windows(n: int = 20, lo: float = 100.0, hi: float = 1e4) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def criterion_3_decompositions(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    table = ctx.table(2e4 if ctx.quick else 2e5)
    trace = ctx.trace(ctx.top)
    worst = {}
    violations = 0
    for T in _windows():
        tw = table
        ip, im = dist.i_plus_minus(T, 1e-9, ctx.cfg, tw, ctx.workers)
        int_z = qd.integrate("z", T, 2 * T, 1e-9, ctx.cfg, tw, ctx.workers)
        int_abs = qd.integrate("abs_z", T, 2 * T, 1e-9, ctx.cfg, tw, ctx.workers)
        qtol = 10 * (int_z.abs_error_est + int_abs.abs_error_est) + 1e-7 * T
        d22 = abs(ip + im - int_z.value)
        d23 = abs(ip - im - int_abs.value)
        jp, jm = dist.j_measures(T, 1e-9, ctx.cfg, tw, ctx.workers)
        dmu = abs(jp + jm - T)
        rp, rm = dist.one_sided_cubic(T, 1e-9, ctx.cfg, tw, ctx.workers)
        int_z3 = qd.integrate("z3", T, 2 * T, 1e-9, ctx.cfg, tw, ctx.workers)
        int_az3 = qd.integrate("abs_z3", T, 2 * T, 1e-9, ctx.cfg, tw, ctx.workers)
        c_tol = 10 * (int_z3.abs_error_est + int_az3.abs_error_est) + 1e-6 * T
        d51a = abs(rp.value - rm.value - int_az3.value)
        d51b = abs(rp.value + rm.value - int_z3.value)
        jpe, jme = ms.j_pm_e(T, 1e-6, ctx.cfg, trace)
        g_diff = ms.g_of(2 * T, 1e-6, ctx.cfg, trace) - ms.g_of(T, 1e-6, ctx.cfg, trace)
        abs_e = ms.abs_e_minus_pi_integral(T, 1e-6, ctx.cfg, trace)
        e_tol = 2e-3 * max(abs_e, 1.0)
        d61a = abs(jpe + jme - g_diff)
        d61b = abs(jpe - jme - abs_e)
        int_z2 = qd.integrate("z2", T, 2 * T, 1e-9, ctx.cfg, tw, ctx.workers)
        int_z4 = qd.integrate("z4", T, 2 * T, 1e-9, ctx.cfg, tw, ctx.workers)
        cs_ok = abs(int_z3.value) <= math.sqrt(int_z2.value * int_z4.value) * (1 + 1e-12)
        abs_e_plain = float(
            np.trapz(np.abs(trace.section(T, 2 * T)[1]), trace.section(T, 2 * T)[0])
        )
        bracket_ok = (
            abs_e_plain - math.pi * T <= abs_e * (1 + 1e-9) + e_tol
            and abs_e <= abs_e_plain + math.pi * T + e_tol
        )
        checks = {
            "2.2": d22 <= qtol, "2.3": d23 <= qtol, "mu": dmu <= 1e-6 * len(tw.ordinates),
            "5.1a": d51a <= c_tol, "5.1b": d51b <= c_tol,
            "6.1a": d61a <= e_tol, "6.1b": d61b <= e_tol,
            "4.4": cs_ok, "6.4": bracket_ok,
        }
        for key, ok in checks.items():
            if not ok:
                violations += 1
                worst.setdefault("first_violation", f"{key}@T={T:.0f}")
    passed = violations == 0
    worst["violations"] = violations
    return _result(3, "exact decompositions and inequalities", 600, t0, passed, worst)


def criterion_4_primitive_residual(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    rng = np.random.Generator(np.random.Philox(key=20260104))
    Ts = np.sort(rng.uniform(1e3, 1e5, 50))
    table = ctx.table(float(Ts[-1]))
    F, _, _, _ = qd.integrate_prefix(
        "z", Ts, 1e-9, ctx.cfg, table=table, workers=ctx.workers
    )
    ratios = []
    for T, Fv in zip(Ts, F):
        dec = jt.predict_F(float(T))
        scale = dec.error_scale + dec.near_edge_scale
        ratios.append(abs(Fv - dec.main) / scale)
    C = float(np.max(ratios))
    return _result(
        4, "primitive main-term residual envelope", 900, t0, C < 20,
        {"fitted_C": C, "bound": 20},
    )


def criterion_5_f1_integral(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    Ts = np.geomspace(100.0, 1e6, 200)
    ratio = max(
        abs(jt.int_f1_closed_form(float(T), 2000) - jt.int_f1_piecewise(float(T)))
        / T**0.25
        for T in Ts
    )
    envelope = 0.5 * math.sqrt(2.0) * 16.0 * (2 * math.pi) ** -0.75 * 0.5
    fam_ok = True
    fams = {}
    for frac, sign in ((0.75, +1.0), (0.25, -1.0)):
        vals = []
        for m in range(1, 21):
            T = 2 * math.pi * (frac + 2 * m) ** 2
            v = jt.int_f1_piecewise(T)
            vals.append(v / T**0.75)
            fam_ok &= (v * sign > 0) and (abs(v) / T**0.75 >= envelope)
        fams[f"family_{frac}"] = float(np.mean(vals))
    passed = ratio < 10.0 and fam_ok
    return _result(
        5, "closed-form primitive of the step term", 60, t0, passed,
        {"max_ratio_T14": ratio, "envelope": envelope, **fams},
    )


def criterion_6_cubic_identity(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    Ts = [200.0, 500.0, 1e3, 5e3, 1e4]
    table = ctx.table(2 * max(Ts))
    resid = []
    for T in Ts:
        lhs = qd.integrate("z3", T, 2 * T, 1e-10, ctx.cfg, table, ctx.workers).value
        rhs = dv.cubic_moment_rhs(T)
        resid.append(abs(lhs - rhs))
    A = np.vstack([np.log(Ts), np.ones(len(Ts))]).T
    slope = float(np.linalg.lstsq(A, np.log(resid), rcond=None)[0][0])
    return _result(
        6, "cubic-moment divisor identity", 1200, t0, slope < 0.85,
        {"fitted_exponent": slope, "bound": 0.85, "residuals": [round(r, 2) for r in resid]},
    )


def criterion_7_exponential_sum(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    Ns = [10**3, 10**4, 10**5, 10**6]
    vals = [abs(dv.pure_exponential_sum(3, N)) for N in Ns]
    A = np.vstack([np.log(Ns), np.ones(len(Ns))]).T
    slope = float(np.linalg.lstsq(A, np.log(vals), rcond=None)[0][0])
    ref_diff = abs(dv.pure_exponential_sum(1, 1000) - dv.expsum_reference(1, 1000))
    passed = slope < 0.75 and ref_diff < 1e-8
    return _result(
        7, "pure exponential sum growth", 600, t0, passed,
        {"fitted_exponent": slope, "S1_ref_diff": ref_diff},
    )


def criterion_8_mean_square(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    trace = ctx.trace(ctx.top if ctx.quick else 1e6)
    Ts = np.geomspace(100.0, 1e5, 60)
    e_ratios = [abs(ms.e_of(float(T), trace=trace)) / T ** (1 / 3) for T in Ts]
    C_e = float(np.max(e_ratios))
    g_vals = np.array([ms.g_of(float(T), trace=trace) for T in Ts])
    C_g = float(np.max(np.abs(g_vals) / Ts**0.75))
    g_sign_change = bool(np.any(g_vals[:-1] * g_vals[1:] < 0))
    mean_dev = abs((ms.g_of(1e4, trace=trace) + math.pi * 1e4) / 1e4 - math.pi)
    jp, jm = ms.j_pm_e(1e4, 1e-6, ctx.cfg, trace)
    a, b = jp / 1e4**1.25, -jm / 1e4**1.25
    j_rel = abs(a - b) / max(a, b)
    passed = (
        C_e < 10 and mean_dev < 0.5 and g_sign_change and C_g < 10 and j_rel < 0.3
    )
    return _result(
        8, "mean-square error-term suite", 1800, t0, passed,
        {
            "C_E": C_e, "mean_dev": mean_dev, "G_sign_change": g_sign_change,
            "C_G": C_g, "J_ratio_dev": j_rel,
        },
    )


def criterion_9_constants(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    c0 = float(euler_constant(30))
    k1 = ks_constant(1, 10**6)
    k2 = ks_constant(2, 10**6)
    k2b = ks_constant(2, 2 * 10**6)
    d_c2 = abs(k1.c - 1.0)
    d_c4 = abs(k2.c - 1.0 / (2 * math.pi**2))
    d_c0 = abs(c0 - 0.5772156649)
    tail_ok = abs(k2b.a - k2.a) <= k2.tail_bound
    passed = d_c2 <= 1e-9 and d_c4 <= 1e-6 and d_c0 <= 1e-10 and tail_ok
    return _result(
        9, "moment constants", 60, t0, passed,
        {"c2_err": d_c2, "c4_err": d_c4, "C0_err": d_c0, "tail_honored": tail_ok},
    )


def criterion_10_distribution_probes(ctx: AcceptanceContext) -> CriterionResult:
    t0 = time.time()
    table = ctx.table(2e5)
    trace_top = 1e5
    misses = []
    jp, jm = dist.j_measures(1e4, 1e-9, ctx.cfg, table, ctx.workers)
    ratio = jp / 1e4
    if not 0.3 <= ratio <= 0.7:
        misses.append(("positivity_ratio", _miss_factor(ratio, 0.3, 0.7)))
    rep = dist.alternating_gap_identity(1e4, 1e-9, ctx.cfg, table, ctx.workers)
    win = table.restricted(1e4, 2e4).ordinates
    max_gap = float(np.max(np.diff(win)))
    if abs(rep.residual) > max_gap:
        misses.append(("gap_identity", abs(rep.residual) / max_gap))
    ks_vals = [
        dist.selberg_clt_sample(T, 10**4, 20261010, ctx.cfg, table).ks_distance
        for T in (1e3, 1e4, trace_top)
    ]
    if not all(a >= b - 1e-3 for a, b in zip(ks_vals[:-1], ks_vals[1:])):
        worst = max(b / max(a, 1e-12) for a, b in zip(ks_vals[:-1], ks_vals[1:]))
        misses.append(("ks_monotone", worst))
    kal = zr.kalpokas_steuding_sum(1e4, 0.0, ctx.cfg)
    kal_rel = abs(kal.residual) / abs(kal.predicted)
    if kal_rel >= 0.2:
        misses.append(("kalpokas_steuding", kal_rel / 0.2))
    if not misses:
        status_pass, warn = True, False
    elif all(f < 2.0 for _, f in misses):
        status_pass, warn = False, True
    else:
        status_pass, warn = False, False
    return _result(
        10, "distribution probes (report-only)", 600, t0, status_pass,
        {
            "positivity_ratio": ratio,
            "gap_identity_residual": float(abs(rep.residual)),
            "max_window_gap": max_gap,
            "ks_sequence": [round(k, 4) for k in ks_vals],
            "kalpokas_rel_err": kal_rel,
            "misses": misses,
        },
        warn=warn,
    )


def _miss_factor(x: float, lo: float, hi: float) -> float:
    if x < lo:
        return lo / max(x, 1e-12)
    if x > hi:
        return x / hi
    return 1.0


ALL_CRITERIA = [
    criterion_1_oracle_agreement,
    criterion_2_zero_table,
    criterion_3_decompositions,
    criterion_4_primitive_residual,
    criterion_5_f1_integral,
    criterion_6_cubic_identity,
    criterion_7_exponential_sum,
    criterion_8_mean_square,
    criterion_9_constants,
    criterion_10_distribution_probes,
]


def run_acceptance(
    quick: bool = True,
    workers: int = 1,
    only: list[int] | None = None,
    echo=print,
) -> list[CriterionResult]:
    """Run the acceptance criteria, printing one line per criterion."""
    ctx = AcceptanceContext(quick=quick, workers=workers)
    results = []
    for fn in ALL_CRITERIA:
        cid = int(fn.__name__.split("_")[1])
        if only and cid not in only:
            continue
        res = fn(ctx)
        results.append(res)
        echo(res.line)
    return results
