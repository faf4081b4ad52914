"""Command-line front door: one subcommand per experiment.

Output is CSV by default (first line a ``# manifest: {...}`` comment with
the command, parameters, artifact version and wall time, then a header
row, then data) or JSON via ``--format json``.  With a fixed seed and
cache state the emitted tables are byte-identical across runs except for
the manifest's ``wall_time_s`` field.

Exit codes: 0 success, 1 invalid arguments, 2 a computation was flagged
suspect (zero-table rescans exhausted), 3 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from . import distribution as dist
from . import divisor as dv
from . import jutila as jt
from . import meansq as ms
from . import quad as qd
from . import zeros as zr
from .acceptance import run_acceptance
from .constants import euler_constant, ks_constant
from .special import EvalConfig, z_fast, z_oracle


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _emit(args, command: str, params: dict, header: list[str], rows: list[dict],
          wall: float, cache_keys: list[str] | None = None) -> None:
    manifest = {
        "command": command,
        "parameters": {k: v for k, v in params.items() if v is not None},
        "artifact_version": __version__,
        "cache_keys": cache_keys or [],
        "wall_time_s": round(wall, 3),
    }
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        if args.format == "json":
            json.dump({"manifest": manifest, "rows": rows}, out, indent=1, default=str)
            out.write("\n")
        else:
            out.write(f"# manifest: {json.dumps(manifest, default=str)}\n")
            out.write(",".join(header) + "\n")
            for r in rows:
                out.write(",".join(_csv_cell(r.get(h)) for h in header) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    return str(v)


def _grid(spec: str) -> list[float]:
    return [float(x) for x in spec.split(",") if x.strip()]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--cache-dir", default=None, help="override HARDY_LAB_CACHE")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-9, help="quadrature tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hardy-lab", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("z", help="point evaluation of Z(t)")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--path", choices=("fast", "oracle"), default="fast")
    p.add_argument("--digits", type=int, default=30)
    p.add_argument("--terms", type=int, default=1, help="rs correction-bound order")
    _add_common(p)

    p = sub.add_parser("zeros", help="build or refresh a zero table")
    p.add_argument("--lo", type=float, default=10.0)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--zero-tol", type=float, default=1e-9)
    p.add_argument("--source", choices=("fast", "oracle"), default="fast")
    p.add_argument("--stats", action="store_true", help="emit gap statistics only")
    _add_common(p)

    p = sub.add_parser("integral", help="integrals of g(Z) and window moments")
    p.add_argument("--op", choices=("plain", "window"), default="plain")
    p.add_argument("--kind", default="z",
                   choices=qd.INTEGRAND_KINDS)
    p.add_argument("--power", type=float, default=None)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--t-grid", default=None, help="window bases, comma separated")
    _add_common(p)

    p = sub.add_parser("jutila", help="primitive main-term residuals and int F1")
    p.add_argument("--op", choices=("predict", "intf1"), default="predict")
    p.add_argument("--t-grid", required=True)
    p.add_argument("--terms", type=int, default=1000)
    _add_common(p)

    p = sub.add_parser("cubic", help="cubic-moment identity tables")
    p.add_argument("--t-grid", required=True)
    _add_common(p)

    p = sub.add_parser("expsum", help="pure exponential sum growth")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n-grid", required=True)
    _add_common(p)

    p = sub.add_parser("eterm", help="E(T), G(T), J+-, D_k")
    p.add_argument("--op", choices=("e", "g", "jpm", "dk"), default="e")
    p.add_argument("--t-grid", required=True)
    p.add_argument("--k", type=float, default=1.0, help="moment index for dk")
    _add_common(p)

    p = sub.add_parser("dist", help="distribution probes")
    p.add_argument("--op", choices=("ipm", "jpm", "ac", "clt", "gap-identity", "phase-sum"),
                   required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--n-samples", type=int, default=10**4)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("constants", help="Euler constant and moment constants")
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--cutoff", type=int, default=10**6)
    p.add_argument("--digits", type=int, default=30)
    _add_common(p)

    p = sub.add_parser("accept", help="run the acceptance suite")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--quick", action="store_true", default=True)
    grp.add_argument("--full", action="store_true")
    p.add_argument("--only", default=None, help="criterion ids, comma separated")
    _add_common(p)
    return ap


def _run_z(args) -> tuple[list[str], list[dict], int]:
    if args.path == "oracle":
        ev = z_oracle(args.t, args.digits)
    else:
        ev = z_fast(args.t, EvalConfig(rs_correction_terms=args.terms))
    row = {
        "t": ev.t, "z": float(ev.z), "theta": float(ev.theta),
        "err_bound": ev.err_bound, "path": args.path,
    }
    return ["t", "z", "theta", "err_bound", "path"], [row], 0


def _run_zeros(args) -> tuple[list[str], list[dict], int]:
    tab = zr.find_zeros(
        args.lo, args.hi, args.zero_tol, source=args.source,
        workers=args.workers, cache_dir=args.cache_dir,
    )
    code = 2 if tab.suspect else 0
    if args.stats:
        deltas = zr.normalized_gaps(tab) if len(tab) > 1 else np.zeros(0)
        row = {
            "lo": tab.lo, "hi": tab.hi, "count": len(tab),
            "mean_normalized_gap": float(deltas.mean()) if len(deltas) else None,
            "suspect_windows": len(tab.suspect),
        }
        return ["lo", "hi", "count", "mean_normalized_gap", "suspect_windows"], [row], code
    rows = [{"n": i + 1, "gamma": g} for i, g in enumerate(tab.ordinates)]
    return ["n", "gamma"], rows, code


def _run_integral(args) -> tuple[list[str], list[dict], int]:
    if args.op == "plain":
        if args.b is None:
            raise SystemExit(1)
        r = qd.integrate(args.kind, args.a, args.b, args.tol,
                         workers=args.workers, power=args.power)
        row = {
            "kind": args.kind, "a": args.a, "b": args.b, "value": r.value,
            "abs_error_est": r.abs_error_est, "panels": r.panels, "evals": r.evals,
        }
        return list(row.keys()), [row], 2 if r.error_is_lower_bound else 0
    rows = []
    code = 0
    for T in _grid(args.t_grid):
        table = zr.find_zeros(10.0, 2 * T, 1e-9, workers=args.workers,
                              cache_dir=args.cache_dir)
        if table.suspect:
            code = 2
        ip, im = dist.i_plus_minus(T, args.tol, table=table, workers=args.workers)
        jp, jm = dist.j_measures(T, args.tol, table=table, workers=args.workers)
        int_z = qd.integrate("z", T, 2 * T, args.tol, table=table, workers=args.workers)
        int_abs = qd.integrate("abs_z", T, 2 * T, args.tol, table=table,
                               workers=args.workers)
        rows.append({
            "T": T, "I_plus": ip, "I_minus": im, "int_z": int_z.value,
            "int_abs_z": int_abs.value, "measure_plus": jp, "measure_minus": jm,
            "ramachandra_ratio": int_abs.value / (T * math.log(T) ** 0.25),
        })
    return list(rows[0].keys()), rows, code


def _run_jutila(args) -> tuple[list[str], list[dict], int]:
    rows = []
    if args.op == "predict":
        Ts = sorted(_grid(args.t_grid))
        table = zr.find_zeros(10.0, max(Ts), 1e-9, workers=args.workers,
                              cache_dir=args.cache_dir)
        F, _, _, _ = qd.integrate_prefix("z", np.asarray(Ts), args.tol,
                                         table=table, workers=args.workers)
        for T, Fv in zip(Ts, F):
            dec = jt.predict_F(T)
            rows.append({
                "T": T, "F": Fv, "F1": dec.main, "residual": Fv - dec.main,
                "error_scale": dec.error_scale,
                "near_edge_scale": dec.near_edge_scale,
                "scaled_residual": (Fv - dec.main)
                / (dec.error_scale + dec.near_edge_scale),
            })
    else:
        for T in _grid(args.t_grid):
            cf = jt.int_f1_closed_form(T, args.terms)
            pw = jt.int_f1_piecewise(T)
            rows.append({
                "T": T, "closed_form": cf, "piecewise_exact": pw,
                "tail_bound": jt.int_f1_tail_bound(T, args.terms),
                "diff_over_T14": (cf - pw) / T**0.25,
            })
    return list(rows[0].keys()), rows, 0


def _run_cubic(args) -> tuple[list[str], list[dict], int]:
    Ts = _grid(args.t_grid)
    table = zr.find_zeros(10.0, 2 * max(Ts), 1e-9, workers=args.workers,
                          cache_dir=args.cache_dir)
    rows = []
    for T in Ts:
        lhs = qd.integrate("z3", T, 2 * T, args.tol, table=table,
                           workers=args.workers).value
        rhs = dv.cubic_moment_rhs(T)
        rows.append({"T": T, "lhs": lhs, "rhs": rhs, "residual": lhs - rhs})
    if len(Ts) >= 2:
        A = np.vstack([np.log(Ts), np.ones(len(Ts))]).T
        slope = float(np.linalg.lstsq(
            A, np.log([abs(r["residual"]) for r in rows]), rcond=None)[0][0])
        for r in rows:
            r["fitted_exponent"] = slope
    return list(rows[0].keys()), rows, 0


def _run_expsum(args) -> tuple[list[str], list[dict], int]:
    Ns = [int(x) for x in _grid(args.n_grid)]
    rows = [{"k": args.k, "N": N, "value": dv.pure_exponential_sum(args.k, N)}
            for N in Ns]
    if len(Ns) >= 2:
        A = np.vstack([np.log(Ns), np.ones(len(Ns))]).T
        slope = float(np.linalg.lstsq(
            A, np.log([abs(r["value"]) for r in rows]), rcond=None)[0][0])
        for r in rows:
            r["fitted_exponent"] = slope
    return list(rows[0].keys()), rows, 0


def _run_eterm(args) -> tuple[list[str], list[dict], int]:
    Ts = _grid(args.t_grid)
    need = max(Ts) * (2 if args.op == "jpm" else 1)
    trace = ms.get_etrace(need, cache_dir=args.cache_dir)
    rows = []
    for T in Ts:
        if args.op == "e":
            rows.append({"T": T, "E": ms.e_of(T, trace=trace),
                         "over_T13": ms.e_of(T, trace=trace) / T ** (1 / 3)})
        elif args.op == "g":
            g = ms.g_of(T, trace=trace)
            rows.append({"T": T, "G": g, "over_T34": g / T**0.75})
        elif args.op == "jpm":
            jp, jm = ms.j_pm_e(T, trace=trace)
            rows.append({"T": T, "J_plus": jp, "J_minus": jm,
                         "J_plus_over_T54": jp / T**1.25,
                         "J_minus_over_T54": jm / T**1.25})
        else:
            rows.append({"T": T, "k": args.k,
                         "dk": ms.dk_estimate(args.k, T, trace=trace)})
    return list(rows[0].keys()), rows, 0


def _run_dist(args) -> tuple[list[str], list[dict], int]:
    T = args.t
    if args.op == "ac":
        rep = dist.small_values_measure(T, args.c, args.tol, workers=args.workers)
        row = {"T": T, "c": args.c, "measure": rep.value,
               "predicted": rep.predicted, "residual": rep.residual}
        return list(row.keys()), [row], 0
    if args.op == "phase-sum":
        rep = zr.kalpokas_steuding_sum(T, args.phi)
        row = {"T": T, "phi": args.phi, "value": rep.value,
               "predicted": rep.predicted, "residual": rep.residual}
        return list(row.keys()), [row], 0
    table = zr.find_zeros(10.0, 2 * T, 1e-9, workers=args.workers,
                          cache_dir=args.cache_dir)
    code = 2 if table.suspect else 0
    if args.op == "ipm":
        ip, im = dist.i_plus_minus(T, args.tol, table=table, workers=args.workers)
        row = {"T": T, "I_plus": ip, "I_minus": im}
    elif args.op == "jpm":
        jp, jm = dist.j_measures(T, args.tol, table=table, workers=args.workers)
        row = {"T": T, "measure_plus": jp, "measure_minus": jm,
               "ratio_plus": jp / T}
    elif args.op == "gap-identity":
        rep = dist.alternating_gap_identity(T, args.tol, table=table,
                                            workers=args.workers)
        row = {"T": T, "measure_plus": rep.value, "gap_sum": rep.predicted,
               "residual": rep.residual}
    else:
        cs = dist.selberg_clt_sample(T, args.n_samples, args.seed, table=table)
        counts, edges = cs.histogram()
        rows = [{"bin_lo": float(edges[i]), "bin_hi": float(edges[i + 1]),
                 "count": int(counts[i]), "ks_distance": cs.ks_distance}
                for i in range(len(counts))]
        return ["bin_lo", "bin_hi", "count", "ks_distance"], rows, code
    return list(row.keys()), [row], code


def _run_constants(args) -> tuple[list[str], list[dict], int]:
    rows = [{"quantity": "C0", "m": None, "k": None,
             "value": float(euler_constant(args.digits)),
             "tail_bound": None,
             "normalization": "Euler's constant"}]
    for m in range(1, args.m_max + 1):
        mc = ks_constant(m, args.cutoff)
        rows.append({
            "quantity": f"c_{2*m}", "m": m, "k": 2 * m, "value": mc.c,
            "tail_bound": mc.tail_bound, "normalization": mc.normalization,
        })
    return ["quantity", "m", "k", "value", "tail_bound", "normalization"], rows, 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.cache_dir is not None:
        import os

        os.environ["HARDY_LAB_CACHE"] = args.cache_dir
    t0 = time.time()
    if args.cmd == "accept":
        only = [int(x) for x in args.only.split(",")] if args.only else None
        results = run_acceptance(quick=not args.full, workers=args.workers, only=only)
        rows = [{
            "id": r.cid, "name": r.name, "status": r.status,
            "elapsed_s": round(r.elapsed_s, 2), "budget_s": r.budget_s,
            "details": json.dumps(r.details, default=str),
        } for r in results]
        _emit(args, "accept", {"quick": not args.full, "only": args.only},
              ["id", "name", "status", "elapsed_s", "budget_s", "details"],
              rows, time.time() - t0)
        return 3 if any(r.status == "fail" for r in results) else 0
    runners = {
        "z": _run_z, "zeros": _run_zeros, "integral": _run_integral,
        "jutila": _run_jutila, "cubic": _run_cubic, "expsum": _run_expsum,
        "eterm": _run_eterm, "dist": _run_dist, "constants": _run_constants,
    }
    try:
        header, rows, code = runners[args.cmd](args)
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    params = {k: v for k, v in vars(args).items()
              if k not in ("cmd", "format", "out") and v is not None}
    _emit(args, args.cmd, params, header, rows, time.time() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
