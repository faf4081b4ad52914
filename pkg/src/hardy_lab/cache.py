"""On-disk caches: zero tables, divisor tables, E-traces.

All files are plain text with a one-line header, written atomically
(temp file + rename) so concurrent readers never observe partial data.
The cache directory comes from ``HARDY_LAB_CACHE`` (default
``./.hardy-cache``); every writer takes an explicit override.

Ordinates are stored with 12 significant digits.  For tables reaching
t ~ 1e5 that is coarser than the finest refinement tolerances we allow,
so a loaded table advertises the effective tolerance implied by the file
format and a finer request is treated as a cache miss instead of handing
back silently degraded data.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np

_ZEROS_MAGIC = "hardy-zeros v1"
_DK_MAGIC = "hardy-dk v1"
_ETRACE_MAGIC = "hardy-etrace v1"


def cache_dir(explicit: str | os.PathLike | None = None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get("HARDY_LAB_CACHE")
    if env:
        return Path(env)
    return Path(".hardy-cache")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _parse_header(line: str, magic: str) -> dict[str, str] | None:
    if not line.startswith(magic):
        return None
    fields: dict[str, str] = {}
    for tok in line[len(magic):].split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            fields[k] = v
    return fields


def format_effective_tol(hi: float) -> float:
    """Absolute resolution of the 12-significant-digit file format near hi."""
    if hi <= 0:
        return 0.0
    return 10.0 ** (math.ceil(math.log10(hi)) - 12) * 5.0


# -- zero tables ------------------------------------------------------------


def zeros_path(directory: Path, lo: float, hi: float, tol: float, source: str) -> Path:
    return directory / f"zeros_{lo:g}_{hi:g}_{tol:g}_{source}.txt"


def save_zero_table(
    directory: Path, lo: float, hi: float, tol: float, source: str,
    ordinates: np.ndarray,
) -> Path:
    header = f"{_ZEROS_MAGIC} lo={lo:g} hi={hi:g} tol={tol:g} source={source}"
    body = "\n".join(f"{g:.12g}" for g in ordinates)
    path = zeros_path(directory, lo, hi, tol, source)
    _atomic_write(path, header + "\n" + body + ("\n" if body else ""))
    return path


def load_zero_table_file(path: Path):
    with open(path) as fh:
        fields = _parse_header(fh.readline().rstrip("\n"), _ZEROS_MAGIC)
        if fields is None:
            raise ValueError(f"{path} is not a zero-table cache file")
        ordinates = np.array([float(line) for line in fh if line.strip()])
    return (
        float(fields["lo"]),
        float(fields["hi"]),
        float(fields["tol"]),
        fields["source"],
        ordinates,
    )


def lookup_zero_table(
    directory: Path, lo: float, hi: float, tol: float, source: str,
) -> np.ndarray | None:
    """Ordinates of a cached table covering [lo, hi] at tolerance <= tol."""
    if not directory.is_dir():
        return None
    for path in sorted(directory.glob("zeros_*.txt")):
        try:
            flo, fhi, ftol, fsource, ords = load_zero_table_file(path)
        except (ValueError, OSError):
            continue
        if fsource != source:
            continue
        effective = max(ftol, format_effective_tol(fhi))
        if flo <= lo and fhi >= hi and effective <= tol * (1 + 1e-9):
            return ords[(ords >= lo) & (ords <= hi)]
    return None


# -- divisor tables ----------------------------------------------------------


def save_dk_table(directory: Path, k: int, lo: int, hi: int, values: np.ndarray) -> Path:
    header = f"{_DK_MAGIC} k={k} lo={lo} hi={hi}"
    body = "\n".join(str(int(v)) for v in values)
    path = directory / f"dk_{k}_{lo}_{hi}.txt"
    _atomic_write(path, header + "\n" + body + ("\n" if body else ""))
    return path


def load_dk_table(directory: Path, k: int, lo: int, hi: int) -> np.ndarray | None:
    if not directory.is_dir():
        return None
    for path in sorted(directory.glob(f"dk_{k}_*.txt")):
        with open(path) as fh:
            fields = _parse_header(fh.readline().rstrip("\n"), _DK_MAGIC)
            if fields is None:
                continue
            flo, fhi = int(fields["lo"]), int(fields["hi"])
            if int(fields["k"]) != k or flo > lo or fhi < hi:
                continue
            values = np.array([int(line) for line in fh if line.strip()], dtype=np.int64)
        return values[lo - flo : hi - flo + 1]
    return None


# -- E traces ----------------------------------------------------------------

#: Traces beyond this many points are kept in memory only; a text cache of
#: several hundred MB would cost more than recomputation.
ETRACE_PERSIST_LIMIT = 2_000_000


def save_etrace(
    directory: Path, T: float, dt: float, tol: float,
    grid: np.ndarray, e_values: np.ndarray,
) -> Path | None:
    if len(grid) > ETRACE_PERSIST_LIMIT:
        return None
    header = f"{_ETRACE_MAGIC} T={T:g} dt={dt:g} tol={tol:g}"
    lines = [f"{t:.12g} {e:.12g}" for t, e in zip(grid, e_values)]
    path = directory / f"etrace_{T:g}_{dt:g}_{tol:g}.txt"
    _atomic_write(path, header + "\n" + "\n".join(lines) + "\n")
    return path


def load_etrace(
    directory: Path, T: float, tol: float,
) -> tuple[np.ndarray, np.ndarray] | None:
    """Any cached trace reaching at least T with tolerance <= tol."""
    if not directory.is_dir():
        return None
    best = None
    for path in sorted(directory.glob("etrace_*.txt")):
        with open(path) as fh:
            fields = _parse_header(fh.readline().rstrip("\n"), _ETRACE_MAGIC)
            if fields is None:
                continue
            fT, ftol = float(fields["T"]), float(fields["tol"])
            if fT < T or ftol > tol * (1 + 1e-9):
                continue
            if best is None or fT < best[0]:
                data = np.loadtxt(fh)
                best = (fT, data[:, 0], data[:, 1])
    if best is None:
        return None
    return best[1], best[2]
