"""Backend selection: compiled extension if available, numpy fallback otherwise.

``HARDY_LAB_PURE=1`` in the environment forces the fallback (used by the
parity tests and the benchmark).
"""

from __future__ import annotations

import os

from . import pure

_force_pure = os.environ.get("HARDY_LAB_PURE", "") not in ("", "0")

if _force_pure:
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

z_block = _impl.z_block
dirichlet_step = _impl.dirichlet_step
expsum_cos = _impl.expsum_cos


def get_backend(name: str):
    """Return a backend module by name ('native' or 'pure'); for benchmarks."""
    if name == "pure":
        return pure
    if name == "native":
        from . import _native  # noqa: F811

        return _native
    raise ValueError(f"unknown backend {name!r}")
