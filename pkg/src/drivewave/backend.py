"""Kernel backend selection.

The compiled extension (drivewave._kernels, Cython) is preferred; if it is
not importable the pure-Python/NumPy fallback (drivewave._kernels_py) is
used.  Both expose the same contract: ``advance`` for the IMEX stepper and
``gillespie_run`` for the stochastic model.  DRIVEWAVE_BACKEND=python forces
the fallback (used by the benchmark and the cross-backend tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("DRIVEWAVE_BACKEND", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

advance = _impl.advance
gillespie_run = _impl.gillespie_run

KIND_DENSITY = _kernels_py.KIND_DENSITY
KIND_WOLBACHIA = _kernels_py.KIND_WOLBACHIA
KIND_FREQUENCY = _kernels_py.KIND_FREQUENCY
KIND_SCALAR = _kernels_py.KIND_SCALAR

OUTCOME_DRIVE_LOST = _kernels_py.OUTCOME_DRIVE_LOST
OUTCOME_DRIVE_FIXED = _kernels_py.OUTCOME_DRIVE_FIXED
OUTCOME_TIMEOUT = _kernels_py.OUTCOME_TIMEOUT


def backend_name() -> str:
    """"compiled" when the Cython extension is active, else "python"."""
    return _impl.BACKEND_NAME


def get_backend(name: str):
    """Explicit backend module by name (for benchmarks/tests)."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
