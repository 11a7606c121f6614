"""Kernel backend selection.

The hot loops (Runge-Kutta integration to steady state, density-grid sweeps,
and the agent-based micro-step) exist twice: a Cython extension and a pure
Python reference. The compiled backend is picked when importable; set
``CPRDYN_KERNELS=python`` or ``CPRDYN_KERNELS=compiled`` to force one. The
two backends produce identical numbers (checked in the test suite), so the
choice only affects speed.
"""

from __future__ import annotations

import os
import warnings

_requested = os.environ.get("CPRDYN_KERNELS", "").strip().lower()

if _requested in ("", "compiled", "c"):
    try:
        from . import _ckern as _impl
    except ImportError:
        if _requested:
            raise
        from . import _pure as _impl

        warnings.warn(
            "compiled kernels unavailable, falling back to the pure-Python "
            "backend (expect large slowdowns on sweeps)",
            RuntimeWarning,
            stacklevel=2,
        )
elif _requested in ("python", "pure", "py"):
    from . import _pure as _impl
else:
    raise RuntimeError(
        f"CPRDYN_KERNELS={_requested!r} not understood; "
        "use 'compiled' or 'python'"
    )

BACKEND = _impl.BACKEND_NAME

STEADY = _impl.STEADY
DEPLETED = _impl.DEPLETED
MAX_TIME = _impl.MAX_TIME
NUMERIC_FAILURE = _impl.NUMERIC_FAILURE

rk4_step = _impl.rk4_step
integrate_terminal = _impl.integrate_terminal
integrate_record = _impl.integrate_record
sample_path = _impl.sample_path
density_chunk = _impl.density_chunk
abm_realization = _impl.abm_realization
rng_stream = _impl.rng_stream


def get_backend(name: str):
    """Return a specific backend module ('compiled' or 'python').

    Used by the cross-backend tests and the benchmark; normal callers should
    use the module-level functions, which follow the selected backend.
    """
    if name in ("python", "pure", "py"):
        from . import _pure

        return _pure
    if name in ("compiled", "c"):
        from . import _ckern

        return _ckern
    raise ValueError(f"unknown backend {name!r}")
