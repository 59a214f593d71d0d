"""Backend selection for the endpoint scan.

The compiled module is used when it imports; ``REGRET_ULT_BACKEND=python``
forces the numpy fallback.
"""
import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py.endpoint_max}
if _compiled is not None:
    BACKENDS["cython"] = _compiled.endpoint_max

if os.environ.get("REGRET_ULT_BACKEND", "").lower() == "python" or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def endpoint_max(pi, gp, gn, gr, gd, backend: str | None = None):
    return BACKENDS[backend or BACKEND](pi, gp, gn, gr, gd)


def worker_count() -> int:
    """Worker cap for parallel scans, from ``REGRET_ULT_THREADS``."""
    raw = os.environ.get("REGRET_ULT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, min(8, os.cpu_count() or 1))
