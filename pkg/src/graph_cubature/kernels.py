"""Backend selection for the hot numerical kernels.

The compiled Cython kernel is used when it was built and importable;
otherwise the pure-Python implementation is used. Setting the environment
variable ``GRAPH_CUBATURE_PURE=1`` forces the pure-Python backend.
"""
import os

from graph_cubature import _jacobi_py

python_jacobi = _jacobi_py.jacobi_diagonalize

try:
    from graph_cubature._jacobi_ext import jacobi_diagonalize as compiled_jacobi
except ImportError:  # pragma: no cover - depends on the build
    compiled_jacobi = None

if compiled_jacobi is not None and not os.environ.get("GRAPH_CUBATURE_PURE"):
    BACKEND = "compiled"
    jacobi_diagonalize = compiled_jacobi
else:
    BACKEND = "python"
    jacobi_diagonalize = python_jacobi


def max_workers():
    """Thread cap from ``GRAPH_CUBATURE_THREADS`` (0 or unset means auto)."""
    raw = os.environ.get("GRAPH_CUBATURE_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        return os.cpu_count() or 1
    return value
