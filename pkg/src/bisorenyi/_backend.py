"""Kernel backend selection: the compiled extension when built, else numpy."""
try:
    from . import _kernels as kernels
    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build
    from . import _kernels_py as kernels
    BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
