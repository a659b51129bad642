"""Dense complex linear-algebra kernel.

The Jacobi eigensolver comes from the compiled extension when it is built and
importable, otherwise from the numpy fallback. ``QCL_BACKEND=python`` forces
the fallback; ``set_backend`` switches at runtime (used by tests/benchmarks).
"""
from __future__ import annotations

import os

from . import _jacobi_py

KERNELS = {"python": _jacobi_py.jacobi_eigh}
try:  # pragma: no cover - depends on the build
    from . import _jacobi as _jacobi_c

    KERNELS["compiled"] = _jacobi_c.jacobi_eigh
except ImportError:  # pragma: no cover
    _jacobi_c = None

_requested = os.environ.get("QCL_BACKEND", "").strip().lower()
if _requested and _requested not in KERNELS:
    raise ImportError(f"QCL_BACKEND={_requested!r} is not available; have {sorted(KERNELS)}")
BACKEND = _requested or ("compiled" if "compiled" in KERNELS else "python")


def set_backend(name: str) -> str:
    """Select the eigensolver kernel; returns the previous backend name."""
    global BACKEND
    if name not in KERNELS:
        raise ValueError(f"backend {name!r} not available; have {sorted(KERNELS)}")
    previous, BACKEND = BACKEND, name
    return previous


def kernel():
    return KERNELS[BACKEND]


from .core import (  # noqa: E402
    EigenDecomposition,
    coordinate_distance,
    coordinate_projector,
    eig_hermitian,
    exp_i_from_eig,
    exp_i_hermitian,
    is_hermitian,
    operator_norm,
    require_hermitian,
    subspace_distance,
    unitarity_defect,
)

__all__ = [
    "BACKEND",
    "KERNELS",
    "EigenDecomposition",
    "coordinate_distance",
    "coordinate_projector",
    "eig_hermitian",
    "exp_i_from_eig",
    "exp_i_hermitian",
    "is_hermitian",
    "kernel",
    "operator_norm",
    "require_hermitian",
    "set_backend",
    "subspace_distance",
    "unitarity_defect",
]
