"""Hermitian eigendecomposition and the unitary exponentials built from it.

Vectors and matrices are plain complex ``numpy`` arrays. Contract checks use
the thresholds in ``config.TOL``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import TOL
from ..errors import ContractViolation


def _as_square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ContractViolation(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


def hermitian_defect(A) -> float:
    A = _as_square(A)
    return float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0


def is_hermitian(A, tol: float | None = None) -> bool:
    return hermitian_defect(A) < (TOL.hermitian if tol is None else tol)


def require_hermitian(A, what: str = "matrix") -> np.ndarray:
    A = _as_square(A)
    defect = hermitian_defect(A)
    if defect >= TOL.hermitian * max(1.0, float(np.max(np.abs(A)))):
        raise ContractViolation(f"{what} is not Hermitian (max |A - A^H| = {defect:.3e})")
    return A


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def clusters(self, tol: float | None = None) -> list[range]:
        """Index ranges of numerically degenerate eigenvalue groups."""
        w = self.eigenvalues
        scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
        gap_tol = (TOL.degenerate_cluster if tol is None else tol) * scale
        out, start = [], 0
        for k in range(1, len(w) + 1):
            if k == len(w) or w[k] - w[k - 1] >= gap_tol:
                out.append(range(start, k))
                start = k
        return out

    def top_cluster(self, tol: float | None = None) -> range:
        return self.clusters(tol)[-1]


def eig_hermitian(A, guess=None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    ``guess`` (a unitary, typically the eigenvectors of a nearby matrix) is used
    as a warm start: Jacobi then runs on the nearly diagonal ``G^H A G``.
    """
    from . import kernel

    A = require_hermitian(A)
    if guess is not None:
        G = np.asarray(guess, dtype=np.complex128)
        if G.shape != A.shape:
            raise ContractViolation(f"warm-start basis has shape {G.shape}, expected {A.shape}")
        A = G.conj().T @ A @ G
    A = 0.5 * (A + A.conj().T)
    w, V, sweeps = kernel()(A, TOL.jacobi_offdiag, TOL.jacobi_max_sweeps)
    if guess is not None:
        V = G @ V
    # One Newton-Schulz step pulls V back onto the unitary group (the defect is
    # squared). This also re-orthonormalizes vectors inside degenerate clusters.
    V = 1.5 * V - 0.5 * V @ (V.conj().T @ V)
    order = np.argsort(w, kind="stable")
    w = np.ascontiguousarray(w[order])
    V = np.ascontiguousarray(V[:, order])
    return EigenDecomposition(w, V, sweeps)


def exp_i_from_eig(dec: EigenDecomposition, theta: float) -> np.ndarray:
    """``exp(-i theta A)`` from a precomputed decomposition of ``A``."""
    V = dec.eigenvectors
    return (V * np.exp(-1j * theta * dec.eigenvalues)) @ V.conj().T


def exp_i_hermitian(A, theta: float) -> np.ndarray:
    """Return ``exp(-i theta A)`` for Hermitian ``A``.

    Diagonal inputs are exponentiated entrywise (exact phases); everything else
    goes through ``eig_hermitian``.
    """
    A = require_hermitian(A)
    n = A.shape[0]
    if theta == 0:
        return np.eye(n, dtype=np.complex128)
    d = A.diagonal()
    if not np.any(A - np.diag(d)):
        return np.diag(np.exp(-1j * theta * d.real))
    return exp_i_from_eig(eig_hermitian(A), theta)


def operator_norm(A) -> float:
    """Largest singular value, via the top eigenvalue of ``A^H A``."""
    A = np.asarray(A, dtype=np.complex128)
    if A.size == 0:
        return 0.0
    if A.ndim == 1:
        return float(np.linalg.norm(A))
    G = A.conj().T @ A if A.shape[0] >= A.shape[1] else A @ A.conj().T
    lam = eig_hermitian(0.5 * (G + G.conj().T)).eigenvalues[-1]
    return float(np.sqrt(max(lam, 0.0)))


def unitarity_defect(U) -> float:
    U = _as_square(U)
    return operator_norm(U.conj().T @ U - np.eye(U.shape[0]))


def coordinate_projector(dim: int, positions) -> np.ndarray:
    P = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.asarray(list(positions), dtype=int)
    P[idx, idx] = 1.0
    return P


def _require_normalized(v: np.ndarray) -> None:
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) >= max(TOL.normalized, 1e3 * np.finfo(float).eps):
        raise ContractViolation(f"vector is not normalized (norm {norm!r})")


def subspace_distance(v, P) -> float:
    """``||(1 - P) v||`` for a normalized ``v`` and an orthogonal projection ``P``."""
    v = np.asarray(v, dtype=np.complex128)
    P = _as_square(P)
    if P.shape[0] != v.shape[0]:
        raise ContractViolation(f"dimension mismatch: vector {v.shape[0]}, projection {P.shape[0]}")
    if hermitian_defect(P) >= TOL.projection or operator_norm(P @ P - P) >= TOL.projection:
        raise ContractViolation("P is not an orthogonal projection")
    _require_normalized(v)
    return float(min(1.0, np.linalg.norm(v - P @ v)))


def coordinate_distance(v, positions) -> float:
    """Distance of ``v`` to the span of the given coordinate axes.

    Same value as ``subspace_distance(v, coordinate_projector(...))`` but summed
    over the complement directly, which avoids cancellation when ``v`` is close
    to the subspace.
    """
    v = np.asarray(v, dtype=np.complex128)
    mask = np.ones(v.shape[0], dtype=bool)
    mask[np.asarray(list(positions), dtype=int)] = False
    return float(min(1.0, np.sqrt(np.sum(np.abs(v[mask]) ** 2))))
