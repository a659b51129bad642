"""Pure numpy twin of the compiled Jacobi kernel.

Same rotation sequence and stopping rule as ``_jacobi.pyx``; each rotation is
applied with vectorized row/column updates instead of a C loop.
"""
from __future__ import annotations

import math

import numpy as np


def jacobi_eigh(A_in, tol: float = 1e-15, max_sweeps: int = 60):
    A = np.array(A_in, dtype=np.complex128, order="C", copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    fro = math.sqrt(float(np.sum(np.abs(A) ** 2)))
    A[np.diag_indices(n)] = A.diagonal().real
    iu = np.triu_indices(n, 1)

    sweep = 0
    while sweep < max_sweeps:
        off2 = float(np.sum(np.abs(A[iu]) ** 2))
        if off2 == 0.0 or math.sqrt(2.0 * off2) <= tol * fro:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = math.hypot(apq.real, apq.imag)
                if r == 0.0:
                    continue
                uc = (apq / r).conjugate()
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                newp = c * colp - s * uc * colq
                newq = s * colp + c * uc * colq
                A[:, p] = newp
                A[:, q] = newq
                A[p, :] = newp.conj()
                A[q, :] = newq.conj()
                A[p, p] = app - t * r
                A[q, q] = aqq + t * r
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * uc * vq
                V[:, q] = s * vp + c * uc * vq
    return A.diagonal().real.copy(), V, sweep
