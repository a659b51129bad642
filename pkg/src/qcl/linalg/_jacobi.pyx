# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Cyclic complex Jacobi eigensolver for dense Hermitian matrices (compiled)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

cnp.import_array()


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def jacobi_eigh(A_in, double tol=1e-15, int max_sweeps=60):
    """Diagonalize Hermitian ``A_in``; returns ``(eigenvalues, V, sweeps)``.

    Eigenvalues come back unsorted, in the diagonal order Jacobi leaves them,
    with ``A = V diag(w) V^H``. Only the lower/upper consistency of ``A_in`` is
    assumed; the caller validates hermiticity.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] Aarr = np.array(A_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = Aarr.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] Varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] A = Aarr
    cdef double complex[:, ::1] V = Varr
    cdef Py_ssize_t p, q, k
    cdef double fro2 = 0.0, off2, r, theta, t, c, s, app, aqq
    cdef double complex u, uc, akp, akq, nkp, nkq
    cdef int sweep = 0

    for p in range(n):
        for q in range(n):
            fro2 += _abs2(A[p, q])
    # Hermitian input: the diagonal is real by contract.
    for p in range(n):
        A[p, p] = A[p, p].real

    with nogil:
        while sweep < max_sweeps:
            off2 = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off2 += _abs2(A[p, q])
            if off2 == 0.0 or sqrt(2.0 * off2) <= tol * sqrt(fro2):
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = hypot(A[p, q].real, A[p, q].imag)
                    if r == 0.0:
                        continue
                    u = A[p, q] / r
                    uc = u.conjugate()
                    app = A[p, p].real
                    aqq = A[q, q].real
                    theta = (aqq - app) / (2.0 * r)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        akp = A[k, p]
                        akq = A[k, q]
                        nkp = c * akp - s * uc * akq
                        nkq = s * akp + c * uc * akq
                        A[k, p] = nkp
                        A[k, q] = nkq
                        A[p, k] = nkp.conjugate()
                        A[q, k] = nkq.conjugate()
                    A[p, p] = app - t * r
                    A[q, q] = aqq + t * r
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    for k in range(n):
                        akp = V[k, p]
                        akq = V[k, q]
                        V[k, p] = c * akp - s * uc * akq
                        V[k, q] = s * akp + c * uc * akq

    w = np.empty(n, dtype=np.float64)
    for p in range(n):
        w[p] = A[p, p].real
    return w, Varr, sweep
