"""Independent reference implementations used by the tests."""
import numpy as np


def has_invariant_coordinate_subspace(M, tol=1e-12):
    """Brute force over every proper, non-empty coordinate subset J.

    J is invariant when no column in J has a nonzero entry outside J. Subsets
    are bitmasks, so all 2^d candidates are checked at once per column.
    """
    M = np.asarray(M)
    d = M.shape[0]
    if d == 1:
        return False
    nz = np.abs(M) > tol
    subsets = np.arange(1, (1 << d) - 1, dtype=np.int64)
    broken = np.zeros(subsets.shape, dtype=bool)
    for j in range(d):
        out_of_j = 0
        for i in np.flatnonzero(nz[:, j]):
            out_of_j |= 1 << int(i)
        in_set = (subsets >> j) & 1 == 1
        broken |= in_set & ((out_of_j & ~subsets) != 0)
    return bool(np.any(~broken))


def irreducible_by_enumeration(M, tol=1e-12):
    return not has_invariant_coordinate_subspace(M, tol)


def random_pattern_operator(rng, d, density, complex_entries=False):
    """Hermitian matrix with a random symmetric off-diagonal pattern."""
    mask = np.triu(rng.random((d, d)) < density, 1)
    vals = rng.uniform(0.1, 2.0, size=(d, d))
    if complex_entries:
        vals = vals * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(d, d)))
    U = np.where(mask, vals, 0)
    M = U + U.conj().T
    M[np.diag_indices(d)] = rng.normal(size=d)
    return M


def random_reducible_operator(rng, d):
    """Block-diagonal up to a random permutation."""
    k = int(rng.integers(1, d))
    A = random_pattern_operator(rng, k, 0.8)
    B = random_pattern_operator(rng, d - k, 0.8)
    M = np.zeros((d, d), dtype=complex)
    M[:k, :k], M[k:, k:] = A, B
    p = rng.permutation(d)
    return M[np.ix_(p, p)]


def two_member_union_example():
    """Four basis states z1..z4 (two qubits, S = all); G1 = z1-z2, z3-z4 and G2 = z1-z3, z3-z4."""
    B1 = np.zeros((4, 4))
    B2 = np.zeros((4, 4))
    for a, b in [(0, 1), (2, 3)]:
        B1[a, b] = B1[b, a] = 1
    for a, b in [(0, 2), (2, 3)]:
        B2[a, b] = B2[b, a] = 1
    return B1, B2


def rk4_anneal(B, c_diag, iota, T, steps):
    """Classical RK4 on d psi/ds = -i H(s/T) psi, H(t) = (1-t) B + t diag(c); no eigensolver."""
    B = np.asarray(B, dtype=complex)
    c = np.asarray(c_diag, dtype=float)
    psi = np.asarray(iota, dtype=complex).copy()
    if T == 0:
        return psi
    h = T / steps

    def f(s, v):
        t = s / T
        return -1j * ((1 - t) * (B @ v) + t * c * v)

    for k in range(steps):
        s = k * h
        k1 = f(s, psi)
        k2 = f(s + h / 2, psi + h / 2 * k1)
        k3 = f(s + h / 2, psi + h / 2 * k2)
        k4 = f(s + h, psi + h * k3)
        psi = psi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi
