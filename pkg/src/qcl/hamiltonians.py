"""Operators built from problems, and the structural checks on them.

Full-space operators are dense ``2^N x 2^N`` numpy arrays in the big-endian
computational basis. ``restrict`` cuts them down to the feasible coordinates.
Irreducibility is decided by connectivity of the nonzero pattern: Hermitian
matrices have symmetric patterns, so strong connectivity is plain connectivity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import linalg
from .config import TOL
from .errors import ContractViolation, DegenerateTopEigenvalue, ProblemFormatError, ValidationError
from .problems import Cop, SolutionReport, one_hot_mask


@dataclass(frozen=True)
class FeasibleSubspace:
    n: int
    basis_indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.basis_indices)
        if not idx:
            raise ContractViolation("feasible subspace must contain at least one basis state")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ContractViolation("basis indices must be strictly ascending")
        if idx[0] < 0 or idx[-1] >= 1 << self.n:
            raise ContractViolation(f"basis index outside [0, 2^{self.n})")
        object.__setattr__(self, "basis_indices", idx)

    @classmethod
    def from_cop(cls, p: Cop) -> "FeasibleSubspace":
        return cls(p.n, tuple(int(i) for i in np.flatnonzero(p.feasible)))

    @classmethod
    def full(cls, n: int) -> "FeasibleSubspace":
        return cls(n, tuple(range(1 << n)))

    @property
    def dim_s(self) -> int:
        return len(self.basis_indices)

    @property
    def full_dim(self) -> int:
        return 1 << self.n

    def positions(self, indices) -> list[int]:
        """Map full-space basis indices to their positions inside the subspace."""
        lookup = {b: a for a, b in enumerate(self.basis_indices)}
        try:
            return [lookup[int(i)] for i in indices]
        except KeyError as exc:
            raise ContractViolation(f"index {exc.args[0]} is not feasible") from None

    def embed(self, v) -> np.ndarray:
        out = np.zeros(self.full_dim, dtype=np.complex128)
        out[list(self.basis_indices)] = v
        return out

    def complement(self) -> np.ndarray:
        mask = np.ones(self.full_dim, dtype=bool)
        mask[list(self.basis_indices)] = False
        return np.flatnonzero(mask)


@dataclass(frozen=True, eq=False)
class RestrictedOperator:
    subspace: FeasibleSubspace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (self.subspace.dim_s, self.subspace.dim_s):
            raise ContractViolation(f"matrix shape {m.shape} does not match dim_s={self.subspace.dim_s}")
        linalg.require_hermitian(m, "restricted operator")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.subspace.dim_s


def objective_hamiltonian(p: Cop) -> np.ndarray:
    return np.diag(p.values.astype(np.complex128))


def restrict(A, s: FeasibleSubspace) -> RestrictedOperator:
    A = linalg.require_hermitian(A, "operator")
    if A.shape[0] != s.full_dim:
        raise ContractViolation(f"operator has dim {A.shape[0]}, subspace lives in {s.full_dim}")
    idx = np.asarray(s.basis_indices)
    return RestrictedOperator(s, A[np.ix_(idx, idx)].copy())


# -- elementary full-space operators -------------------------------------------------


def _bit(z: int, q: int, n: int) -> int:
    return (z >> (n - 1 - q)) & 1


def sigma_x(n: int, qubit: int) -> np.ndarray:
    d = 1 << n
    M = np.zeros((d, d), dtype=np.complex128)
    z = np.arange(d)
    M[z ^ (1 << (n - 1 - qubit)), z] = 1.0
    return M


def transverse_field(n: int) -> np.ndarray:
    return sum(sigma_x(n, q) for q in range(n))


def xy_term(n: int, i: int, j: int) -> np.ndarray:
    """``(X_i X_j + Y_i Y_j) / 2``: swaps the two bits when they differ."""
    d = 1 << n
    M = np.zeros((d, d), dtype=np.complex128)
    flip = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
    for z in range(d):
        if _bit(z, i, n) != _bit(z, j, n):
            M[z ^ flip, z] = 1.0
    return M


def controlled_x_term(n: int, qubit: int, controls: Sequence[int]) -> np.ndarray:
    """Flip ``qubit`` only when every control qubit is 0."""
    d = 1 << n
    M = np.zeros((d, d), dtype=np.complex128)
    for z in range(d):
        if all(_bit(z, c, n) == 0 for c in controls):
            M[z ^ (1 << (n - 1 - qubit)), z] = 1.0
    return M


# -- graph machinery ----------------------------------------------------------------


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def pattern_edges(M, tol: float | None = None) -> list[tuple[int, int]]:
    """Off-diagonal positions ``(a, b)``, ``a < b``, with a nonzero entry in either triangle."""
    tol = TOL.zero_entry if tol is None else tol
    mag = np.abs(np.asarray(M))
    mask = (mag > tol) | (mag.T > tol)
    a, b = np.nonzero(np.triu(mask, 1))
    return list(zip(a.tolist(), b.tolist()))


def connected_components(size: int, edges) -> list[tuple[int, ...]]:
    uf = _UnionFind(size)
    for a, b in edges:
        uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(size):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def is_irreducible(M, tol: float | None = None) -> bool:
    M = np.asarray(M)
    return len(connected_components(M.shape[0], pattern_edges(M, tol))) == 1


# -- verdicts -----------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseSeparatorVerdict:
    diagonal: bool
    max_offdiag: float
    top_indices: tuple[int, ...]
    matches_optimal: bool

    @property
    def ok(self) -> bool:
        return self.diagonal and self.matches_optimal


@dataclass(frozen=True)
class MixerVerdict:
    feasibility_preserving: bool
    max_leakage: float
    entrywise_nonneg: bool
    most_negative: float
    irreducible: bool
    components: tuple[tuple[int, ...], ...]

    @property
    def ok(self) -> bool:
        return self.feasibility_preserving and self.entrywise_nonneg and self.irreducible

    def as_dict(self) -> dict:
        return {
            "feasibility_preserving": self.feasibility_preserving,
            "max_leakage": self.max_leakage,
            "entrywise_nonneg": self.entrywise_nonneg,
            "most_negative": self.most_negative,
            "irreducible": self.irreducible,
            "components": [list(c) for c in self.components],
            "ok": self.ok,
        }


def check_phase_separator(H, s: FeasibleSubspace, optimal) -> PhaseSeparatorVerdict:
    H = np.asarray(H)
    optimal = tuple(sorted(int(i) for i in optimal))
    s.positions(optimal)
    off = H - np.diag(H.diagonal())
    max_off = float(np.max(np.abs(off))) if off.size else 0.0
    diagonal = max_off < TOL.zero_entry
    d = H.diagonal().real[list(s.basis_indices)]
    spread = float(d.max() - d.min())
    top = d >= d.max() - TOL.phase_separator_rel * spread
    top_indices = tuple(s.basis_indices[a] for a in np.flatnonzero(top))
    return PhaseSeparatorVerdict(diagonal, max_off, top_indices, top_indices == optimal)


def check_mixer(B, s: FeasibleSubspace) -> MixerVerdict:
    B = linalg.require_hermitian(B, "mixer")
    idx = np.asarray(s.basis_indices)
    comp = s.complement()
    leak = float(np.max(np.abs(B[np.ix_(comp, idx)]))) if comp.size else 0.0
    R = B[np.ix_(idx, idx)]
    most_negative = float(R.real.min())
    nonneg = most_negative > -TOL.zero_entry and float(np.max(np.abs(R.imag))) < TOL.zero_entry
    parts = connected_components(s.dim_s, pattern_edges(R))
    components = tuple(tuple(s.basis_indices[a] for a in part) for part in parts)
    return MixerVerdict(leak < TOL.leakage, leak, nonneg, most_negative, len(parts) == 1, components)


@dataclass(frozen=True)
class MixingFamily:
    members: tuple
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.members:
            raise ContractViolation("a mixing family needs at least one member")
        members = tuple(linalg.require_hermitian(np.asarray(m, dtype=np.complex128), "family member")
                        for m in self.members)
        if len({m.shape for m in members}) != 1:
            raise ContractViolation("family members differ in dimension")
        order = tuple(range(len(members))) if self.order is None else tuple(int(i) for i in self.order)
        if sorted(order) != list(range(len(members))):
            raise ContractViolation(f"order {order} is not a permutation of the members")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.members)

    def total(self) -> np.ndarray:
        return sum(self.members)

    def restricted(self, s: FeasibleSubspace) -> list[np.ndarray]:
        """Member restrictions to ``s``, listed in application order."""
        return [restrict(self.members[i], s).matrix for i in self.order]


@dataclass(frozen=True)
class MixingFamilyVerdict:
    members: tuple[MixerVerdict, ...]
    feasibility_preserving: bool
    entrywise_nonneg: bool
    jointly_irreducible: bool
    components: tuple[tuple[int, ...], ...]
    sum_verdict: MixerVerdict = field(repr=False)

    @property
    def ok(self) -> bool:
        return self.feasibility_preserving and self.entrywise_nonneg and self.jointly_irreducible

    def as_dict(self) -> dict:
        return {
            "is_mixing_family": self.ok,
            "feasibility_preserving": self.feasibility_preserving,
            "entrywise_nonneg": self.entrywise_nonneg,
            "jointly_irreducible": self.jointly_irreducible,
            "components": [list(c) for c in self.components],
            "members": [m.as_dict() for m in self.members],
            "sum": self.sum_verdict.as_dict(),
        }


def check_mixing_family(fam: MixingFamily, s: FeasibleSubspace) -> MixingFamilyVerdict:
    """Per-member checks plus joint irreducibility of the union edge graph.

    For non-negative members no entries cancel in the sum, so the union graph is
    the graph of the sum; the sum's mixer verdict is computed and must agree.
    """
    member_verdicts = tuple(check_mixer(m, s) for m in fam.members)
    idx = np.asarray(s.basis_indices)
    edges = set()
    for m in fam.members:
        edges.update(pattern_edges(m[np.ix_(idx, idx)]))
    parts = connected_components(s.dim_s, sorted(edges))
    components = tuple(tuple(s.basis_indices[a] for a in part) for part in parts)
    verdict = MixingFamilyVerdict(
        members=member_verdicts,
        feasibility_preserving=all(v.feasibility_preserving for v in member_verdicts),
        entrywise_nonneg=all(v.entrywise_nonneg for v in member_verdicts),
        jointly_irreducible=len(parts) == 1,
        components=components,
        sum_verdict=check_mixer(fam.total(), s),
    )
    if verdict.entrywise_nonneg and verdict.jointly_irreducible != verdict.sum_verdict.irreducible:
        raise AssertionError("union-graph connectivity disagrees with the irreducibility of the family sum")
    return verdict


# -- Perron state --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PerronState:
    vector: np.ndarray
    eigenvalue: float
    gap: float


def perron_top_eigenstate(R: RestrictedOperator, verdict: MixerVerdict | None = None) -> PerronState:
    """Unique top eigenvector of an irreducible non-negative restricted mixer."""
    if verdict is not None and not verdict.ok:
        raise ValidationError("Perron state requested for an operator that is not a valid mixer", verdict)
    dec = linalg.eig_hermitian(R.matrix)
    w, V = dec.eigenvalues, dec.eigenvectors
    gap = float(w[-1] - w[-2]) if len(w) > 1 else float("inf")
    scale = max(1.0, linalg.operator_norm(R.matrix))
    if gap < TOL.perron_gap_rel * scale:
        raise DegenerateTopEigenvalue(f"top eigenvalue is degenerate (gap {gap:.3e}); verdict/tolerance mismatch")
    v = V[:, -1]
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])
    return PerronState(v, float(w[-1]), gap)


# -- built-in mixing families --------------------------------------------------------


def builtin_transverse_field_family(n: int) -> MixingFamily:
    return MixingFamily(tuple(sigma_x(n, q) for q in range(n)))


def xy_pairs(group: Sequence[int], topology: str = "ring") -> list[tuple[int, int]]:
    g = [int(q) for q in group]
    if topology == "complete":
        return list(combinations(g, 2))
    if topology != "ring":
        raise ValueError(f"unknown XY topology {topology!r}")
    pairs = [(g[k], g[(k + 1) % len(g)]) for k in range(len(g))]
    seen, out = set(), []
    for a, b in pairs:
        key = frozenset((a, b))
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out


def builtin_xy_mixing_family(groups: Sequence[Sequence[int]], n: int | None = None,
                             topology: str = "ring") -> MixingFamily:
    """Pairwise XY swap terms inside each one-hot group (ring of adjacent pairs by default)."""
    groups = [list(map(int, g)) for g in groups]
    flat = [q for g in groups for q in g]
    if len(flat) != len(set(flat)):
        raise ValueError("one-hot groups must be disjoint")
    if any(len(g) < 2 for g in groups):
        raise ValueError("each one-hot group needs at least 2 qubits")
    n = max(flat) + 1 if n is None else n
    members = [xy_term(n, a, b) for g in groups for a, b in xy_pairs(g, topology)]
    return MixingFamily(tuple(members))


def builtin_controlled_x_family(n: int, edges) -> MixingFamily:
    """Independent-set preserving bit flips: qubit v flips only if all neighbours are 0."""
    nbrs = {v: set() for v in range(n)}
    for a, b in edges:
        nbrs[int(a)].add(int(b))
        nbrs[int(b)].add(int(a))
    return MixingFamily(tuple(controlled_x_term(n, v, sorted(nbrs[v])) for v in range(n)))


def _parse_matrix(raw, dim: int) -> np.ndarray:
    arr = np.asarray(raw, dtype=float)
    if arr.shape == (dim * dim, 2):
        arr = arr.reshape(dim, dim, 2)
    if arr.shape != (dim, dim, 2):
        raise ProblemFormatError(f"explicit matrix must hold {dim}x{dim} [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def mixing_family_from_doc(doc: dict) -> MixingFamily:
    """Mixing family named in a problem-definition document (transverse field by default)."""
    n = doc["n"]
    mixer = doc.get("mixer", {"type": "transverse_field"})
    kind = mixer.get("type")
    order = mixer.get("order")
    if kind == "transverse_field":
        fam = builtin_transverse_field_family(n)
    elif kind == "xy_onehot":
        groups = mixer.get("groups")
        if groups is None:
            feas = doc.get("feasible", {})
            if feas.get("type") != "one_hot":
                raise ProblemFormatError("xy_onehot mixer needs 'groups' or a one_hot feasibility block")
            groups = feas["groups"]
        fam = builtin_xy_mixing_family(groups, n, mixer.get("topology", "ring"))
    elif kind == "controlled_x":
        edges = mixer.get("edges")
        if edges is None:
            feas = doc.get("feasible", {})
            if feas.get("type") != "independent_set":
                raise ProblemFormatError("controlled_x mixer needs 'edges' or an independent_set feasibility block")
            edges = feas["edges"]
        fam = builtin_controlled_x_family(n, edges)
    elif kind == "explicit":
        mats = mixer.get("matrices")
        if not mats:
            raise ProblemFormatError("explicit mixer needs a non-empty 'matrices' list")
        fam = MixingFamily(tuple(_parse_matrix(m, 1 << n) for m in mats))
    else:
        raise ProblemFormatError(f"unknown mixer type {kind!r}")
    if order is not None:
        fam = MixingFamily(fam.members, tuple(order))
    return fam


def matrix_to_doc(M) -> list:
    """Row-major ``[re, im]`` pairs, the explicit-matrix document encoding."""
    M = np.asarray(M, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def one_hot_subspace(n: int, groups) -> FeasibleSubspace:
    return FeasibleSubspace(n, tuple(int(i) for i in np.flatnonzero(one_hot_mask(n, groups))))


def subspace_for(p: Cop, report: SolutionReport | None = None) -> FeasibleSubspace:
    if report is not None:
        return FeasibleSubspace(p.n, report.feasible_indices)
    return FeasibleSubspace.from_cop(p)
