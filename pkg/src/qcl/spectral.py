"""Eigenvalue curves of the linear interpolation ``(1-t) B + t (C + shift)`` on S.

The top eigenvector is continued across the grid by overlap matching: a
non-degenerate top level is phase-aligned with its predecessor, a numerically
degenerate top cluster is handled by projecting the predecessor into it. When
consecutive overlaps drop below ``TOL.overlap_match`` the interval is bisected.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linalg
from .config import TOL
from .errors import ContractViolation, TrackingFailure
from .hamiltonians import RestrictedOperator

REFINE_EXPONENTS = (1, 2, 3, 4)
MAX_BISECTIONS = 12


@dataclass(frozen=True, eq=False)
class InterpolationSpec:
    b_restricted: RestrictedOperator
    c_restricted: RestrictedOperator
    shift: float = 0.0

    def __post_init__(self):
        if self.b_restricted.subspace != self.c_restricted.subspace:
            raise ContractViolation("mixer and phase separator live on different subspaces")
        C = self.c_restricted.matrix
        if np.max(np.abs(C - np.diag(C.diagonal())), initial=0.0) >= TOL.hermitian:
            raise ContractViolation("phase separator must be diagonal on S")

    @classmethod
    def build(cls, b: RestrictedOperator, c: RestrictedOperator, shifted: bool = False) -> "InterpolationSpec":
        """With ``shifted``, C is lifted by ``max(0, -min diag)`` so it is entrywise non-negative."""
        shift = max(0.0, -float(c.matrix.diagonal().real.min())) if shifted else 0.0
        return cls(b, c, shift)

    @property
    def subspace(self):
        return self.b_restricted.subspace

    @property
    def dim(self) -> int:
        return self.b_restricted.dim

    @property
    def c_diagonal(self) -> np.ndarray:
        """Diagonal of the shifted phase separator on S."""
        return self.c_restricted.matrix.diagonal().real + self.shift

    def top_positions(self) -> list[int]:
        """Positions in S of the largest diagonal entries of C (within the cluster tolerance)."""
        d = self.c_diagonal
        tol = TOL.degenerate_cluster * max(1.0, float(np.max(np.abs(d))))
        return [int(a) for a in np.flatnonzero(d >= d.max() - tol)]

    def norm_bound(self) -> float:
        """Upper bound on ``||H_lin(t)||`` for t in [0, 1] (convexity: endpoint maximum)."""
        return max(linalg.operator_norm(self.b_restricted.matrix), float(np.max(np.abs(self.c_diagonal))))


def h_lin_matrix(spec: InterpolationSpec, t: float) -> np.ndarray:
    H = (1.0 - t) * spec.b_restricted.matrix
    H[np.diag_indices(spec.dim)] += t * spec.c_diagonal
    return H


def h_lin_at(spec: InterpolationSpec, t: float) -> RestrictedOperator:
    return RestrictedOperator(spec.subspace, h_lin_matrix(spec, t))


@dataclass(eq=False)
class SpectralCurve:
    grid: np.ndarray
    levels: np.ndarray
    matched_top: np.ndarray
    gap: np.ndarray
    overlaps: np.ndarray
    refined: bool = False
    tracking_ok: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.levels.shape[1]

    def min_gap_before_one(self) -> float:
        return float(self.gap[self.grid < 1.0].min())

    def gap_at_one(self) -> float:
        if self.grid[-1] != 1.0:
            raise ValueError("curve does not reach t = 1")
        return float(self.gap[-1])

    def max_level_jump(self) -> float:
        return float(np.max(np.abs(np.diff(self.levels, axis=0)), initial=0.0))


def _gap(w: np.ndarray) -> float:
    return float(w[-1] - w[-2]) if len(w) > 1 else float("inf")


def _perron_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def _continue_top(dec: linalg.EigenDecomposition, prev: np.ndarray) -> tuple[np.ndarray, float]:
    """Continuation of ``prev`` into the top eigenspace of ``dec``; returns (vector, overlap)."""
    block = dec.top_cluster()
    V = dec.eigenvectors
    if len(block) == 1:
        v = V[:, -1]
        ov = np.vdot(prev, v)
        if abs(ov) == 0.0:
            return v, 0.0
        return v * (abs(ov) / ov), float(abs(ov))
    Q = V[:, block.start:block.stop]
    proj = Q @ (Q.conj().T @ prev)
    nrm = float(np.linalg.norm(proj))
    if nrm == 0.0:
        return Q[:, -1], 0.0
    return proj / nrm, nrm


def default_grid(spec: InterpolationSpec, grid_points: int = 201, refine: bool | None = None) -> tuple[np.ndarray, bool]:
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    grid = np.linspace(0.0, 1.0, grid_points)
    if refine is None:
        refine = len(spec.top_positions()) > 1
    if refine:
        extra = [1.0 - 10.0 ** (-k) for k in REFINE_EXPONENTS]
        extra = [t for t in extra if 1.0 - t >= TOL.min_refine_spacing * (1 - 1e-6)]
        grid = np.unique(np.concatenate([grid, extra]))
    return grid, bool(refine)


def sweep_spectrum(spec: InterpolationSpec, grid_points: int = 201, refine: bool | None = None) -> SpectralCurve:
    """Eigen-decompose ``H_lin`` on a grid over [0, 1] and track the top level.

    ``refine=None`` adds the points ``1 - 10^-k`` when the optimum is degenerate.
    Gaps that close before t = 1 are recorded, not raised: they are findings.
    ``overlaps[k]`` is the worst step overlap on the way from ``grid[k-1]``.
    """
    grid, refined = default_grid(spec, grid_points, refine)
    decs = [linalg.eig_hermitian(h_lin_matrix(spec, float(t))) for t in grid]

    tops = [_perron_phase(decs[0].eigenvectors[:, -1])]
    overlaps = [1.0]
    tracking_ok = True
    bisections = 0
    for k in range(1, len(grid)):
        # walk from grid[k-1] to grid[k], inserting midpoints while the overlap is poor;
        # the extra points only carry the continuation and are not reported
        t_prev, v_prev, worst = float(grid[k - 1]), tops[-1], 1.0
        pending = [(float(grid[k]), decs[k])]
        while pending:
            t, dec = pending[-1]
            v, ov = _continue_top(dec, v_prev)
            if ov < TOL.overlap_match and bisections < MAX_BISECTIONS and t - t_prev > 1e-9:
                mid = 0.5 * (t_prev + t)
                pending.append((mid, linalg.eig_hermitian(h_lin_matrix(spec, mid))))
                bisections += 1
                continue
            if ov < TOL.overlap_match:
                tracking_ok = False
            pending.pop()
            t_prev, v_prev, worst = t, v, min(worst, ov)
        tops.append(v_prev)
        overlaps.append(worst)

    levels = np.array([d.eigenvalues for d in decs])
    return SpectralCurve(
        grid=np.asarray(grid, dtype=float),
        levels=levels,
        matched_top=np.array(tops),
        gap=np.array([_gap(w) for w in levels]),
        overlaps=np.array(overlaps),
        refined=refined,
        tracking_ok=tracking_ok,
        meta={"bisections": bisections, "shift": spec.shift},
    )


@dataclass(frozen=True, eq=False)
class TopLimit:
    vector: np.ndarray
    projector: np.ndarray
    t_source: float
    weight_on_optimal: float
    distance_to_optimal: float


def top_projection_at_one(spec: InterpolationSpec, curve: SpectralCurve, optimal_indices=None) -> TopLimit:
    """Rank-one projection onto the t -> 1 limit of the tracked top eigenvector.

    The vector at the last grid point before 1 is projected onto the top
    eigenspace of ``H_lin(1)`` computed by the eigensolver; membership of the
    result in the span of the optimal coordinates (brute-force ``optimal_indices``
    if given, else the argmax of C) is then cross-checked.
    """
    before = np.flatnonzero(curve.grid < 1.0)
    if before.size == 0:
        raise TrackingFailure("curve has no grid point before t = 1")
    k = int(before[-1])
    v_f = curve.matched_top[k]
    if not curve.tracking_ok:
        raise TrackingFailure("overlap matching broke down along the curve")

    dec = linalg.eig_hermitian(h_lin_matrix(spec, 1.0))
    block = dec.top_cluster()
    Q = dec.eigenvectors[:, block.start:block.stop]
    proj = Q @ (Q.conj().T @ v_f)
    nrm = float(np.linalg.norm(proj))
    if nrm < TOL.overlap_match:
        raise TrackingFailure(f"tracked vector has overlap {nrm:.3f} with the top eigenspace at t = 1")
    limit = proj / nrm

    if optimal_indices is None:
        positions = spec.top_positions()
    else:
        positions = spec.subspace.positions(optimal_indices)
    dist = linalg.coordinate_distance(limit, positions)
    if dist >= TOL.limit_membership:
        raise TrackingFailure(f"limit vector leaves the optimal subspace by {dist:.3e}")
    weight = float(np.sum(np.abs(limit[positions]) ** 2))
    return TopLimit(limit, np.outer(limit, limit.conj()), float(curve.grid[k]), weight, dist)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_curve_csv(curve: SpectralCurve, path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + [f"lambda_{k + 1}" for k in range(curve.dim)] + ["gap"])
        for t, lv, g in zip(curve.grid, curve.levels, curve.gap):
            w.writerow([fmt(t)] + [fmt(x) for x in lv] + [fmt(g)])
    return path
