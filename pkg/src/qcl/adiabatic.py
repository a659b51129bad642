"""Quasi-adiabatic evolution on the feasible subspace.

``propagate`` integrates ``dU/ds = -i H_lin(s/T) U`` for ``s`` in ``[0, T]`` with
the exponential midpoint rule: every step multiplies by
``exp(-i H_lin(s_mid/T) ds)``, so the propagator stays unitary to rounding and
the scheme is second order in ``ds``.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linalg
from .config import TOL
from .errors import AccuracyFailure, ContractViolation
from .spectral import InterpolationSpec, fmt, h_lin_matrix


@dataclass(frozen=True, eq=False)
class AnnealRun:
    T: float
    steps: int
    final_state: np.ndarray
    dist_to_opt: float
    unitarity_defect: float
    propagator: np.ndarray = field(repr=False)
    richardson_delta: float = float("nan")
    initial_is_perron: bool = True


def default_steps(spec: InterpolationSpec, T: float) -> int:
    return max(1, math.ceil(TOL.steps_per_unit * T * spec.norm_bound()))


def evolve(spec: InterpolationSpec, T: float, steps: int) -> np.ndarray:
    """Propagator ``U_T(1)`` on S from ``steps`` exponential-midpoint steps."""
    if steps < 1:
        raise ContractViolation("steps must be >= 1")
    U = np.eye(spec.dim, dtype=np.complex128)
    if T == 0:
        return U
    ds = T / steps
    basis = None
    for k in range(steps):
        t_mid = (k + 0.5) / steps
        # consecutive midpoints are close, so the previous eigenbasis warm-starts Jacobi
        dec = linalg.eig_hermitian(h_lin_matrix(spec, t_mid), guess=basis)
        basis = dec.eigenvectors
        U = linalg.exp_i_from_eig(dec, ds) @ U
    return U


def _is_perron(spec: InterpolationSpec, iota: np.ndarray) -> bool:
    dec = linalg.eig_hermitian(spec.b_restricted.matrix)
    top = dec.top_cluster()
    Q = dec.eigenvectors[:, top.start:top.stop]
    return float(np.linalg.norm(Q.conj().T @ iota)) > 1 - 1e-8


def propagate(spec: InterpolationSpec, iota, T: float, steps: int | None = None,
              optimal_positions=None, richardson: bool = False) -> AnnealRun:
    """Evolve ``iota`` for total time ``T`` and measure the distance to S_max.

    ``optimal_positions`` are positions inside S (default: argmax of C). With
    ``richardson`` the step count is doubled until successive final states agree
    to ``TOL.richardson``; failing that within ``TOL.richardson_max_doublings``
    raises ``AccuracyFailure``.
    """
    iota = np.asarray(iota, dtype=np.complex128)
    if iota.shape != (spec.dim,):
        raise ContractViolation(f"initial state has shape {iota.shape}, expected ({spec.dim},)")
    if abs(np.linalg.norm(iota) - 1.0) > 1e-10:
        raise ContractViolation("initial state must be normalized")
    if T < 0:
        raise ContractViolation("T must be non-negative")
    perron = _is_perron(spec, iota)
    if not perron:
        warnings.warn("initial state is not a top eigenstate of the mixer; convergence is not guaranteed",
                      stacklevel=2)
    positions = spec.top_positions() if optimal_positions is None else list(optimal_positions)
    steps = default_steps(spec, T) if steps is None else int(steps)

    U = evolve(spec, T, steps)
    delta = float("nan")
    if richardson and T > 0:
        for _ in range(TOL.richardson_max_doublings + 1):
            U2 = evolve(spec, T, 2 * steps)
            delta = float(np.linalg.norm(U2 @ iota - U @ iota))
            U, steps = U2, 2 * steps
            if delta < TOL.richardson:
                break
        else:
            raise AccuracyFailure(f"T={T}: step doubling still moves the state by {delta:.3e}")

    psi = U @ iota
    return AnnealRun(
        T=float(T),
        steps=steps,
        final_state=psi,
        dist_to_opt=linalg.coordinate_distance(psi, positions),
        unitarity_defect=linalg.unitarity_defect(U),
        propagator=U,
        richardson_delta=delta,
        initial_is_perron=perron,
    )


@dataclass
class SweepResult:
    runs: list[AnnealRun]
    eps_target: float | None = None

    @property
    def T_values(self) -> list[float]:
        return [r.T for r in self.runs]

    @property
    def distances(self) -> list[float]:
        return [r.dist_to_opt for r in self.runs]

    @property
    def success(self) -> bool | None:
        if self.eps_target is None:
            return None
        return bool(self.runs) and self.runs[-1].dist_to_opt < self.eps_target

    def best_so_far(self) -> list[float]:
        return list(np.minimum.accumulate(self.distances))


def convergence_sweep(spec: InterpolationSpec, iota, T_list, eps_target: float | None = None,
                      optimal_positions=None, richardson: bool = True) -> SweepResult:
    T_list = [float(T) for T in T_list]
    if any(b < a for a, b in zip(T_list, T_list[1:])):
        raise ContractViolation("T_list must be ascending")
    runs = [propagate(spec, iota, T, optimal_positions=optimal_positions, richardson=richardson)
            for T in T_list]
    return SweepResult(runs, eps_target)


def write_sweep_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["T", "steps", "dist_to_opt", "unitarity_defect"])
        for r in result.runs:
            w.writerow([fmt(r.T), r.steps, fmt(r.dist_to_opt), fmt(r.unitarity_defect)])
    return path
