"""Alternating-operator circuits and the constructive convergence schedule.

A layer ``(beta, gamma)`` acts as ``mixer(beta) @ phase_separator(gamma)``
(phase first). The constructive schedule splits the discretized adiabatic
propagator ``prod_j exp(-i H_lin(j/m) T/m)`` into ``m`` blocks of ``n``
identical layers with ``beta = (1 - j/m) T/(m n)`` and ``gamma = (j/m) T/(m n)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .adiabatic import propagate
from .config import TOL
from .errors import BoundViolation, BudgetExhausted, ContractViolation, ValidationError
from .hamiltonians import (
    FeasibleSubspace,
    MixingFamily,
    check_mixing_family,
    check_phase_separator,
    mixing_family_from_doc,
    objective_hamiltonian,
    perron_top_eigenstate,
    restrict,
)
from .problems import load_problem, solve_brute_force
from .spectral import InterpolationSpec, h_lin_matrix

KINDS = ("simultaneous", "sequential")
VARIANTS = ("corrected", "paper_literal")


class GateSet:
    """Phase separator and mixer unitaries on one space (usually S).

    ``members`` are listed in application order: for the sequential mixer the
    first member acts first. Eigendecompositions are computed once, so gates for
    any angle cost two matrix products.
    """

    def __init__(self, phase_diag, members: Sequence[np.ndarray], kind: str = "simultaneous"):
        if kind not in KINDS:
            raise ValueError(f"mixer kind must be one of {KINDS}")
        if not members:
            raise ContractViolation("mixer needs at least one member")
        self.phase_diag = np.asarray(phase_diag, dtype=float)
        self.members = [np.asarray(m, dtype=np.complex128) for m in members]
        self.kind = kind
        self.dim = self.phase_diag.shape[0]
        if any(m.shape != (self.dim, self.dim) for m in self.members):
            raise ContractViolation("member dimension does not match the phase separator")
        self.mixer_hamiltonian = sum(self.members)
        if kind == "simultaneous":
            self._decs = [linalg.eig_hermitian(self.mixer_hamiltonian)]
        else:
            self._decs = [linalg.eig_hermitian(m) for m in self.members]

    def phase_separator(self, gamma: float) -> np.ndarray:
        return np.diag(np.exp(-1j * gamma * self.phase_diag))

    def mixer(self, beta: float) -> np.ndarray:
        U = np.eye(self.dim, dtype=np.complex128)
        if beta == 0:
            return U
        for dec in self._decs:
            U = linalg.exp_i_from_eig(dec, beta) @ U
        return U

    def layer(self, beta: float, gamma: float) -> np.ndarray:
        return self.mixer(beta) * np.exp(-1j * gamma * self.phase_diag)[None, :]

    def apply_layer(self, beta: float, gamma: float, psi: np.ndarray) -> np.ndarray:
        psi = np.exp(-1j * gamma * self.phase_diag) * psi
        if beta != 0:
            for dec in self._decs:
                V = dec.eigenvectors
                psi = V @ (np.exp(-1j * beta * dec.eigenvalues) * (V.conj().T @ psi))
        return psi


def build_gates(C, fam: MixingFamily, s: FeasibleSubspace, kind: str = "simultaneous",
                optimal=None, shift: float = 0.0, validate: bool = True) -> GateSet:
    """Validated gate set on S from a full-space phase Hamiltonian and mixing family.

    ``optimal`` (full-space indices of S_max) is required for the phase-separator
    check; without it the argmax of ``C`` on S is taken as given.
    """
    C = np.asarray(C)
    if validate:
        if optimal is None:
            d = C.diagonal().real[list(s.basis_indices)]
            optimal = [s.basis_indices[a] for a in np.flatnonzero(d >= d.max() - TOL.f_tie)]
        pv = check_phase_separator(C, s, optimal)
        if not pv.ok:
            raise ValidationError("Hamiltonian is not a phase separator for this problem", pv)
        fv = check_mixing_family(fam, s)
        if not fv.ok:
            raise ValidationError("family is not a mixing family on the feasible subspace", fv)
    phase = C.diagonal().real[list(s.basis_indices)] + shift
    return GateSet(phase, fam.restricted(s), kind)


@dataclass(frozen=True)
class Schedule:
    layers: tuple[tuple[float, float], ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.layers)

    def blocks(self) -> list[tuple[tuple[float, float], ...]]:
        n = self.meta.get("n")
        if not n:
            return [self.layers]
        return [self.layers[k:k + n] for k in range(0, len(self.layers), n)]

    def to_json(self) -> dict:
        return {"layers": [{"beta": b, "gamma": g} for b, g in self.layers], "meta": dict(self.meta)}

    @classmethod
    def from_json(cls, doc: dict) -> "Schedule":
        return cls(tuple((float(x["beta"]), float(x["gamma"])) for x in doc["layers"]), dict(doc.get("meta", {})))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def synthesize_schedule(T: float, m: int, n: int, variant: str = "corrected",
                        mixer_kind: str = "simultaneous") -> Schedule:
    """Constructive schedule: ``m`` blocks of ``n`` identical ``(beta, gamma)`` layers.

    ``corrected`` splits ``exp(-i H_lin(j/m) T/m)`` into ``n`` first-order slices.
    ``paper_literal`` keeps the alternative angles ``beta = (1 - x_j) x_j / n`` and
    ``gamma = x_j^2 / n`` with ``x_j = j T / m`` (the block argument scaled by ``j``)
    for comparison only.
    """
    if m < 1 or n < 1 or T <= 0:
        raise ValueError("need T > 0 and m, n >= 1")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    layers = []
    for j in range(1, m + 1):
        if variant == "corrected":
            s = j / m
            delta = T / m
            beta, gamma = (1.0 - s) * delta / n, s * delta / n
        else:
            x = j * T / m
            beta, gamma = (1.0 - x) * x / n, x * x / n
        layers.extend([(beta, gamma)] * n)
    meta = {"T": float(T), "m": int(m), "n": int(n), "mixer_kind": mixer_kind, "schedule_variant": variant}
    return Schedule(tuple(layers), meta)


def trial_state(g: GateSet, sched: Schedule, iota) -> np.ndarray:
    psi = np.asarray(iota, dtype=np.complex128).copy()
    for beta, gamma in sched.layers:
        psi = g.apply_layer(beta, gamma, psi)
    return psi


def circuit_unitary(g: GateSet, sched: Schedule) -> np.ndarray:
    U = np.eye(g.dim, dtype=np.complex128)
    for beta, gamma in sched.layers:
        U = g.layer(beta, gamma) @ U
    return U


def expectation(C, psi) -> float:
    """``<psi|C|psi>`` for a Hermitian matrix or a diagonal given as a 1-D array."""
    C = np.asarray(C)
    psi = np.asarray(psi, dtype=np.complex128)
    val = np.vdot(psi, C * psi) if C.ndim == 1 else np.vdot(psi, C @ psi)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ContractViolation(f"expectation has imaginary part {val.imag:.3e}; C is not Hermitian")
    return float(val.real)


@dataclass(frozen=True)
class ProductBoundCheck:
    lhs: float
    eps: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound + TOL.product_bound_slack


def _ordered_product(mats) -> np.ndarray:
    out = np.eye(mats[0].shape[0], dtype=np.complex128)
    for M in mats:
        out = out @ M
    return out


def verify_lemma6(V_list, W_list) -> ProductBoundCheck:
    """``||prod V_j - prod W_j|| <= (1 + eps)^m - 1`` with ``eps = max_j ||V_j - W_j||``."""
    if len(V_list) != len(W_list) or not V_list:
        raise ContractViolation("need two non-empty unitary lists of equal length")
    for U in (*V_list, *W_list):
        if linalg.unitarity_defect(U) >= TOL.unitary:
            raise ContractViolation("product-bound inputs must be unitary")
    eps = max(linalg.operator_norm(V - W) for V, W in zip(V_list, W_list))
    lhs = linalg.operator_norm(_ordered_product(V_list) - _ordered_product(W_list))
    check = ProductBoundCheck(lhs, eps, (1.0 + eps) ** len(V_list) - 1.0)
    if not check.holds:
        raise BoundViolation(f"product bound violated: {lhs!r} > {check.bound!r}")
    return check


@dataclass(frozen=True, eq=False)
class TrotterReport:
    n: int
    block_errors: np.ndarray
    discretization_error: float
    total_error: float
    composed_bound: float
    dist_to_opt: float
    schedule: Schedule = field(repr=False)

    @property
    def max_block_error(self) -> float:
        return float(np.max(self.block_errors))


def discretized_blocks(spec: InterpolationSpec, T: float, m: int) -> list[np.ndarray]:
    """``W_j = exp(-i H_lin(j/m) T/m)``, j = 1..m (right-end sampling)."""
    return [linalg.exp_i_from_eig(linalg.eig_hermitian(h_lin_matrix(spec, j / m)), T / m)
            for j in range(1, m + 1)]


def gates_for_spec(spec: InterpolationSpec, members, kind: str) -> GateSet:
    members = [np.asarray(mm, dtype=np.complex128) for mm in members]
    if np.max(np.abs(sum(members) - spec.b_restricted.matrix)) > 1e-12:
        raise ContractViolation("family members do not sum to the interpolation's mixer")
    return GateSet(spec.c_diagonal, members, kind)


def block_unitaries(g: GateSet, sched: Schedule) -> list[np.ndarray]:
    out = []
    for block in sched.blocks():
        beta, gamma = block[0]
        if any(layer != block[0] for layer in block):
            out.append(circuit_unitary(g, Schedule(tuple(block))))
        else:
            out.append(np.linalg.matrix_power(g.layer(beta, gamma), len(block)))
    return out


def trotter_convergence(spec: InterpolationSpec, members, kind: str, T: float, m: int, n_list,
                        iota=None, optimal_positions=None, reference: np.ndarray | None = None) -> list[TrotterReport]:
    """Per-block and total Trotter errors of the constructive schedule for each ``n``.

    ``members`` are the mixing-family members restricted to S (application
    order); they must sum to ``spec.b_restricted``. ``reference`` is ``U_T(1)``;
    by default it is integrated with step doubling.
    """
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ContractViolation("n_list must be strictly ascending")
    g = gates_for_spec(spec, members, kind)
    if iota is None:
        iota = perron_top_eigenstate(spec.b_restricted).vector
    positions = spec.top_positions() if optimal_positions is None else list(optimal_positions)
    if reference is None:
        reference = propagate(spec, iota, T, optimal_positions=positions, richardson=True).propagator
    W = discretized_blocks(spec, T, m)
    W_total = np.eye(spec.dim, dtype=np.complex128)
    for Wj in W:
        W_total = Wj @ W_total
    disc = linalg.operator_norm(W_total - reference)

    reports = []
    for n in n_list:
        sched = synthesize_schedule(T, m, n, "corrected", kind)
        V = block_unitaries(g, sched)
        errs = np.array([linalg.operator_norm(Vj - Wj) for Vj, Wj in zip(V, W)])
        V_total = np.eye(spec.dim, dtype=np.complex128)
        for Vj in V:
            V_total = Vj @ V_total
        total = linalg.operator_norm(V_total - reference)
        bound = float(np.prod(1.0 + errs) - 1.0 + disc)
        if total > bound + TOL.product_bound_slack:
            raise BoundViolation(f"n={n}: total error {total!r} exceeds composed bound {bound!r}")
        psi = V_total @ iota
        reports.append(TrotterReport(n, errs, disc, total, bound,
                                     linalg.coordinate_distance(psi, positions), sched))
    return reports


def per_block_monotone(reports: Sequence[TrotterReport]) -> bool:
    errs = [r.max_block_error for r in reports]
    return all(b <= a + TOL.trotter_jitter for a, b in zip(errs, errs[1:]))


# -- end to end ---------------------------------------------------------------------

T_LADDER = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)
M_LADDER = (1, 2, 5, 10, 20, 50)
N_LADDER = (1, 2, 5, 10, 20, 50)


@dataclass(frozen=True, eq=False)
class Problem:
    """A loaded problem document with everything the circuit layer needs."""

    cop: object
    report: object
    subspace: FeasibleSubspace
    family: MixingFamily
    kind: str
    spec: InterpolationSpec
    iota: np.ndarray

    @property
    def optimal_positions(self) -> list[int]:
        return self.subspace.positions(self.report.optimal_indices)


def prepare_problem(doc: dict, kind: str | None = None, shifted: bool = True) -> Problem:
    """Load, brute-force and validate a problem document; fails on invalid gates.

    ``shifted`` lifts C on S to be non-negative (used for evolution; spectrum
    plots default to the unshifted interpolation).
    """
    cop = load_problem(doc)
    report = solve_brute_force(cop)
    s = FeasibleSubspace(cop.n, report.feasible_indices)
    fam = mixing_family_from_doc(doc)
    kind = kind or doc.get("mixer_kind", "simultaneous")
    if kind not in KINDS:
        raise ValidationError(f"unknown mixer kind {kind!r}")
    C = objective_hamiltonian(cop)
    pv = check_phase_separator(C, s, report.optimal_indices)
    if not pv.ok:
        raise ValidationError("objective Hamiltonian fails the phase-separator check", pv)
    fv = check_mixing_family(fam, s)
    if not fv.ok:
        raise ValidationError("mixer is not a mixing family on the feasible subspace", fv)
    b = restrict(fam.total(), s)
    spec = InterpolationSpec.build(b, restrict(C, s), shifted=shifted)
    iota = perron_top_eigenstate(b, fv.sum_verdict).vector
    return Problem(cop, report, s, fam, kind, spec, iota)


def full_space_trial_state(problem: Problem, sched: Schedule) -> np.ndarray:
    """Run the schedule with full-space gates on the embedded initial state."""
    C = problem.cop.values + problem.spec.shift
    members = [problem.family.members[i] for i in problem.family.order]
    g = GateSet(C, members, problem.kind)
    return trial_state(g, sched, problem.subspace.embed(problem.iota))


@dataclass(frozen=True, eq=False)
class EndToEndResult:
    success: bool
    T: float
    m: int
    n: int
    schedule: Schedule
    dist_to_opt: float
    leakage: float
    initial_dist: float
    trace: list = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "T": self.T,
            "m": self.m,
            "n": self.n,
            "dist_to_opt": self.dist_to_opt,
            "initial_dist": self.initial_dist,
            "leakage": self.leakage,
            "schedule": self.schedule.to_json(),
            "trace": [dict(zip(("T", "m", "n", "dist_to_opt"), row)) for row in self.trace],
        }


def end_to_end(doc: dict, eps: float, T_max: float = 100.0, m_max: int = 50, n_max: int = 50,
               kind: str | None = None, T_ladder=T_LADDER, m_ladder=M_LADDER, n_ladder=N_LADDER,
               problem: Problem | None = None) -> EndToEndResult:
    """Find a constructive schedule whose trial state is within ``eps`` of S_max.

    ``T`` is escalated first, and only values whose adiabatic evolution already
    meets the target are tried; for each, ``m`` and then ``n`` are escalated.
    Exhausting the caps raises ``BudgetExhausted`` carrying the best attempt.
    """
    problem = problem or prepare_problem(doc, kind)
    g = gates_for_spec(problem.spec, problem.family.restricted(problem.subspace), problem.kind)
    positions = problem.optimal_positions
    dist0 = linalg.coordinate_distance(problem.iota, positions)

    def witness(sched: Schedule, dist: float, T=0.0, m=0, n=0, trace=()):
        psi_full = full_space_trial_state(problem, sched)
        leak = linalg.coordinate_distance(psi_full, problem.subspace.basis_indices)
        return EndToEndResult(True, T, m, n, sched, dist, leak, dist0, list(trace))

    if dist0 < eps:
        return witness(Schedule((), {"T": 0.0, "m": 0, "n": 0, "mixer_kind": problem.kind,
                                     "schedule_variant": "corrected"}), dist0)

    trace, best = [], None
    for T in (t for t in T_ladder if t <= T_max):
        adiabatic = propagate(problem.spec, problem.iota, T, optimal_positions=positions)
        if adiabatic.dist_to_opt >= eps:
            continue
        for m in (v for v in m_ladder if v <= m_max):
            for n in (v for v in n_ladder if v <= n_max):
                sched = synthesize_schedule(T, m, n, "corrected", problem.kind)
                dist = linalg.coordinate_distance(trial_state(g, sched, problem.iota), positions)
                trace.append((T, m, n, dist))
                if best is None or dist < best[3]:
                    best = (T, m, n, dist)
                if dist < eps:
                    return witness(sched, dist, T, m, n, trace)
    raise BudgetExhausted(f"no schedule reached dist < {eps} within T<={T_max}, m<={m_max}, n<={n_max}", best)
