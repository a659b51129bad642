"""Numerical tolerances shared by every module.

All thresholds live on one mutable ``Tolerances`` instance, ``TOL``. Code reads
them at call time, so ``override`` (a context manager) or ``set_tolerance``
changes behaviour globally, which is what the CLI's ``--tol NAME=VALUE`` uses.
"""
from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass
class Tolerances:
    # linalg-core
    hermitian: float = 1e-12
    unitary: float = 1e-10
    eig_residual: float = 1e-10
    reconstruction: float = 1e-9
    degenerate_cluster: float = 1e-9
    projection: float = 1e-10
    normalized: float = 1e-12
    jacobi_offdiag: float = 1e-15
    jacobi_max_sweeps: int = 60
    # problems / hamiltonians
    f_tie: float = 1e-12
    zero_entry: float = 1e-12
    leakage: float = 1e-12
    phase_separator_rel: float = 1e-9
    perron_gap_rel: float = 1e-9
    # spectral
    overlap_match: float = 0.9
    limit_membership: float = 1e-6
    min_refine_spacing: float = 1e-4
    # adiabatic
    richardson: float = 1e-6
    richardson_max_doublings: int = 6
    steps_per_unit: float = 20.0
    # qaoa
    trotter_jitter: float = 1e-9
    product_bound_slack: float = 1e-12

    def names(self) -> list[str]:
        return [f.name for f in dataclasses.fields(self)]

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


TOL = Tolerances()


def set_tolerance(name: str, value) -> None:
    if name not in TOL.names():
        raise KeyError(f"unknown tolerance {name!r}; known: {', '.join(TOL.names())}")
    kind = type(getattr(Tolerances, name))
    setattr(TOL, name, kind(value))


@contextlib.contextmanager
def override(**values):
    """Temporarily replace tolerances, restoring the previous values on exit."""
    saved = {k: getattr(TOL, k) for k in values}
    try:
        for k, v in values.items():
            set_tolerance(k, v)
        yield TOL
    finally:
        for k, v in saved.items():
            setattr(TOL, k, v)
