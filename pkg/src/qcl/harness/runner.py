"""Execute an ``ExperimentConfig`` and persist CSV/JSON results plus a manifest."""
from __future__ import annotations

import csv
import json
import os
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__, linalg
from ..adiabatic import convergence_sweep, write_sweep_csv
from ..config import override
from ..errors import (
    BudgetExhausted,
    ConfigError,
    ContractViolation,
    InfeasibleProblemError,
    ProblemFormatError,
    QclError,
    ValidationError,
)
from ..hamiltonians import (
    FeasibleSubspace,
    check_mixer,
    check_mixing_family,
    check_phase_separator,
    mixing_family_from_doc,
    objective_hamiltonian,
)
from ..problems import bitstring, load_problem, solve_brute_force
from ..qaoa import (
    GateSet,
    Schedule,
    end_to_end,
    per_block_monotone,
    prepare_problem,
    trial_state,
    trotter_convergence,
)
from ..spectral import fmt, sweep_spectrum, top_projection_at_one, write_curve_csv
from .config import ExperimentConfig

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_BUDGET = 4
EXIT_IO = 5


@dataclass
class RunResult:
    exit_code: int
    out_dir: Path | None
    outputs: list[str] = field(default_factory=list)
    message: str = ""
    summary: dict = field(default_factory=dict)


def resolve_out_dir(cfg: ExperimentConfig, cli_out: str | None = None) -> Path:
    if cli_out:
        return Path(cli_out)
    if cfg.output:
        return Path(cfg.output)
    return Path(os.environ.get("QCL_OUT_DIR", "qcl_out")) / cfg.mode


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n", encoding="utf-8")


def _write_rows(path: Path, header, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# -- modes ----------------------------------------------------------------------------

def _run_validate(cfg: ExperimentConfig, out: Path) -> tuple[list[str], dict]:
    doc = cfg.problem
    cop = load_problem(doc)
    report = solve_brute_force(cop)
    s = FeasibleSubspace(cop.n, report.feasible_indices)
    fam = mixing_family_from_doc(doc)
    C = objective_hamiltonian(cop)
    pv = check_phase_separator(C, s, report.optimal_indices)
    fv = check_mixing_family(fam, s)
    mv = check_mixer(fam.total(), s)

    # feasibility preservation of the full-space gates at random angles
    rng = np.random.default_rng(cfg.seed)
    members = [fam.members[i] for i in fam.order]
    leaks = []
    kinds = ("simultaneous", "sequential")
    gates = {k: GateSet(cop.values, members, k) for k in kinds}
    for _ in range(int(cfg.get("random_checks"))):
        beta, gamma = rng.uniform(-np.pi, np.pi, size=2)
        for k in kinds:
            psi = trial_state(gates[k], Schedule(((float(beta), float(gamma)),)), s.embed(_uniform(s.dim_s)))
            leaks.append(linalg.coordinate_distance(psi, s.basis_indices))

    verdict = {
        "ok": bool(pv.ok and fv.ok),
        "n": cop.n,
        "feasible": [bitstring(i, cop.n) for i in report.feasible_indices],
        "optimal": report.optimal_strings(cop.n),
        "f_max": report.f_max,
        "phase_separator": {
            "ok": pv.ok,
            "max_offdiag": pv.max_offdiag,
            "top": [bitstring(i, cop.n) for i in pv.top_indices],
            "matches_optimal": pv.matches_optimal,
        },
        "mixer_sum": mv.as_dict(),
        "mixing_family": fv.as_dict(),
        "gate_leakage_max": max(leaks, default=0.0),
        "gate_leakage_samples": len(leaks),
    }
    _write_json(out / "verdict.json", verdict)
    return ["verdict.json"], {"ok": verdict["ok"]}


def _uniform(d: int) -> np.ndarray:
    return np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128)


def _run_spectrum(cfg: ExperimentConfig, out: Path) -> tuple[list[str], dict]:
    prob = prepare_problem(cfg.problem, shifted=bool(cfg.get("shifted")))
    curve = sweep_spectrum(prob.spec, int(cfg.get("grid_points")), cfg.get("refine"))
    write_curve_csv(curve, out / "spectrum.csv")
    summary = {
        "dim_s": prob.spec.dim,
        "optimal": prob.report.optimal_strings(prob.cop.n),
        "degenerate_optimum": len(prob.report.optimal_indices) > 1,
        "min_gap_before_one": curve.min_gap_before_one(),
        "gap_at_one": curve.gap_at_one(),
        "grid_size": int(curve.grid.size),
        "refined": curve.refined,
        "tracking_ok": curve.tracking_ok,
        "shift": prob.spec.shift,
    }
    if curve.tracking_ok:
        limit = top_projection_at_one(prob.spec, curve, prob.report.optimal_indices)
        summary["limit_weight_on_optimal"] = limit.weight_on_optimal
        summary["limit_distance_to_optimal"] = limit.distance_to_optimal
    _write_json(out / "spectrum_summary.json", summary)
    return ["spectrum.csv", "spectrum_summary.json"], summary


def _run_anneal(cfg: ExperimentConfig, out: Path) -> tuple[list[str], dict]:
    prob = prepare_problem(cfg.problem)
    res = convergence_sweep(prob.spec, prob.iota, cfg.get("T_list"), cfg.get("eps"),
                            prob.optimal_positions, richardson=bool(cfg.get("richardson")))
    write_sweep_csv(res, out / "anneal.csv")
    summary = {
        "eps": res.eps_target,
        "success": res.success,
        "distances": res.distances,
        "richardson_deltas": [r.richardson_delta for r in res.runs],
    }
    _write_json(out / "anneal_summary.json", summary)
    return ["anneal.csv", "anneal_summary.json"], summary


def _run_qaoa(cfg: ExperimentConfig, out: Path) -> tuple[list[str], dict]:
    prob = prepare_problem(cfg.problem)
    T, m = float(cfg.get("T")), int(cfg.get("m"))
    members = prob.family.restricted(prob.subspace)
    reports = trotter_convergence(prob.spec, members, prob.kind, T, m, [int(n) for n in cfg.get("n_list")],
                                  prob.iota, prob.optimal_positions)
    _write_rows(out / "trotter.csv",
                ["n", "max_block_error", "discretization_error", "total_error", "composed_bound", "dist_to_opt"],
                [[r.n, fmt(r.max_block_error), fmt(r.discretization_error), fmt(r.total_error),
                  fmt(r.composed_bound), fmt(r.dist_to_opt)] for r in reports])
    _write_rows(out / "trotter_blocks.csv", ["n", "j", "block_error"],
                [[r.n, j + 1, fmt(e)] for r in reports for j, e in enumerate(r.block_errors)])
    _write_json(out / "schedule.json", reports[-1].schedule.to_json())
    summary = {
        "mixer_kind": prob.kind,
        "per_block_monotone": per_block_monotone(reports),
        "final_dist_to_opt": reports[-1].dist_to_opt,
        "discretization_error": reports[-1].discretization_error,
    }
    _write_json(out / "trotter_summary.json", summary)
    return ["trotter.csv", "trotter_blocks.csv", "schedule.json", "trotter_summary.json"], summary


def _run_end2end(cfg: ExperimentConfig, out: Path) -> tuple[list[str], dict]:
    caps = {**DEFAULT_CAPS, **(cfg.get("caps") or {})}
    try:
        res = end_to_end(cfg.problem, float(cfg.get("eps")), T_max=float(caps["T"]),
                         m_max=int(caps["m"]), n_max=int(caps["n"]))
    except BudgetExhausted as exc:
        best = exc.best
        doc = {"success": False, "eps": cfg.get("eps"), "caps": caps,
               "best": None if best is None else dict(zip(("T", "m", "n", "dist_to_opt"), best))}
        _write_json(out / "end2end.json", doc)
        exc.outputs = ["end2end.json"]
        raise
    doc = res.to_json()
    doc["eps"] = cfg.get("eps")
    _write_json(out / "end2end.json", doc)
    return ["end2end.json"], {"success": True, "T": res.T, "m": res.m, "n": res.n,
                              "dist_to_opt": res.dist_to_opt, "leakage": res.leakage}


DEFAULT_CAPS = {"T": 100.0, "m": 50, "n": 50}
MODE_RUNNERS = {
    "validate": _run_validate,
    "spectrum": _run_spectrum,
    "anneal": _run_anneal,
    "qaoa": _run_qaoa,
    "end2end": _run_end2end,
}


def _versions() -> dict:
    return {"qcl": __version__, "numpy": np.__version__, "python": platform.python_version()}


def run(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> RunResult:
    """Run one experiment; never raises for the expected failure classes."""
    out = Path(out_dir) if out_dir is not None else resolve_out_dir(cfg)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        return RunResult(EXIT_IO, None, message=f"cannot create output directory {out}: {exc}")

    start = time.perf_counter()
    outputs, summary, message, code = [], {}, "ok", EXIT_OK
    try:
        with override(**cfg.tolerances):
            outputs, summary = MODE_RUNNERS[cfg.mode](cfg, out)
    except (ConfigError, ProblemFormatError, InfeasibleProblemError) as exc:
        code, message = EXIT_CONFIG, f"configuration error: {exc}"
    except ValidationError as exc:
        code, message = EXIT_VALIDATION, f"validation failure: {exc}"
        verdict = getattr(exc.verdict, "as_dict", None)
        if verdict is not None:
            summary = {"verdict": verdict()}
    except ContractViolation as exc:
        # e.g. a non-Hermitian explicit mixer matrix
        code, message = EXIT_VALIDATION, f"validation failure: {exc}"
    except BudgetExhausted as exc:
        code, message = EXIT_BUDGET, f"budget exhausted: {exc}"
        outputs = getattr(exc, "outputs", [])
    except OSError as exc:
        code, message = EXIT_IO, f"I/O error: {exc}"
    except QclError as exc:
        code, message = EXIT_INTERNAL, f"{type(exc).__name__}: {exc}"

    manifest = {
        "config": cfg.to_json(),
        "mode": cfg.mode,
        "seed": cfg.seed,
        "versions": _versions(),
        "backend": linalg.BACKEND,
        "wall_time_s": time.perf_counter() - start,
        "outputs": outputs,
        "exit_code": code,
        "message": message,
        "summary": summary,
    }
    try:
        _write_json(out / "manifest.json", manifest)
    except OSError as exc:
        return RunResult(EXIT_IO, out, outputs, f"cannot write manifest: {exc}", summary)
    return RunResult(code, out, outputs + ["manifest.json"], message, summary)
