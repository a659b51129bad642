"""qcl: a desk-scale laboratory for QAOA convergence mechanics."""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BoundViolation,
    BudgetExhausted,
    ConfigError,
    ContractViolation,
    QclError,
    ValidationError,
)
from .problems import load_problem, solve_brute_force  # noqa: E402
from .hamiltonians import (  # noqa: E402
    FeasibleSubspace,
    MixingFamily,
    check_mixer,
    check_mixing_family,
    check_phase_separator,
    mixing_family_from_doc,
)
from .spectral import InterpolationSpec, sweep_spectrum  # noqa: E402
from .adiabatic import convergence_sweep, propagate  # noqa: E402
from .qaoa import (  # noqa: E402
    end_to_end,
    prepare_problem,
    synthesize_schedule,
    trotter_convergence,
    verify_lemma6,
)

__all__ = [
    "BoundViolation",
    "BudgetExhausted",
    "ConfigError",
    "ContractViolation",
    "FeasibleSubspace",
    "InterpolationSpec",
    "MixingFamily",
    "QclError",
    "ValidationError",
    "check_mixer",
    "check_mixing_family",
    "check_phase_separator",
    "convergence_sweep",
    "end_to_end",
    "load_problem",
    "mixing_family_from_doc",
    "prepare_problem",
    "propagate",
    "solve_brute_force",
    "sweep_spectrum",
    "synthesize_schedule",
    "trotter_convergence",
    "verify_lemma6",
]
