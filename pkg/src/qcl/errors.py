"""Exception hierarchy. The harness maps these onto process exit codes."""


class QclError(Exception):
    pass


class ContractViolation(QclError, ValueError):
    """An input broke an operation's precondition (a shape or hermiticity check)."""


class InfeasibleProblemError(QclError):
    pass


class ProblemFormatError(QclError, ValueError):
    """A problem-definition document is malformed."""


class ValidationError(QclError):
    """A Hamiltonian failed the phase-separator / mixer / mixing-family checks."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class DegenerateTopEigenvalue(QclError):
    pass


class TrackingFailure(QclError):
    """Eigenvector continuation lost overlap even after grid refinement."""


class AccuracyFailure(QclError):
    """Step doubling did not settle below the configured tolerance."""


class BudgetExhausted(QclError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BoundViolation(QclError, AssertionError):
    pass


class ConfigError(QclError, ValueError):
    """An experiment configuration is unreadable or incomplete."""
