"""Exception hierarchy shared by the dynslip modules."""


class DynSlipError(Exception):
    """Base class for all package errors."""


class ValidationError(DynSlipError, ValueError):
    """Bad user input (parameters, config keys, CLI arguments)."""


class NumericalError(DynSlipError, ArithmeticError):
    """A numerical procedure failed to deliver a trustworthy result."""


class DomainError(ValidationError):
    """Evaluation point outside the channel [0, h]."""


class BracketFailure(NumericalError):
    """No sign change of the eigenvalue condition on a mode bracket."""


class AnalyticLimitMisuse(ValidationError):
    """A finite-ramp quantity was requested from a delta -> 0 scenario."""


class SingularAtOrigin(NumericalError):
    """Derivative of a singular power law requested at the origin."""


class AxiomViolation(NumericalError):
    """A sampled pair broke one of the maximal monotone graph axioms."""

    def __init__(self, axiom, witness, message=None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"axiom {axiom} violated at {witness!r}")


class ResolventDivergence(NumericalError):
    """The scalar resolvent solve of a regularized graph did not converge."""


class QuadratureFailure(NumericalError):
    """A quadrature integrand produced non-finite values."""


class StepDiverged(NumericalError):
    """Time integration blew up."""


class SolveFailure(NumericalError):
    """Singular linear system inside the finite-difference oracle."""


class NotPeriodic(NumericalError):
    """Time marching did not reach a periodic steady state."""


class Inconclusive(NumericalError):
    """A boundary response matched none of the known patterns."""
