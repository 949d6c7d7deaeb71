"""Exception hierarchy shared by every module."""


class ChiralQPTError(Exception):
    """Base class for all package errors."""


class InvalidParams(ChiralQPTError, ValueError):
    pass


class CriticalPointSingularity(ChiralQPTError, ArithmeticError):
    """Raised when a quantity is requested at (or numerically too close to) xi_tilde == xi."""


class InsufficientGrid(ChiralQPTError, ValueError):
    pass


class MixedSides(ChiralQPTError, ValueError):
    pass


class TruncationLeakage(ChiralQPTError):
    """A state or operator does not fit the Fock cutoff to the requested accuracy."""

    def __init__(self, message, leakage=None):
        super().__init__(message)
        self.leakage = leakage


class TailTooHeavy(ChiralQPTError):
    pass


class NonHermitianInput(ChiralQPTError, ValueError):
    pass


class SolverFailure(ChiralQPTError):
    pass


class CutoffCeiling(ChiralQPTError):
    """Cutoff escalation hit N_max before the tracked levels converged.

    The partial :class:`~chiral_qpt.oracle.ConvergenceReport` is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnnormalizedState(ChiralQPTError, ValueError):
    pass


class ZeroSqueeze(ChiralQPTError, ValueError):
    pass


class InvalidWeights(ChiralQPTError, ValueError):
    pass


class ConfigError(ChiralQPTError, ValueError):
    pass
