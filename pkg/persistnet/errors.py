"""
Exception hierarchy shared by the library and the command line.
"""

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INFEASIBLE = 3


class PersistnetError(ValueError):
    """Base class for all persistnet errors."""

    exit_code = EXIT_USAGE


class ParameterError(PersistnetError):
    """A parameter is outside its valid range."""

    exit_code = EXIT_USAGE


class DataError(PersistnetError):
    """Input data is missing, unreadable or structurally invalid."""

    exit_code = EXIT_DATA


class EstimationError(PersistnetError):
    """An estimator cannot be evaluated on the observed sequence."""

    exit_code = EXIT_DATA


class InfeasibleMomentsError(PersistnetError):
    """A moment pair does not belong to any Beta distribution."""

    exit_code = EXIT_INFEASIBLE

    def __init__(self, m1: float, m2: float, reason: str):
        self.m1 = m1
        self.m2 = m2
        self.reason = reason
        super().__init__(f"Infeasible moments m1={m1:.6g}, m2={m2:.6g}: {reason}")
