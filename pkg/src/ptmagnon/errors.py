"""Exception hierarchy shared by the solvers and the CLI."""


class PTMagnonError(Exception):
    """Base class for all package errors."""


class ParameterError(PTMagnonError, ValueError):
    """A parameter is out of range or non-finite."""


class NotFoundError(PTMagnonError):
    """A root search found no exceptional point in the bracket."""


class SingularSystemError(PTMagnonError):
    """The weak-drive linear system is singular (exact resonance)."""


class UndefinedStatisticsError(PTMagnonError):
    """g2(0) has a vanishing denominator."""


class NoSteadyStateError(PTMagnonError):
    """The Liouvillian has no zero mode, or a mode grows in time."""

    def __init__(self, msg, eigenvalue=None):
        super().__init__(msg)
        self.eigenvalue = eigenvalue


class PositivityError(PTMagnonError):
    """The steady-state density matrix has a negative eigenvalue."""

    def __init__(self, msg, min_eigenvalue=None):
        super().__init__(msg)
        self.min_eigenvalue = min_eigenvalue


class DivergenceError(PTMagnonError):
    """Time propagation blew up."""


class DegenerateTransformError(PTMagnonError):
    """The eigenvector matrix is defective (exceptional point)."""


class ConfigError(PTMagnonError):
    """Invalid scenario configuration."""

    def __init__(self, msg, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)
        self.key = key
        self.line = line
