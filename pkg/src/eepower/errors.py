"""Exception types shared across the solvers and the CLI."""


class PowerControlError(Exception):
    """Base class for solver-level failures."""


class InfeasibleError(PowerControlError):
    """The requested allocation problem has no usable solution."""


class NumericalError(PowerControlError):
    """An iterative method failed to converge."""
