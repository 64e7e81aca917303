"""
Simulator Exceptions

Every failure the CLI can report maps onto one of these classes; the
`exit_code` attribute is the process exit status used by app.main.
"""


class SimulatorError(Exception):
    """Base class for simulator failures"""
    exit_code = 1


class ConfigurationError(SimulatorError):
    """Invalid parameters, configuration files or missing inputs"""
    exit_code = 2


class NumericalError(SimulatorError):
    """A numerical invariant (unitarity, trace, positivity) was violated"""
    exit_code = 3


class StepSizeError(NumericalError):
    """Norm or trace drifted during time propagation; the step is too large"""


class AlgorithmicFaultError(NumericalError):
    """The monotonic optimizer lost monotonicity or produced a non-finite field"""


class ConvergenceError(SimulatorError):
    """Optimization ended below the requested fidelity"""
    exit_code = 4
