"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`LazyRatesError`,
so callers (and the CLI) can map failures onto exit codes.
"""


class LazyRatesError(Exception):
    """Base class for package errors."""


class StructuralError(LazyRatesError, ValueError):
    """Input has the wrong shape, dimension or algebraic structure."""


class ParameterError(LazyRatesError, ValueError):
    """A scalar parameter is outside its admissible range."""


class DegenerateInputError(LazyRatesError, ValueError):
    """Input is valid but sits on a measure-zero degenerate case the operation cannot handle."""


class ConfigError(LazyRatesError, ValueError):
    """Experiment configuration is invalid; raised before any sampling work is done."""


class NumericalConsistencyError(LazyRatesError, ArithmeticError):
    """A quantity that is real/zero analytically came out with a residue above tolerance."""


class SolverError(NumericalConsistencyError):
    """An iterative solver failed to converge.

    Attributes
    ----------
    residuals : dict
        Diagnostic values at the last iterate (gap, feasibility, iteration count).
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})

    def __str__(self):
        base = super().__str__()
        if not self.residuals:
            return base
        extra = ", ".join(f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}"
                          for k, v in self.residuals.items())
        return f"{base} ({extra})"
