"""Exception types raised across the package."""


class CesLabError(Exception):
    """Base class for all errors raised by ceslab."""


class ResourceBudgetError(CesLabError, MemoryError):
    """Requested Hilbert-space dimension exceeds the configured budget."""

    def __init__(self, dimension: int, budget: int) -> None:
        super().__init__(
            f"requested dimension {dimension} exceeds the memory budget of {budget} amplitudes"
        )
        self.dimension = dimension
        self.budget = budget


class ModeIndexError(CesLabError, IndexError):
    pass


class ShapeMismatchError(CesLabError, ValueError):
    pass


class UnsupportedGeneratorError(CesLabError, TypeError):
    pass


class ConvergenceError(CesLabError, ArithmeticError):
    pass


class DivergentSeriesError(CesLabError, ValueError):
    """The quadratic coefficient is too large for the Fock series to converge."""


class ImpureStateError(CesLabError, ValueError):
    pass


class DegenerateWeightsError(CesLabError, ValueError):
    pass


class DomainError(CesLabError, ValueError):
    """Parameters outside the domain where a formula is valid."""


class ConfigError(CesLabError, ValueError):
    pass
