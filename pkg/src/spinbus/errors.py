"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
physicality violations exit 3, numerical failures exit 4.
"""


class SpinBusError(Exception):
    """Base class for all package errors."""


class ConfigError(SpinBusError):
    """Malformed or inconsistent run configuration (exit code 2)."""


class PhysicalityError(SpinBusError):
    """A state or parameter set violates positivity/normalization."""


class NotXStateError(PhysicalityError):
    """Density matrix lacks the required X structure."""


class NonIdenticalQubitsError(PhysicalityError):
    """The closed-form engine requires omega1 == omega2 and delta1 == delta2."""


class ZeroDetuningError(PhysicalityError):
    """delta_j = 0 makes the dispersive expressions singular."""


class ZeroCouplingError(PhysicalityError):
    """g = 0 has no finite oscillation period."""


class DomainError(PhysicalityError):
    """Scalar argument outside its mathematical domain."""


class InvalidGeometryError(PhysicalityError):
    """Device geometry with nonpositive lengths or frequencies."""


class GridTooCoarse(SpinBusError):
    """Measurement-optimization grid below the minimum resolution."""


class NumericalError(SpinBusError):
    """Base class for numerical failures (exit code 4)."""


class TruncationError(NumericalError):
    """Fock-space truncation cannot reach the requested tail bound."""


class DimensionMismatchError(NumericalError):
    """Operator dimensions inconsistent with 4 x (n_max + 1)."""


class DegenerateError(NumericalError):
    """Central-block eigensystem degenerate (E2 = 0), mixing angle undefined."""


class NoPeriodError(NumericalError):
    """Autocorrelation has no interior maximum above the threshold."""


class DegenerateSeriesError(NumericalError):
    """Constant time series, correlation coefficient undefined."""
