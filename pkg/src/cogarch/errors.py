"""Exception types shared across the package."""


class CogarchError(Exception):
    """Base class for package-specific errors."""


class MomentDivergenceError(CogarchError):
    """A requested moment does not exist under the given parameters."""


class NonstationaryModelError(CogarchError):
    """The operation requires a strictly stationary volatility process."""


class InfeasibleMomentsError(CogarchError):
    """The moment summary lies outside the invertible region of the model.

    Raised when sampling noise (or deliberate corruption) pushes the
    summary off the manifold of summaries a stationary model can produce.
    """


class RootSelectionError(CogarchError):
    """No admissible root of the inversion quadratic passes selection."""


class AcfFitError(CogarchError):
    """The autocorrelation fit found no usable positive correlations."""


class ConfigError(CogarchError):
    """Malformed configuration text; carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class IngestError(CogarchError):
    """Malformed data file; carries a row number when known."""

    def __init__(self, message, row=None):
        self.row = row
        super().__init__(message if row is None else f"row {row}: {message}")
