"""Exception types shared across the package."""


class UnsupportedOrderError(ValueError):
    """A derivative order outside the closed-form table (0..3) was requested."""


class EmptySystemError(ValueError):
    """An assembled linear system would contain zero rows."""


class DegenerateFitError(RuntimeError):
    """The posterior mean is identically zero, so the prior precision update is undefined."""


class IllPosedEvidenceError(RuntimeError):
    """Too few rows relative to the effective number of parameters for a noise estimate."""


class NumericalError(RuntimeError):
    """A dense factorization or decomposition failed."""
