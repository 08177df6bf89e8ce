"""Exception hierarchy shared by all construction and verification modules."""


class DeepReluError(Exception):
    """Base class for every error raised by this package."""


class ConstructionError(DeepReluError, ValueError):
    """A network could not be built from the given arguments."""


class InputError(DeepReluError, ValueError):
    """An evaluation input has the wrong shape or dimension."""


class ParameterError(DeepReluError, ValueError):
    """A numerical parameter is outside its admissible range."""


class DomainError(DeepReluError, ValueError):
    """A point lies outside the domain of an operation."""


class DataError(DeepReluError, ValueError):
    """Sampled or supplied data is unusable (non-finite, all zero, ...)."""


class FeasibilityError(DeepReluError, ValueError):
    """The requested computation is too large to run at desk scale."""


class EnvelopeError(DeepReluError, RuntimeError):
    """Rejection sampling failed against its envelope."""
