"""Exception hierarchy shared by every module."""


class ParameterError(ValueError):
    """Invalid model or run parameters."""


class DomainError(ValueError):
    """Argument outside the domain where a quantity is defined."""


class ResonanceError(ParameterError):
    """The model does not carry a well-defined in-band resonance.

    The offending classification is kept on ``classification`` so callers
    can report why the closed forms do not apply.
    """

    def __init__(self, message, classification):
        super().__init__(message)
        self.classification = classification


class NumericError(RuntimeError):
    """A numerical routine failed to reach its target accuracy."""
