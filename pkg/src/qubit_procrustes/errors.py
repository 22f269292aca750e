"""Exception hierarchy.

Every error raised by the library derives from :class:`QubitProcrustesError`
and from :class:`ValueError`, so callers can catch either.
"""


class QubitProcrustesError(ValueError):
    pass


class InvalidInputError(QubitProcrustesError):
    """Malformed numeric input (non-finite entries, non-rotations, ...)."""


class InvalidStateError(QubitProcrustesError):
    """A Bloch vector or density matrix that is not a valid qubit state."""


class InvalidPurificationError(QubitProcrustesError):
    """Fano data violating the two-qubit purity constraints."""


class InvalidParameterError(QubitProcrustesError):
    """Channel parameter outside its admissible range."""


class InvalidKrausError(QubitProcrustesError):
    """Kraus set violating the completeness relation."""


class ChannelValidityError(QubitProcrustesError):
    """Affine map pushed a state outside the Bloch ball."""


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree beyond tolerance."""
