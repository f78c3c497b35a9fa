"""Exception hierarchy."""


class NoisyKexError(Exception):
    """Base class for every error raised by this package."""


class GenerationError(NoisyKexError, RuntimeError):
    """A rejection-sampling loop exhausted its retry budget."""


class ReduciblePolynomialError(NoisyKexError, ValueError):
    pass


class OrderUnavailableError(NoisyKexError, ValueError):
    """The polynomial order cannot be computed; pass ``known_order``."""


class NotCoprimeError(NoisyKexError, ValueError):
    pass


class ProtocolAbort(NoisyKexError):
    """A peer message violated the protocol; the session is dead."""


class PhaseError(NoisyKexError):
    """A session transition was attempted out of order."""


class WireFormatError(ProtocolAbort, ValueError):
    """Bytes do not form a valid frame."""
