"""Error types shared across backend clients and the service layer."""


class BackendUnavailableError(RuntimeError):
    """A remote backend could not be reached or timed out."""


class ProtocolError(RuntimeError):
    """A remote backend answered with a malformed or unexpected payload."""
