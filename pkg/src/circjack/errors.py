class DomainError(ValueError):
    """Input outside the domain of an operation; ``param`` names the culprit."""

    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param


class UnsupportedModeError(DomainError):
    pass


class ConsistencyError(RuntimeError):
    pass
