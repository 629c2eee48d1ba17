"""Exception hierarchy shared by the library and the command line."""


class RinmfError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(RinmfError, ValueError):
    pass


class DomainError(RinmfError, ValueError):
    pass


class ConfigError(RinmfError, ValueError):
    pass


class DataError(RinmfError, ValueError):
    pass


class DivergenceError(RinmfError, RuntimeError):
    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
