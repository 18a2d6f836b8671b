"""Exception types raised across wolffkit."""


class WolffkitError(Exception):
    """Base class for all library errors."""


class InvalidParameters(WolffkitError, ValueError):
    pass


class DegenerateProduct(WolffkitError, ValueError):
    """pq equals (gamma-1)^2 (or lies below it) where a strict inequality is needed."""


class NonpositiveDenominator(WolffkitError, ValueError):
    pass


class NonIntegrableAtOrigin(WolffkitError, ValueError):
    pass


class DivergentTail(WolffkitError, ValueError):
    pass


class QuadratureFailure(WolffkitError, RuntimeError):
    def __init__(self, message, rho=None, t=None, owners=None):
        super().__init__(message)
        self.rho = rho
        self.t = t
        self.owners = owners


class IllConditioned(WolffkitError, ValueError):
    pass


class ModeUnavailable(WolffkitError, ValueError):
    pass


class NotAdmissible(WolffkitError, ValueError):
    pass
