"""Exception types raised by the library."""


class DomainError(ValueError):
    """Input outside the domain of an operation (bad masses, ratio out of range, ...)."""


class CollisionError(ArithmeticError):
    """A mutual distance vanished where the Newtonian potential is singular."""


class NonphysicalShapeError(DomainError):
    """Squared distances that violate the triangle inequality (negative squared area)."""


class NotBalancedError(ArithmeticError):
    """A configuration does not admit a relative equilibrium within tolerance."""


class DegenerateAxisError(ArithmeticError):
    """An inertia axis carries no body coordinates, so its frequency is undefined."""


class ZeroMomentumError(ArithmeticError):
    """Angular momentum vanishes and the scaled energy-momentum pair is undefined."""
