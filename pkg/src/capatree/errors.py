"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class DyadicTangentPole(DomainError):
    """The tangent-product orbit of a dyadic rational hits a pole of tan."""


class ConvergenceError(RuntimeError):
    """An iterative solve exhausted its budget without meeting tolerance."""
