"""Exception and warning types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument is outside the supported range."""


class InterfaceCrossingError(ValueError):
    """Interface polylines intersect each other or the strip boundary."""


class PeriodicMismatchError(ValueError):
    """Left/right boundary faces cannot be matched into periodic pairs."""


class WoodAnomalyError(ArithmeticError):
    """A Rayleigh mode is degenerate: alpha_n^2 == k^2 * eps_plus."""


class FaceNotOnTopError(ValueError):
    """The face does not lie on the upper boundary x2 = H."""


class SingularMatrixError(ArithmeticError):
    """Direct factorization detected an exactly singular system."""


class PointOutsideDomainError(ValueError):
    """Evaluation point is outside the meshed domain."""


class DegenerateBranchError(ArithmeticError):
    """eps2 == cos(theta)^2: the transmitted-wave branch is degenerate."""


class OutOfEnvelopeError(ValueError):
    """Argument outside the supported (order, argument) envelope."""


class SingularOriginError(ValueError):
    """Circular-wave gradient requested at the origin for order < 1."""


class ConditioningWarning(UserWarning):
    """Solve residual above tolerance, likely due to ill-conditioning."""


class MixedTopPermittivityWarning(UserWarning):
    """Elements along the upper boundary carry different permittivities."""


class TruncationWarning(UserWarning):
    """Some propagating Rayleigh modes fall outside the truncation range."""
