"""Exception types shared across the package."""


class ShapeflowError(ValueError):
    """Base class for all shapeflow errors."""


class InvalidGridError(ShapeflowError):
    """Periodic grid is odd, too small, or otherwise unusable."""


class DegenerateImmersionError(ShapeflowError):
    """A curve has (numerically) zero speed at some node."""


class ParameterError(ShapeflowError):
    """A numeric parameter is outside its admissible range."""


class NonNormalFieldError(ShapeflowError):
    """An operation requiring pointwise-normal fields received a non-normal one."""


class DegeneratePlaneError(ShapeflowError):
    """The two fields span a (numerically) degenerate plane."""


class NonHorizontalPathError(ShapeflowError):
    """A construction requiring a horizontal base path received a non-horizontal one."""


class InvalidWaveError(ShapeflowError):
    """Compression-wave parameters do not yield a diffeomorphism."""


class InvalidDisplacementError(ShapeflowError):
    """The target displacement cannot be realized by a forward compression wave."""


class DomainError(ShapeflowError):
    """Data escapes the computational window."""
