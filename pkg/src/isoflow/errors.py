"""Exception hierarchy shared by all isoflow modules."""


class IsoflowError(Exception):
    """Base class for all library errors."""


class NotHessenberg(IsoflowError):
    """Value sequence violates h(i) >= i, monotonicity, or range."""


class ResourceLimit(IsoflowError):
    """Requested computation exceeds the configured size bound."""


class NotHermitian(IsoflowError):
    pass


class ShapeMismatch(IsoflowError):
    pass


class NonzeroDiagonal(IsoflowError):
    """J-inverse applied to a matrix with nonzero diagonal."""


class NoConvergence(IsoflowError):
    """Iterative solver hit its iteration cap."""


class DegenerateSpectrum(IsoflowError):
    """Eigenvalue gap below the simplicity tolerance."""


class SingularInput(IsoflowError):
    pass


class StepUnderflow(IsoflowError):
    """Adaptive step size collapsed below the floor."""


class DriftExceeded(IsoflowError):
    """Spectrum conservation broke tolerance during integration."""


class NotConverged(IsoflowError):
    """Trajectory did not reach a diagonal matrix within the horizon."""


class Decomposable(IsoflowError):
    """Operation requires an indecomposable Hessenberg function."""


class NotUnitary(IsoflowError):
    pass


class NotInZh(IsoflowError):
    """Frame fails the staircase-conjugation membership test."""


class SourceConstraintViolation(IsoflowError):
    """Equivariant class does not satisfy its source-mode congruences."""
