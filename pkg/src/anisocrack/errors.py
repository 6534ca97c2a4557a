"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`CrackError`.
The CLI maps the three families below onto its exit codes.
"""


class CrackError(Exception):
    """Base class for all library errors."""


class PhysicsError(CrackError, ValueError):
    """Input data that is well formed but physically inadmissible."""


class InvalidMaterial(PhysicsError):
    pass


class SingularInput(PhysicsError):
    pass


class InadmissibleMaterial(PhysicsError):
    """Elastic constants that fail the ellipticity / positivity requirements."""


class DegenerateRoots(PhysicsError):
    """Repeated plane characteristic roots; the eigenvector path is unusable."""


class InadmissibleParameters(PhysicsError):
    """Bimaterial parameter set outside its admissible range."""


class DegenerateOperator(PhysicsError):
    """Operator matrices evaluated at the alpha^2 + beta^2 = 1 pole."""


class InvalidGeometry(PhysicsError):
    pass


class InadmissibleLoad(PhysicsError):
    pass


class UnsupportedEvaluation(CrackError, ValueError):
    """Evaluation at a point where the operator is not defined (tip, pole)."""


class UnreliableExtraction(CrackError):
    """Stress intensity factor fit failed its residual checks."""


class OutOfScope(CrackError):
    """Requested analysis is not covered (oscillatory inversion, smooth plane skew loads)."""


class ConfigError(CrackError):
    pass
