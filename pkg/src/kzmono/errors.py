"""Exception hierarchy.

Three families matter to callers (and fix the CLI exit codes):
input validation (bad weights, coincident points, size caps), internal
construction identities failing (a bug, never user error), and oracle
mismatches (block subspace dimension disagreeing with the fusion rules).
"""


class KzmonoError(Exception):
    """Base class for all package errors."""


class ValidationError(KzmonoError):
    """Invalid user input; CLI exit code 2."""


class InvalidAlgebraError(ValidationError):
    """(series, rank) is not a simple type we construct."""


class NonDominantWeightError(ValidationError):
    pass


class InadmissibleWeightError(ValidationError):
    pass


class CoincidentPointsError(ValidationError):
    """Marked points must stay pairwise distinct."""


class DimensionCapError(ValidationError):
    """Tensor product dimension exceeds the configured cap."""


class ConstructionError(KzmonoError):
    """An exact identity that must hold by construction failed; CLI exit 1."""


class FusionValidationError(ConstructionError):
    """Fusion table failed symmetry/unit/associativity verification."""


class NoIntertwinerError(ConstructionError):
    """No equivariant isomorphism found where one must exist."""


class OracleMismatchError(KzmonoError):
    """Dual-route check disagreed (e.g. block dim vs fusion dim); CLI exit 3."""


class TransportError(KzmonoError):
    """Numerical transport failed or exceeded tolerances; CLI exit 1."""


class PathSingularError(TransportError):
    """Path came too close to a diagonal z_i = z_j; carries the offending t."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
