"""Exception and warning types shared across the package."""


class DcdfmError(Exception):
    """Base class for all library errors."""


class InvalidParams(DcdfmError):
    """Model parameters violate one or more invariants.

    ``violations`` holds one exception instance per violated invariant
    (not raised individually), so callers can report all problems at once.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "invalid model parameters: "
            + "; ".join(f"{type(v).__name__}: {v}" for v in self.violations)
        )


class EmptyCommunity(DcdfmError):
    """A community index in [1..K] has no member nodes."""


class AsymmetricP(DcdfmError):
    """Connectivity matrix is not symmetric."""


class RankDeficientP(DcdfmError):
    """Connectivity matrix is numerically rank deficient."""


class UnnormalizedP(DcdfmError):
    """Largest absolute entry of the connectivity matrix is not 1."""


class NonpositiveTheta(DcdfmError):
    """A node weight is zero, negative, or non-finite."""


class DimensionMismatch(DcdfmError):
    """Sizes of parameter pieces are mutually inconsistent."""


class DistributionDomainViolation(DcdfmError):
    """A mean value lies outside the sampling distribution's domain."""

    def __init__(self, message, i=None, j=None, value=None):
        super().__init__(message)
        self.i = i
        self.j = j
        self.value = value


class KOutOfRange(DcdfmError):
    """Requested number of eigenpairs/communities is outside [1, n]."""


class ConvergenceFailure(DcdfmError):
    """The eigensolver did not converge."""


class TooFewPoints(DcdfmError):
    """k-means received fewer points than clusters."""


class KTooLargeForExhaustive(DcdfmError):
    """Exhaustive permutation search refused for K > 8."""


class ParseError(DcdfmError):
    """Malformed input file; carries 1-based line/column when known."""

    def __init__(self, message, line=None, column=None):
        loc = "" if line is None else f" (line {line}, column {column})"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class DanglingEdge(ParseError):
    """An edge references a node id that was never declared."""


class NonContiguousLabels(DcdfmError):
    """A label file does not use every value in {1..K} exactly."""


class MissingGroundTruth(DcdfmError):
    """The operation needs a dataset with ground-truth labels."""


class DegenerateEmbeddingWarning(UserWarning):
    """Some embedding rows had ~zero norm and were replaced by a constant row.

    ``rows`` lists the affected row indices.
    """

    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = tuple(rows)
