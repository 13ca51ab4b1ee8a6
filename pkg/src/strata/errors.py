"""Exception types raised across the package.

Every error carries a short stable ``code`` used by the command line front
end to produce machine-readable failures.
"""


class StrataError(ValueError):
    code = "error"


class SumMismatch(StrataError):
    code = "sum-mismatch"


class SimplePolePresent(StrataError):
    code = "simple-pole-present"


class DegreeTooSmall(StrataError):
    code = "degree-too-small"


class NonIntegralGenus(StrataError):
    code = "non-integral-genus"


class NegativeGenus(StrataError):
    code = "negative-genus"


class InvalidProfile(StrataError):
    code = "invalid-profile"


class SignatureShapeError(StrataError):
    code = "signature-shape"


class EmptyStratum(StrataError):
    code = "empty-stratum"


class DimensionMismatch(StrataError):
    code = "dimension-mismatch"


class SumNonzero(StrataError):
    code = "sum-nonzero"


class InvalidBoundaryIndex(StrataError):
    code = "invalid-boundary-index"


class ShapeError(StrataError):
    code = "chart-shape"


class DisconnectedSurface(StrataError):
    code = "disconnected-surface"


class PoleIndexOutOfRange(StrataError):
    code = "pole-index"


class NotFullOrder(StrataError):
    code = "not-full-order"


class NotATree(StrataError):
    code = "not-a-tree"


class InconsistentSplit(StrataError):
    code = "inconsistent-split"


class ProductNotIdentity(StrataError):
    code = "product-not-identity"


class NotTransitive(StrataError):
    code = "not-transitive"


class IndexOutOfRange(StrataError):
    code = "index-out-of-range"


class InstanceTooLarge(StrataError):
    code = "instance-too-large"


class RecursionFailure(StrataError):
    code = "recursion-failure"

    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = tuple(path)
