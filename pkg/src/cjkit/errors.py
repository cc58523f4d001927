"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`CJKitError`
(itself a ``ValueError``), so callers can catch a single type.  The CLI maps
:class:`ParseError` to exit code 2 and every other :class:`CJKitError` to 3.
"""


class CJKitError(ValueError):
    code = "error"


class ParseError(CJKitError):
    code = "parse"


class DimensionMismatch(CJKitError):
    code = "dimension-mismatch"


class NonHermitianInput(CJKitError):
    code = "non-hermitian-input"


class SingularInput(CJKitError):
    code = "singular-input"


class NotPSD(CJKitError):
    code = "non-psd"


class NotFaithful(CJKitError):
    code = "not-faithful"


class MarginViolation(CJKitError):
    code = "margin-violation"


class RefMismatch(CJKitError):
    code = "ref-mismatch"


class NonUnitalInput(CJKitError):
    code = "non-unital-input"


class NonInvariantReference(CJKitError):
    code = "non-invariant-reference"


class NotCovariant(CJKitError):
    code = "not-covariant"


class NonDiagonalReference(CJKitError):
    code = "nondiagonal-reference"


class NormalizationViolation(CJKitError):
    code = "normalization-violation"


class TruncationViolation(CJKitError):
    code = "truncation-violation"


class InvalidRepresentation(CJKitError):
    code = "invalid-representation"


class InvalidJ(InvalidRepresentation):
    code = "invalid-j"
