"""
Exception hierarchy for thyroidiomics

Every error kind carries a short prefix so the CLI can report failures with a
distinct, greppable message (``<prefix>: <detail>``).
"""


class ThyroidiomicsError(Exception):
    """Base class for all errors raised by the toolkit"""

    prefix = "error"

    def __str__(self) -> str:
        detail = super().__str__()
        return f"{self.prefix}: {detail}" if detail else self.prefix

    @property
    def detail(self) -> str:
        return super().__str__()


class InvalidRangeError(ThyroidiomicsError):
    """Raised when a bound pair or a target size/spacing is not usable"""

    prefix = "invalid range"


class DegenerateRangeError(ThyroidiomicsError):
    """Raised when an image has no spread to normalize by"""

    prefix = "degenerate range"


class EmptyRoiError(ThyroidiomicsError):
    prefix = "empty ROI"


class GeometryMismatchError(ThyroidiomicsError):
    prefix = "geometry mismatch"


class SamplingError(ThyroidiomicsError):
    prefix = "sampling error"


class DegenerateMatrixError(ThyroidiomicsError):
    """Raised when a texture matrix cannot be built from the ROI"""

    prefix = "degenerate matrix"


class UndefinedStatisticError(ThyroidiomicsError):
    """Raised when a statistic is mathematically undefined for the input"""

    prefix = "undefined statistic"


class ExtractionError(ThyroidiomicsError):
    """Raised when a case cannot be turned into a feature vector"""

    prefix = "extraction failed"

    def __init__(self, case_id: str, reason: str):
        super().__init__(f"{case_id}: {reason}")
        self.case_id = case_id
        self.reason = reason

    def __reduce__(self):  # type: ignore[no-untyped-def]
        return (type(self), (self.case_id, self.reason))


class DegenerateTrainingError(ThyroidiomicsError):
    prefix = "degenerate training"


class FoldError(ThyroidiomicsError):
    prefix = "fold error"


class InvalidArgumentError(ThyroidiomicsError):
    prefix = "invalid argument"


class SchemaError(ThyroidiomicsError):
    """Raised when a file does not follow its declared format"""

    prefix = "schema error"


class MissingFileError(ThyroidiomicsError):
    prefix = "missing file"


class ContractError(ThyroidiomicsError):
    """Raised when a caller-supplied function breaks its contract"""

    prefix = "contract error"
