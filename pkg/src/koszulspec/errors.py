"""Exception hierarchy shared by every module."""


class KoszulSpecError(Exception):
    """Base class for all library errors."""


class SpecError(KoszulSpecError, ValueError):
    """Malformed input: bad counts, out-of-range indices, empty clouds."""


class DimensionError(SpecError):
    """Empty or dimension-mismatched matrices."""


class ShapeError(SpecError):
    """Wrong matrix shape or structure (non-square, non-Hermitian)."""


class DomainError(SpecError):
    """A scalar function was applied outside its admissible domain."""


class SizeError(KoszulSpecError):
    """An assembly or scan would exceed the configured resource guard."""


class HypothesisError(KoszulSpecError):
    """A theorem hypothesis does not hold for the given input."""


class CommutationError(HypothesisError):
    """The tuple does not commute within tolerance."""


class NotApplicableError(KoszulSpecError):
    """The operation is undefined for this input (e.g. n = 1 split check)."""


class IntegrityError(KoszulSpecError):
    """A post-condition check on a computed result failed."""
