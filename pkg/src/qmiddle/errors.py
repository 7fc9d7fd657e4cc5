"""Error taxonomy shared across the package.

UsageError covers everything a caller can fix by changing inputs; the
others signal math-level trouble: a failed search, a violated invariant
that should have been impossible, or a certificate that cannot even be
parsed.  The CLI maps these onto distinct exit codes.
"""


class UsageError(ValueError):
    """Bad caller input: q not a prime power, ell out of range, etc."""


class FieldSizeError(UsageError):
    """Requested table exceeds the configured element bound."""


class NonPrimitiveError(UsageError):
    """Supplied modulus rejected: the generator's order came up short."""


class DegenerateSpanError(UsageError):
    """Span inputs collapse (duplicate points handed to a span op)."""


class InvariantViolation(RuntimeError):
    """A structural fact the construction relies on failed to hold."""


class ConstructionError(RuntimeError):
    """Path search or flip schedule could not be completed."""


class CertificateFormatError(ValueError):
    """Certificate JSON is malformed or misses required structure."""
