"""Exception taxonomy shared by all augscope modules.

Every failure raised on purpose derives from AugscopeError so callers
(and the CLI) can distinguish domain errors from genuine bugs.
"""


class AugscopeError(Exception):
    """Base class for all errors raised by augscope."""


# --- image decoding / transforms ---

class MissingFile(AugscopeError):
    pass


class UnsupportedFormat(AugscopeError):
    pass


class CorruptImage(AugscopeError):
    pass


class NonPositiveFactor(AugscopeError):
    pass


# --- feature extraction ---

class ZeroDimensionImage(AugscopeError):
    pass


class ModelLoadFailure(AugscopeError):
    pass


class DimensionMismatch(AugscopeError):
    pass


class ZeroVector(AugscopeError):
    pass


# --- feature store ---

class BadMagic(AugscopeError):
    pass


class VersionMismatch(AugscopeError):
    pass


class TruncatedFile(AugscopeError):
    pass


# --- similarity / statistics ---

class EmptyClass(AugscopeError):
    pass


class UnknownId(AugscopeError):
    pass


class TooFewSamples(AugscopeError):
    pass


class BadRange(AugscopeError):
    pass


# --- experiment planning ---

class InsufficientRecords(AugscopeError):
    pass


class PoolExhausted(AugscopeError):
    pass


class LeakageDetected(AugscopeError):
    pass


# --- reporting / io ---

class UnknownComparison(AugscopeError):
    pass


class IoError(AugscopeError):
    """Wraps OSError raised while emitting artifact files."""
