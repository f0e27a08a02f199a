"""Exception types shared across the package.

Everything raised on purpose derives from :class:`TireSenseError`, so the
command line can map validation failures to a single exit code while real
I/O problems (`OSError`) keep their own.
"""


class TireSenseError(Exception):
    """Base class for all validation and processing errors."""


class ScenarioError(TireSenseError):
    """A scenario or sensor field violates its physical constraints."""


class GeometryError(TireSenseError):
    """Degenerate contact geometry (deflection not smaller than the radius)."""


class ResolutionError(TireSenseError):
    """Sample rate too low to resolve the contact patch."""


class NoPeakError(TireSenseError):
    """Autocorrelation has no usable peak inside the allowed lag window."""


class TooShortError(TireSenseError):
    """Trace does not contain enough complete wheel turns."""


class InvalidCutoffError(TireSenseError):
    """High-pass cutoff outside (0, Nyquist)."""


class EdgeOrderError(TireSenseError):
    """Patch edge extrema are missing, out of order, or implausibly far apart."""


class RankDeficiencyError(TireSenseError):
    """Least-squares design matrix is singular within tolerance."""


class DenominatorError(TireSenseError):
    """Load measurement denominator too close to zero to invert."""


class SchemaError(TireSenseError):
    """File does not match the schema or version this tool writes."""
