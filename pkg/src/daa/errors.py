"""Exception types shared across the package."""


class DaaError(Exception):
    """Base class for errors raised by this package."""


class ShortFileError(DaaError, ValueError):
    """Input has too few bytes for the requested analysis grid."""


class GridError(DaaError, ValueError):
    """Curve grids are incompatible or a requested point is off-grid."""


class ReferenceFormatError(DaaError, ValueError):
    """A reference curve file is malformed."""


class ReferenceVersionError(ReferenceFormatError):
    """A reference curve file declares an unsupported format version."""


class ManifestError(DaaError, ValueError):
    """A corpus manifest cannot be parsed."""


class ProfileError(DaaError, ValueError):
    """A type profile lacks a grid point needed by the caller."""
