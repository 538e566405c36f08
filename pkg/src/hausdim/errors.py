"""Exception hierarchy shared by every module."""


class HausdimError(Exception):
    """Base class for all errors raised by hausdim."""


class InputError(HausdimError, ValueError):
    """An argument lies outside the documented domain."""


class ConfigurationError(HausdimError, ValueError):
    """A problem or mesh configuration is inconsistent."""


class InvarianceError(HausdimError, LookupError):
    """An image point fell outside the mesh (forward invariance violated)."""


class MeshTooCoarseError(HausdimError):
    """An interpolation error correction reached 1; refine the mesh."""


class CertificationError(HausdimError):
    """A bracket endpoint could not be certified."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
