""" Exception hierarchy shared by every vsop_rl module """


class VsopError(Exception):
    pass


class DimensionError(VsopError, ValueError):
    pass


class CacheError(VsopError, RuntimeError):
    pass


class NonFiniteGradientError(VsopError, FloatingPointError):
    pass


class InvalidActionError(VsopError, ValueError):
    pass


class EpisodeFinishedError(VsopError, RuntimeError):
    pass


class MissingBootstrapError(VsopError, ValueError):
    pass


class EmptyBufferError(VsopError, ValueError):
    pass


class StaleBufferError(VsopError, RuntimeError):
    pass


class UnsupportedError(VsopError, NotImplementedError):
    pass


class SingularSystemError(VsopError, ValueError):
    pass


class UnsupportedHorizonError(VsopError, ValueError):
    pass


class ConfigError(VsopError, ValueError):
    pass


class PresetError(VsopError, KeyError):
    pass


class AlignmentError(VsopError, ValueError):
    pass


class MdpError(VsopError, ValueError):
    pass


class CheckpointError(VsopError, RuntimeError):
    pass


#-------------------------------------------------------------------------

class SpectralUnderflowWarning(RuntimeWarning):
    """ Raised through warnings.warn when sigma is clamped to its floor """
