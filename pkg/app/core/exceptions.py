from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit codes shared by every management command"""
    SUCCESS = 0
    USAGE = 1
    INPUT = 2
    GENERATION = 3
    MISMATCH = 4


class EsiaError(Exception):
    """Base class for every error raised by the toolkit"""
    exit_code = ExitCode.INPUT


class InvalidImage(EsiaError, ValueError):
    """Raster violates the RgbImage or CfaImage invariants"""


class OutOfBounds(EsiaError, IndexError):
    """Pixel coordinate outside the raster"""


class ImageNotFound(EsiaError, FileNotFoundError):
    pass


class UnsupportedFormat(EsiaError, ValueError):
    """Anything other than 8-bit RGB PNG or binary PPM"""


class CorruptFile(EsiaError, ValueError):
    pass


class ImageIoError(EsiaError, OSError):
    pass


class DimensionMismatch(EsiaError, ValueError):
    pass


class InvalidConfig(EsiaError, ValueError):
    exit_code = ExitCode.USAGE


class InvalidPlan(EsiaError, ValueError):
    exit_code = ExitCode.USAGE


class ImageTooSmall(EsiaError, ValueError):
    """The requested severity cannot be placed on the image"""
    exit_code = ExitCode.GENERATION


class OverlappingEvents(EsiaError, ValueError):
    pass


class OutOfRange(EsiaError, ValueError):
    pass


class PacketCountMismatch(EsiaError, ValueError):
    pass


class AttributesParseError(EsiaError, ValueError):
    def __init__(self, message: str, index: int = None) -> None:
        self.index = index
        if index is not None:
            message = f'record {index}: {message}'
        super().__init__(message)


class MissingField(AttributesParseError):
    pass


class GenerationFailure(EsiaError, OSError):
    exit_code = ExitCode.GENERATION


class ZeroBaseline(EsiaError, ValueError):
    pass


class MissingModel(EsiaError, ValueError):
    pass


class MetricsParseError(EsiaError, ValueError):
    def __init__(self, message: str, line: int = None) -> None:
        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


class DuplicateKey(MetricsParseError):
    pass


class InsufficientData(EsiaError, ValueError):
    pass
