class SparseLayersError(Exception):
    """Base class for every error raised by the library"""


class DimensionError(SparseLayersError, ValueError):
    """Vector length or grid shape does not match what an operator expects"""


class ParameterError(SparseLayersError, ValueError):
    """A numeric parameter is outside its valid range"""


class DegenerateInputError(ParameterError):
    """Input for which the requested construction is undefined (e.g. all zeros)"""


class EmptyMaskError(ParameterError):
    """Mask has no known pixel"""


class SingularOperatorError(SparseLayersError):
    """Gram matrix could not be factorized (dictionary is rank deficient)"""


class ImageFormatError(SparseLayersError):
    """Base class for image and coefficient file problems"""


class ImageParseError(ImageFormatError):
    def __init__(self, offset: int, message: str):
        self.offset = offset
        self.detail = message
        super().__init__(f"{message} (at byte offset {offset})")


class UnsupportedFormatError(ImageFormatError):
    pass


class MaskValidationError(ImageFormatError):
    pass
