"""Exception types shared across the package."""


class KernelBenchError(Exception):
    """Base class for every error raised by this package."""


class SizeError(KernelBenchError):
    """A byte buffer, file body, or dimension does not match what was declared."""


class FormatError(KernelBenchError):
    """An image's channel layout does not match the requested operation."""


class UnsupportedFormat(KernelBenchError):
    """An image file uses a format this package does not read."""


class RangeError(KernelBenchError):
    """A numeric argument falls outside its documented range."""


class EndOfStream(KernelBenchError):
    """A frame source has no frame at the requested index."""


class UnsupportedKernel(KernelBenchError):
    """A kernel cannot be lowered to the shader target."""


class EmptyChain(KernelBenchError):
    """A chain spec contains no passes."""
