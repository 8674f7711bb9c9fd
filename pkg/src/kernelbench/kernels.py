"""Kernel values, preset masks, the correlation engine, and kernel composition.

The engine computes correlation, not flipped convolution: the kernel is laid
over each pixel's neighborhood as printed, top-left coefficient over the
upper-left neighbor. Out-of-bounds reads are resolved by a border policy;
the default replicates edge pixels the way GPU clamp-to-edge samplers do.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .image import ImageBuffer


class BorderPolicy(Enum):
    """How samples outside the image are produced."""

    CLAMP_TO_EDGE = "clamp"
    ZERO_PAD = "zero"

    @property
    def pad_mode(self) -> str:
        """The numpy.pad mode implementing this policy."""
        return "edge" if self is BorderPolicy.CLAMP_TO_EDGE else "constant"


class Kernel:
    """Odd-sided square coefficient matrix, row-major."""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients) -> None:
        arr = np.array(coefficients, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"kernel must be square, got shape {arr.shape}")
        if arr.shape[0] % 2 == 0:
            raise ValueError(f"kernel side must be odd, got {arr.shape[0]}")
        arr.setflags(write=False)
        self._coefficients = arr

    @property
    def coefficients(self) -> np.ndarray:
        """Read-only (side, side) float64 array."""
        return self._coefficients

    @property
    def side(self) -> int:
        return self._coefficients.shape[0]

    def __repr__(self) -> str:
        return f"Kernel(side={self.side})"


def parse_kernel(text: str) -> Kernel:
    """Parse the CLI kernel format: side first, then side*side row-major floats.

    Example: "3 0 1 0 0 0 1 0 0 0".
    """
    parts = text.split()
    if not parts:
        raise ValueError("empty kernel spec")
    try:
        side = int(parts[0])
    except ValueError:
        raise ValueError(f"kernel spec must start with the side length, got {parts[0]!r}")
    if side < 1 or side % 2 == 0:
        raise ValueError(f"kernel side must be a positive odd integer, got {side}")
    try:
        values = [float(p) for p in parts[1:]]
    except ValueError as exc:
        raise ValueError(f"bad kernel coefficient in {text!r}") from exc
    if len(values) != side * side:
        raise ValueError(f"expected {side * side} coefficients, got {len(values)}")
    return Kernel(np.array(values).reshape(side, side))


# Sobel masks, exactly as conventionally printed. Note the axis convention:
# the mask named GX here responds to vertical variation (it differentiates
# along y); the names follow the customary printed labels rather than the
# response axis.
SOBEL_GX = Kernel([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]])
SOBEL_GY = Kernel([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])

_S2 = math.sqrt(2.0)

# The nine Frei-Chen masks: an orthonormal basis of 3x3 patch space.
# G1..G4 span the edge subspace, G5..G8 the line subspace, G9 smooths.
FREI_CHEN = (
    Kernel(np.array([[1.0, _S2, 1.0], [0.0, 0.0, 0.0], [-1.0, -_S2, -1.0]]) / (2.0 * _S2)),
    Kernel(np.array([[1.0, 0.0, -1.0], [_S2, 0.0, -_S2], [1.0, 0.0, -1.0]]) / (2.0 * _S2)),
    Kernel(np.array([[0.0, -1.0, _S2], [1.0, 0.0, -1.0], [-_S2, 1.0, 0.0]]) / (2.0 * _S2)),
    Kernel(np.array([[_S2, -1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, 1.0, -_S2]]) / (2.0 * _S2)),
    Kernel(np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, -1.0], [0.0, 1.0, 0.0]]) / 2.0),
    Kernel(np.array([[-1.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, -1.0]]) / 2.0),
    Kernel(np.array([[1.0, -2.0, 1.0], [-2.0, 4.0, -2.0], [1.0, -2.0, 1.0]]) / 6.0),
    Kernel(np.array([[-2.0, 1.0, -2.0], [1.0, 4.0, 1.0], [-2.0, 1.0, -2.0]]) / 6.0),
    Kernel(np.ones((3, 3)) / 3.0),
)


# Output is produced in strips of roughly this many bytes so the working set
# stays cache-resident at any resolution; per-pixel cost then scales linearly
# with pixel count instead of degrading once frames outgrow the cache.
_STRIP_BYTES = 1 << 20


def _strip_rows(arr: np.ndarray) -> int:
    return max(1, _STRIP_BYTES // max(arr.strides[0], 1))


def _split_taps(coefficients: np.ndarray):
    """Split nonzero taps into positive and negative groups.

    Each group is sorted by descending magnitude (stable, so row-major order
    breaks ties) and the negative group stores the magnitudes. Accumulating
    the groups separately and subtracting at the end makes zero-sum kernels
    cancel exactly on constant input: both groups then sum the same
    multiset of products in the same order.
    """
    side = coefficients.shape[0]
    taps = [
        (dy, dx, float(coefficients[dy, dx]))
        for dy in range(side)
        for dx in range(side)
        if coefficients[dy, dx] != 0.0
    ]
    taps.sort(key=lambda t: -abs(t[2]))
    pos = [(dy, dx, w) for dy, dx, w in taps if w > 0.0]
    neg = [(dy, dx, -w) for dy, dx, w in taps if w < 0.0]
    return pos, neg


def _accumulate(padded, taps, y0, y1, w, dest, scratch):
    """dest = sum of weight * shifted-view over taps, for one row strip."""
    dy, dx, weight = taps[0]
    np.multiply(padded[y0 + dy : y1 + dy, dx : dx + w], weight, out=dest)
    for dy, dx, weight in taps[1:]:
        np.multiply(padded[y0 + dy : y1 + dy, dx : dx + w], weight, out=scratch)
        dest += scratch


def _stencil_strip(padded, pos, neg, y0, y1, w, out, scratch, acc):
    """Correlate one output row strip [y0, y1) into out."""
    if pos and neg:
        _accumulate(padded, pos, y0, y1, w, out, scratch)
        _accumulate(padded, neg, y0, y1, w, acc, scratch)
        out -= acc
    elif pos:
        _accumulate(padded, pos, y0, y1, w, out, scratch)
    elif neg:
        _accumulate(padded, neg, y0, y1, w, out, scratch)
        np.negative(out, out=out)
    else:
        out[:] = 0.0


def _correlate_samples(padded: np.ndarray, coefficients: np.ndarray, out: np.ndarray) -> None:
    """Correlate a pre-padded sample array into out, strip by strip."""
    pos, neg = _split_taps(coefficients)
    h, w = out.shape[0], out.shape[1]
    strip = _strip_rows(out)
    scratch = np.empty((min(strip, h),) + out.shape[1:])
    acc = np.empty_like(scratch)
    for y0 in range(0, h, strip):
        y1 = min(y0 + strip, h)
        n = y1 - y0
        _stencil_strip(padded, pos, neg, y0, y1, w, out[y0:y1], scratch[:n], acc[:n])


def pad_samples(arr: np.ndarray, radius: int, border: BorderPolicy) -> np.ndarray:
    """Pad a (h, w, c) sample array by radius rows/columns per the policy."""
    return np.pad(arr, ((radius, radius), (radius, radius), (0, 0)), mode=border.pad_mode)


def correlate(
    image: ImageBuffer,
    kernel: Kernel,
    border: BorderPolicy = BorderPolicy.CLAMP_TO_EDGE,
    normalize: bool = False,
) -> ImageBuffer:
    """Correlate an image with a kernel, per channel.

    Every output pixel is the sum of kernel coefficients times the samples
    under them, with the kernel centered on the pixel and laid out as
    printed (no flip). Output dimensions equal input dimensions.

    Args:
        image: input buffer, 1 or 3 channels.
        kernel: odd-sided coefficient matrix.
        border: how out-of-bounds neighbors are read.
        normalize: divide the result by the coefficient sum W, with W
            substituted by 1 when W <= 0 so zero-sum edge kernels pass
            through the same code path unscaled.
    """
    arr = image.samples
    padded = pad_samples(arr, kernel.side // 2, border)
    out = np.empty_like(arr)
    _correlate_samples(padded, kernel.coefficients, out)
    if normalize:
        weight = float(kernel.coefficients.sum())
        if weight <= 0.0:
            weight = 1.0
        out /= weight
    return ImageBuffer._from_array(out)


def compose(k1: Kernel, k2: Kernel) -> Kernel:
    """Return the single kernel equivalent to correlating with k1 then k2.

    Away from borders, correlate(correlate(I, k1), k2) equals
    correlate(I, compose(k1, k2)). The result has side s1 + s2 - 1 and is
    computed by direct double summation over coefficient pairs, which keeps
    this function usable as an oracle for the engine.
    """
    a = k1.coefficients
    b = k2.coefficients
    s1, s2 = k1.side, k2.side
    out = np.zeros((s1 + s2 - 1, s1 + s2 - 1))
    for i1 in range(s1):
        for j1 in range(s1):
            for i2 in range(s2):
                for j2 in range(s2):
                    out[i1 + i2, j1 + j2] += a[i1, j1] * b[i2, j2]
    return Kernel(out)
