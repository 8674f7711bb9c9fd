"""Sobel gradient magnitude, Frei-Chen projection measure, and binarization."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import FormatError, RangeError
from .image import ImageBuffer
from .kernels import (
    FREI_CHEN,
    SOBEL_GX,
    SOBEL_GY,
    BorderPolicy,
    _correlate_samples,
    _split_taps,
    _stencil_strip,
    _strip_rows,
    pad_samples,
)

# Below this squared-response total a pixel is considered flat and the
# Frei-Chen measure is defined as 0 instead of dividing by (near) zero.
FREI_CHEN_EPSILON = 1e-12


class FreiChenSubset(Enum):
    """Which masks contribute to the Frei-Chen numerator."""

    EDGE = "edge"
    LINE = "line"
    EDGE_AND_LINE = "both"

    @property
    def mask_indices(self) -> range:
        """Zero-based indices into the nine-mask basis."""
        if self is FreiChenSubset.EDGE:
            return range(0, 4)
        if self is FreiChenSubset.LINE:
            return range(4, 8)
        return range(0, 8)


def _sobel_samples(arr: np.ndarray, border: BorderPolicy) -> np.ndarray:
    """Per-channel Sobel magnitude reduced with max over channels.

    The two correlations, the magnitude, and the channel reduction run strip
    by strip so intermediates stay cache-resident at any frame size; the
    result is bit-identical to doing each step on the full frame.
    """
    h, w = arr.shape[0], arr.shape[1]
    padded = pad_samples(arr, 1, border)
    pos_x, neg_x = _split_taps(SOBEL_GX.coefficients)
    pos_y, neg_y = _split_taps(SOBEL_GY.coefficients)
    out = np.empty((h, w))
    strip = _strip_rows(arr)
    n0 = min(strip, h)
    gx = np.empty((n0,) + arr.shape[1:])
    gy = np.empty_like(gx)
    scratch = np.empty_like(gx)
    acc = np.empty_like(gx)
    for y0 in range(0, h, strip):
        y1 = min(y0 + strip, h)
        n = y1 - y0
        _stencil_strip(padded, pos_x, neg_x, y0, y1, w, gx[:n], scratch[:n], acc[:n])
        _stencil_strip(padded, pos_y, neg_y, y0, y1, w, gy[:n], scratch[:n], acc[:n])
        np.hypot(gx[:n], gy[:n], out=gx[:n])
        np.max(gx[:n], axis=2, out=out[y0:y1])
    return out


def sobel_magnitude(
    image: ImageBuffer, border: BorderPolicy = BorderPolicy.CLAMP_TO_EDGE
) -> ImageBuffer:
    """Gradient magnitude sqrt(gx^2 + gy^2) of a gray image; unclamped.

    A constant image yields exactly zero everywhere: both Sobel masks carry
    the same positive and negative coefficient magnitudes, and the engine
    accumulates the two signs separately before subtracting.

    Raises:
        FormatError: if the image is not single-channel.
    """
    if image.channels != 1:
        raise FormatError("sobel_magnitude requires a gray image; see sobel_magnitude_rgb")
    out = _sobel_samples(image.samples, border)
    return ImageBuffer._from_array(out.reshape(out.shape + (1,)))


def sobel_magnitude_rgb(
    image: ImageBuffer, border: BorderPolicy = BorderPolicy.CLAMP_TO_EDGE
) -> ImageBuffer:
    """Per-channel Sobel magnitude combined as max(m_R, m_G, m_B).

    Raises:
        FormatError: if the image is not RGB.
    """
    if image.channels != 3:
        raise FormatError("sobel_magnitude_rgb requires an RGB image")
    out = _sobel_samples(image.samples, border)
    return ImageBuffer._from_array(out.reshape(out.shape + (1,)))


def frei_chen(
    image: ImageBuffer,
    subset: FreiChenSubset,
    border: BorderPolicy = BorderPolicy.CLAMP_TO_EDGE,
) -> ImageBuffer:
    """Frei-Chen edge measure sqrt(M / S) in [0, 1].

    M sums the squared responses of the chosen subset, S those of all nine
    basis masks. Pixels with S below FREI_CHEN_EPSILON report 0. Because the
    subset terms are accumulated in the same order in M and S, M never
    exceeds S even in float arithmetic, so the output stays within [0, 1].

    Raises:
        FormatError: if the image is not single-channel.
    """
    if image.channels != 1:
        raise FormatError("frei_chen requires a gray image; convert with to_luminance")
    arr = image.samples
    padded = pad_samples(arr, 1, border)
    numerator = np.zeros(arr.shape)
    total = np.zeros(arr.shape)
    response = np.empty_like(arr)
    chosen = set(subset.mask_indices)
    for index, mask in enumerate(FREI_CHEN):
        _correlate_samples(padded, mask.coefficients, response)
        np.multiply(response, response, out=response)
        total += response
        if index in chosen:
            numerator += response
    flat = total < FREI_CHEN_EPSILON
    np.divide(numerator, total, out=numerator, where=~flat)
    numerator[flat] = 0.0
    return ImageBuffer._from_array(np.sqrt(numerator))


def threshold(image: ImageBuffer, t: float) -> ImageBuffer:
    """Binarize a gray image: 1.0 where the sample is strictly above t.

    Idempotent for any t in (0, 1): re-thresholding the {0, 1} output at the
    same or a mid value changes nothing.

    Raises:
        RangeError: if t is outside [0, 1].
        FormatError: if the image is not single-channel.
    """
    if image.channels != 1:
        raise FormatError("threshold requires a gray image")
    if not 0.0 <= t <= 1.0:
        raise RangeError(f"threshold must be within [0, 1], got {t}")
    return ImageBuffer._from_array(np.where(image.samples > t, 1.0, 0.0))
