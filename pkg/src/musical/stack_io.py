"""Calibrated image stacks and TIFF/PNG input-output.

Stacks are time series of grayscale frames with the acquisition
calibration (pixel pitch, emission wavelength, numerical aperture)
attached. Multi-page TIFF is the on-disk format; 8/16-bit integer pages
round-trip exactly and 32-bit float pages round-trip to the bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageSequence

_GRAY_MODES = {"L", "I", "I;16", "F"}


@dataclass(frozen=True)
class ImageStack:
    """A fluctuation movie: frames (T, H, W) plus calibration.

    frames        nonnegative float64 array, T >= 2
    pixel_size    detector pixel pitch in the sample plane, nm
    wavelength    emission wavelength, nm
    numerical_aperture
    exposure      per-frame exposure in ms, optional
    """

    frames: np.ndarray
    pixel_size: float
    wavelength: float
    numerical_aperture: float
    exposure: float | None = None

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim != 3:
            raise ValueError(f"frames must be (T, H, W), got shape {frames.shape}")
        if frames.shape[0] < 2:
            raise ValueError("a stack needs at least 2 frames")
        if not np.all(np.isfinite(frames)):
            raise ValueError("frames contain non-finite values")
        if frames.min() < 0:
            raise ValueError("pixel values must be nonnegative")
        for name in ("pixel_size", "wavelength", "numerical_aperture"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.exposure is not None and not self.exposure > 0:
            raise ValueError("exposure must be positive when given")
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]


@dataclass(frozen=True)
class StackSummary:
    mean_image: np.ndarray
    minimum: float
    maximum: float
    frame_means: np.ndarray


def stack_summary(stack: ImageStack) -> StackSummary:
    """Temporal mean image and global/frame statistics."""
    frames = stack.frames
    return StackSummary(
        mean_image=frames.mean(axis=0),
        minimum=float(frames.min()),
        maximum=float(frames.max()),
        frame_means=frames.mean(axis=(1, 2)),
    )


def load_stack(
    path,
    *,
    pixel_size: float,
    wavelength: float,
    numerical_aperture: float,
    exposure: float | None = None,
) -> ImageStack:
    """Read a multi-page grayscale TIFF into an ImageStack.

    Color or palette images are rejected; calibration must be supplied by
    the caller since plain TIFF carries none.
    """
    pages = []
    with Image.open(path) as im:
        for page in ImageSequence.Iterator(im):
            if page.mode not in _GRAY_MODES:
                raise ValueError(
                    f"{path}: expected grayscale pages, got mode {page.mode!r}"
                )
            pages.append(np.array(page))
    if len(pages) < 2:
        raise ValueError(f"{path}: stack has {len(pages)} page(s), need >= 2")
    frames = np.stack(pages).astype(np.float64)
    return ImageStack(
        frames=frames,
        pixel_size=pixel_size,
        wavelength=wavelength,
        numerical_aperture=numerical_aperture,
        exposure=exposure,
    )


def save_stack(path, frames, dtype=None) -> None:
    """Write (T, H, W) data as a multi-page TIFF.

    dtype may be uint8, uint16 or float32; by default integer-valued data
    within the uint16 range is stored as uint16, everything else as
    float32. Values are not rescaled here.
    """
    arr = np.asarray(frames)
    if arr.ndim != 3:
        raise ValueError(f"expected (T, H, W) data, got shape {arr.shape}")
    if dtype is None:
        if arr.dtype in (np.uint8, np.uint16):
            dtype = arr.dtype
        elif np.issubdtype(arr.dtype, np.floating) or np.issubdtype(
            arr.dtype, np.integer
        ):
            as_int = np.all(arr == np.rint(arr))
            if as_int and arr.min() >= 0 and arr.max() < 65536:
                dtype = np.uint16
            else:
                dtype = np.float32
        else:
            raise ValueError(f"unsupported dtype {arr.dtype}")
    arr = arr.astype(dtype)
    pages = [Image.fromarray(a) for a in arr]
    pages[0].save(path, format="TIFF", save_all=True, append_images=pages[1:])


def save_image(path, image) -> None:
    """Write a single 2D image; format follows the dtype and extension.

    uint8 goes to PNG or TIFF, uint16 and float32 to TIFF.
    """
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {arr.shape}")
    if arr.dtype not in (np.uint8, np.uint16, np.float32):
        raise ValueError(f"unsupported dtype {arr.dtype}, convert explicitly")
    Image.fromarray(arr).save(path)


def load_image(path) -> np.ndarray:
    """Read a single grayscale image as written by save_image."""
    with Image.open(path) as im:
        if im.mode not in _GRAY_MODES:
            raise ValueError(f"{path}: expected grayscale, got mode {im.mode!r}")
        return np.array(im)
