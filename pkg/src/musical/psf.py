"""Point-spread-function models and steering vectors.

Two radially symmetric intensity profiles are provided: a Gaussian
approximation of the in-focus spot with a quadrature width growth for
out-of-focus emitters, and the in-focus Airy pattern. Steering vectors
sample a PSF centered on a hypothetical source over a square pixel
window and normalize to unit length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import j1

_KINDS = ("gaussian", "airy")

# Ratio between the first-zero radius of the Airy pattern and the sigma
# of the Gaussian that best matches its core.
_AIRY_TO_SIGMA = 2.9


@dataclass(frozen=True)
class PsfModel:
    """Imaging model parameters.

    kind            "gaussian" (supports defocus) or "airy" (in focus)
    wavelength      emission wavelength, nm
    numerical_aperture
    defocus_scale   dimensionless coupling between axial offset and
                    lateral width growth; 0 disables defocus blur. The
                    default approximates half the marginal-ray blur-cone
                    slope of a high-NA oil objective, where the width
                    asymptote is defocus_scale * |dz|.
    """

    kind: str = "gaussian"
    wavelength: float = 665.0
    numerical_aperture: float = 1.42
    defocus_scale: float = 1.4

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if not self.numerical_aperture > 0:
            raise ValueError("numerical_aperture must be positive")
        if self.defocus_scale < 0:
            raise ValueError("defocus_scale must be >= 0")

    @property
    def airy_radius(self) -> float:
        """Radius of the first Airy minimum, 0.61 wavelength / NA, in nm."""
        return 0.61 * self.wavelength / self.numerical_aperture

    @property
    def sigma(self) -> float:
        """In-focus Gaussian width in nm."""
        return self.airy_radius / _AIRY_TO_SIGMA


def lateral_sigma(model: PsfModel, dz=0.0):
    """Effective Gaussian width at axial offset dz (nm).

    Grows in quadrature so the in-focus width is recovered at dz = 0.
    """
    s = model.sigma
    return s * np.sqrt(1.0 + (np.asarray(dz) * model.defocus_scale / s) ** 2)


def psf_intensity(model: PsfModel, dx, dy, dz=0.0):
    """Intensity at lateral offset (dx, dy) from a source at axial dz.

    Peak-normalized in focus. The Gaussian variant keeps its integral
    constant under defocus by lowering the peak as the width grows; the
    Airy variant is an in-focus model and ignores dz. Inputs broadcast.
    """
    dx = np.asarray(dx, dtype=np.float64)
    dy = np.asarray(dy, dtype=np.float64)
    rho2 = dx * dx + dy * dy
    if model.kind == "gaussian":
        se = lateral_sigma(model, dz)
        amp = (model.sigma / se) ** 2
        out = amp * np.exp(-rho2 / (2.0 * se * se))
    else:
        v = (2.0 * np.pi * model.numerical_aperture / model.wavelength) * np.sqrt(
            rho2
        )
        v = np.asarray(v)
        out = np.ones_like(v)
        nz = v > 0
        out[nz] = (2.0 * j1(v[nz]) / v[nz]) ** 2
    if out.ndim == 0:
        return float(out)
    return out


def peak_integral(model: PsfModel) -> float:
    """Integral of the peak-normalized in-focus PSF over the plane, nm^2.

    Converts emitted photon counts into pixel expectations together with
    the pixel area. Invariant under the energy-preserving defocus of the
    Gaussian model.
    """
    if model.kind == "gaussian":
        return 2.0 * np.pi * model.sigma**2
    return model.wavelength**2 / (np.pi * model.numerical_aperture**2)


def window_offsets(side: int, pixel_size: float) -> np.ndarray:
    """Pixel-center coordinates of a window along one axis, nm.

    The window frame puts 0 at the center pixel's center; side is odd.
    """
    if side < 3 or side % 2 == 0:
        raise ValueError(f"window side must be odd and >= 3, got {side}")
    return (np.arange(side) - (side - 1) / 2.0) * pixel_size


def sample_psf_window(model: PsfModel, position, side: int, pixel_size: float):
    """Raw PSF samples over a side x side window, flattened row-major.

    position is (x, y, z) in the window frame (nm); pixels are sampled at
    their centers. No normalization is applied.
    """
    x, y, z = (float(c) for c in position)
    coords = window_offsets(side, pixel_size)
    dx = coords[None, :] - x
    dy = coords[:, None] - y
    return psf_intensity(model, dx, dy, z).ravel()


@dataclass(frozen=True)
class SteeringVector:
    """Unit-norm PSF fingerprint of a test source over a window."""

    values: np.ndarray
    position: tuple
    side: int
    pixel_size: float


def sample_steering_vector(
    model: PsfModel, position, side: int, pixel_size: float
) -> SteeringVector:
    """Sample and unit-normalize the PSF of a test source.

    position is (x, y, z) in the window frame, nm. Raises if the samples
    are identically zero.
    """
    raw = sample_psf_window(model, position, side, pixel_size)
    nrm = np.linalg.norm(raw)
    if nrm == 0.0:
        raise ValueError("PSF samples are all zero over the window")
    vals = raw / nrm
    vals.setflags(write=False)
    return SteeringVector(
        values=vals,
        position=tuple(float(c) for c in position),
        side=side,
        pixel_size=pixel_size,
    )


def steering_grid(
    model: PsfModel, side: int, pixel_size: float, subpixels: int
) -> np.ndarray:
    """Steering vectors for the subpixel test grid of the center pixel.

    Returns (subpixels^2, side^2) with unit rows, ordered row-major over
    the subpixel grid. Test points sit at the subpixel centers of the
    window's center pixel, in the focal plane.
    """
    if subpixels < 1:
        raise ValueError("subpixels must be >= 1")
    s = subpixels
    offs = ((np.arange(s) + 0.5) / s - 0.5) * pixel_size
    coords = window_offsets(side, pixel_size)
    # separable Gaussian evaluation would be possible; keep the generic
    # path so both PSF kinds share it
    rows = np.empty((s * s, side * side))
    for i, oy in enumerate(offs):
        dy = coords[:, None] - oy
        for k, ox in enumerate(offs):
            dx = coords[None, :] - ox
            rows[i * s + k] = psf_intensity(model, dx, dy, 0.0).ravel()
    nrm = np.linalg.norm(rows, axis=1, keepdims=True)
    if np.any(nrm == 0.0):
        raise ValueError("PSF samples are all zero over the window")
    return rows / nrm
